use std::fmt::Write;
use std::path::Path;

use inlinescope::features::registry::{Aggregation, Anchor, SlotGroup};
use inlinescope::features::FeatureRegistry;

fn render() -> String {
    let r = FeatureRegistry::default();
    let mut s = format!("# Feature registry `{}`\n\n", r.version);
    s += "Every feature vector has 62 slots, numbered from 1. Slots 1 to 36 describe instructions, \
37 to 56 the control-flow graph, 57 to 62 the call graph.\n\n\
The `anchor` column says where a slot's meaning comes from:\n\n\
- `study`: fixed by the published study.\n\
- `index-only`: the study cites the slot number without a definition, so the definition here is ours.\n\
- `convention`: defined by this repository.\n\n\
`aggregation` is how per-function values combine into the whole-binary row. \
`mean` is weighted by each function's instruction count. \
`min-positive` is the smallest non-zero value, or zero when all are zero.\n\n\
Changing any definition requires a new registry version.\n\n\
| slot | name | group | aggregation | anchor | definition |\n|---:|---|---|---|---|---|\n";
    for d in r.slots {
        let group = match d.group {
            SlotGroup::Instruction => "instruction",
            SlotGroup::Cfg => "cfg",
            SlotGroup::Cg => "call graph",
        };
        let agg = match d.aggregation {
            Aggregation::Sum => "sum",
            Aggregation::Mean => "mean",
            Aggregation::Max => "max",
            Aggregation::MinPositive => "min-positive",
        };
        let anchor = match d.anchor {
            Anchor::Study => "study",
            Anchor::IndexOnly => "index-only",
            Anchor::Convention => "convention",
        };
        let _ = writeln!(
            s,
            "| {} | `{}` | {group} | {agg} | {anchor} | {} |",
            d.index, d.name, d.definition
        );
    }
    s
}

#[test]
fn registry_doc_matches_registry() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../REGISTRY.md");
    let want = render();
    if std::env::var_os("INLINESCOPE_BLESS").is_some() {
        std::fs::write(&path, &want).unwrap();
    }
    let have = std::fs::read_to_string(&path).expect("REGISTRY.md present");
    assert!(have == want, "REGISTRY.md is stale; rerun with INLINESCOPE_BLESS=1");
}
