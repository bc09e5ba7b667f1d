use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::report::InliningReport;
use super::Presence;

/// Where the baseline's functions ended up in a variant build.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowCounts {
    pub not_inlined: u64,
    pub inlined_remaining: u64,
    pub inlined_eliminated: u64,
    pub only_in_baseline: u64,
    pub only_in_variant: u64,
    pub warnings: Vec<String>,
}

impl FlowCounts {
    pub fn intersection(&self) -> u64 {
        self.not_inlined + self.inlined_remaining + self.inlined_eliminated
    }
}

/// Matches functions by name and buckets each shared name by its presence in
/// `variant`.
pub fn delta_flow(baseline: &InliningReport, variant: &InliningReport) -> FlowCounts {
    let theirs: BTreeMap<&str, Presence> = variant.entries.iter().map(|f| (f.name.as_str(), f.presence)).collect();
    let mut flow = FlowCounts::default();
    let mut missing = Vec::new();
    let mut seen = 0usize;
    for f in &baseline.entries {
        match theirs.get(f.name.as_str()) {
            Some(Presence::NeverInlined) => flow.not_inlined += 1,
            Some(Presence::InlinedRemaining) => flow.inlined_remaining += 1,
            Some(Presence::InlinedEliminated) => flow.inlined_eliminated += 1,
            None => {
                flow.only_in_baseline += 1;
                missing.push(f.name.as_str());
                continue;
            }
        }
        seen += 1;
    }
    flow.only_in_variant = (theirs.len() - seen.min(theirs.len())) as u64;
    if !missing.is_empty() {
        const SHOWN: usize = 10;
        let mut msg = format!(
            "{} baseline function(s) have no record in {}: {}",
            missing.len(),
            variant.binary_id,
            missing.iter().take(SHOWN).copied().collect::<Vec<_>>().join(", ")
        );
        if missing.len() > SHOWN {
            msg.push_str(", ...");
        }
        flow.warnings.push(msg);
    }
    flow
}
