use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::callgraph::{CallGraph, Callee};
use super::category::{classify, Arch, Category};
use super::cfg::build_cfg_for;
use super::listing::{FunctionListing, Listing};
use super::loops::{detect_loops, innermost, nesting_depths};
use super::registry::{Aggregation, FeatureRegistry, SLOT_COUNT};
use crate::par::{self, Execution};

/// 62 values; `get(i)` uses the registry's 1-based slot numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub registry_version: String,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn zeros(registry: &FeatureRegistry) -> Self {
        FeatureVector {
            registry_version: registry.version.to_string(),
            values: vec![0.0; SLOT_COUNT],
        }
    }

    pub fn get(&self, index: usize) -> f64 {
        self.values[index - 1]
    }

    fn set(&mut self, index: usize, v: f64) {
        self.values[index - 1] = v;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureSet {
    pub registry_version: String,
    /// In listing order; names may repeat (e.g. two static functions).
    pub functions: Vec<(String, FeatureVector)>,
    pub aggregate: FeatureVector,
    pub warnings: Vec<String>,
}

impl FeatureSet {
    pub fn get(&self, name: &str) -> Option<&FeatureVector> {
        self.functions.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        a / b
    }
}

fn instruction_slots(v: &mut FeatureVector, arch: Arch, f: &FunctionListing, graph: &CallGraph, me: usize) {
    let mut count = |slot: usize| v.values[slot - 1] += 1.0;
    let mut mnemonics = BTreeSet::new();
    let mut bytes = 0u64;
    let mut external_sites = 0usize;
    for i in &f.instructions {
        let class = classify(arch, &i.mnemonic, &i.operand_text);
        count(1);
        count(match class.category {
            Category::DataTransfer => 2,
            Category::ControlTransfer => 3,
            Category::Unknown => 4,
            Category::Compare => 5,
            Category::Arithmetic => 6,
            Category::Logic => 7,
            Category::Shift => 10,
            Category::Call => 11,
            Category::Return => 12,
            Category::FloatingPoint => 13,
            Category::Vector => 14,
            Category::StringOp => 15,
            Category::Misc => 16,
        });
        if class.add_sub {
            count(8);
        }
        if class.mul_div {
            count(9);
        }
        if i.is_jump() {
            count(if i.is_conditional { 17 } else { 18 });
            if i.is_indirect() {
                count(20);
            }
        }
        if i.is_call && i.is_indirect() {
            count(19);
        }
        if class.push_pop {
            count(22);
        }
        if class.nop {
            count(23);
        }
        let lower = i.mnemonic.to_ascii_lowercase();
        if !class.nop && !lower.starts_with("lea") && (i.operand_text.contains('(') || i.operand_text.contains('[')) {
            count(36);
        }
        mnemonics.insert(lower);
        bytes += u64::from(i.byte_size);
    }
    for (callee, sites) in &graph.out[me] {
        if matches!(callee, Callee::External(_)) {
            external_sites += sites;
        }
    }
    let n = v.get(1);
    v.set(21, external_sites as f64);
    for (slot, of) in [
        (24, 2),
        (25, 3),
        (26, 6),
        (27, 7),
        (28, 5),
        (29, 11),
        (30, 13),
        (31, 14),
        (32, 4),
    ] {
        v.set(slot, ratio(v.get(of), n));
    }
    v.set(33, bytes as f64);
    v.set(34, ratio(bytes as f64, n));
    v.set(35, mnemonics.len() as f64);
}

fn cfg_slots(v: &mut FeatureVector, arch: Arch, f: &FunctionListing, warnings: &mut Vec<String>) {
    let cfg = build_cfg_for(arch, f);
    warnings.extend(cfg.warnings.iter().cloned());
    if cfg.blocks.is_empty() {
        return;
    }
    let loops = detect_loops(&cfg);
    let reachable = cfg.reachable();
    let nblocks = cfg.blocks.len() as f64;
    let edges = cfg.edge_count() as f64;
    v.set(37, nblocks);
    v.set(38, loops.len() as f64);
    v.set(39, innermost(&loops) as f64);
    v.set(40, edges);
    v.set(41, cfg.blocks.iter().filter(|b| b.successors.len() >= 2).count() as f64);
    v.set(42, loops.iter().map(|l| l.back_edges).sum::<usize>() as f64);
    v.set(43, nesting_depths(&loops).into_iter().max().unwrap_or(0) as f64);
    v.set(
        44,
        cfg.blocks
            .iter()
            .zip(&reachable)
            .filter(|(b, r)| **r && b.successors.is_empty())
            .count() as f64,
    );
    let reach_n = reachable.iter().filter(|r| **r).count();
    let reach_e = cfg.edges().filter(|(a, _)| reachable[*a]).count();
    v.set(45, (reach_e + 2 - reach_n) as f64);
    let sizes: Vec<usize> = loops.iter().map(|l| l.size).collect();
    v.set(46, sizes.iter().copied().max().unwrap_or(0) as f64);
    v.set(47, sizes.iter().copied().min().unwrap_or(0) as f64);
    v.set(48, ratio(sizes.iter().sum::<usize>() as f64, sizes.len() as f64));
    v.set(49, sizes.iter().sum::<usize>() as f64);
    v.set(50, ratio(f.instructions.len() as f64, nblocks));
    v.set(51, cfg.blocks.iter().map(|b| b.len()).max().unwrap_or(0) as f64);
    v.set(52, ratio(edges, nblocks));
    v.set(
        53,
        cfg.blocks.iter().map(|b| b.predecessors.len()).max().unwrap_or(0) as f64,
    );
    v.set(
        54,
        cfg.blocks.iter().map(|b| b.successors.len()).max().unwrap_or(0) as f64,
    );
    v.set(55, reachable.iter().filter(|r| !**r).count() as f64);
    let in_loops: BTreeSet<usize> = loops.iter().flat_map(|l| l.body.iter().copied()).collect();
    let looped: usize = in_loops.iter().map(|&b| cfg.blocks[b].len()).sum();
    v.set(56, ratio(looped as f64, f.instructions.len() as f64));
}

fn cg_slots(v: &mut FeatureVector, graph: &CallGraph, me: usize) {
    let out = &graph.out[me];
    v.set(57, out.len() as f64);
    v.set(58, graph.incoming[me].len() as f64);
    v.set(59, out.values().sum::<usize>() as f64);
    v.set(
        60,
        out.keys().filter(|c| matches!(c, Callee::External(_))).count() as f64,
    );
    v.set(61, if graph.recursive[me] { 1.0 } else { 0.0 });
    v.set(62, graph.incoming[me].values().sum::<usize>() as f64);
}

fn function_vector(
    registry: &FeatureRegistry,
    listing: &Listing,
    graph: &CallGraph,
    me: usize,
) -> (FeatureVector, Vec<String>) {
    let f = &listing.functions[me];
    let mut v = FeatureVector::zeros(registry);
    let mut warnings = Vec::new();
    if f.instructions.is_empty() {
        return (v, warnings);
    }
    instruction_slots(&mut v, listing.arch, f, graph, me);
    cfg_slots(&mut v, listing.arch, f, &mut warnings);
    cg_slots(&mut v, graph, me);
    (v, warnings)
}

/// Running state for the binary row; merging is associative and
/// commutative, so partial folds can be combined in any order.
#[derive(Clone, Debug)]
pub struct Aggregate {
    weight: f64,
    sums: Vec<f64>,
    weighted: Vec<f64>,
    maxes: Vec<f64>,
    min_positive: Vec<Option<f64>>,
}

impl Aggregate {
    pub fn empty() -> Self {
        Aggregate {
            weight: 0.0,
            sums: vec![0.0; SLOT_COUNT],
            weighted: vec![0.0; SLOT_COUNT],
            maxes: vec![0.0; SLOT_COUNT],
            min_positive: vec![None; SLOT_COUNT],
        }
    }

    pub fn of(v: &FeatureVector) -> Self {
        let w = v.get(1);
        Aggregate {
            weight: w,
            sums: v.values.clone(),
            weighted: v.values.iter().map(|x| x * w).collect(),
            maxes: v.values.clone(),
            min_positive: v.values.iter().map(|&x| (x > 0.0).then_some(x)).collect(),
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.weight += other.weight;
        for i in 0..SLOT_COUNT {
            self.sums[i] += other.sums[i];
            self.weighted[i] += other.weighted[i];
            self.maxes[i] = self.maxes[i].max(other.maxes[i]);
            self.min_positive[i] = match (self.min_positive[i], other.min_positive[i]) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
        self
    }

    pub fn finish(&self, registry: &FeatureRegistry) -> FeatureVector {
        let mut v = FeatureVector::zeros(registry);
        for (i, slot) in registry.slots.iter().enumerate() {
            v.values[i] = match slot.aggregation {
                Aggregation::Sum => self.sums[i],
                Aggregation::Mean => ratio(self.weighted[i], self.weight),
                Aggregation::Max => self.maxes[i],
                Aggregation::MinPositive => self.min_positive[i].unwrap_or(0.0),
            };
        }
        v
    }
}

pub fn aggregate(registry: &FeatureRegistry, vectors: &[FeatureVector]) -> FeatureVector {
    vectors
        .iter()
        .map(Aggregate::of)
        .fold(Aggregate::empty(), Aggregate::merge)
        .finish(registry)
}

/// Per-function vectors for every function in the listing plus the binary
/// aggregate row. Call-graph slots use the whole listing as scope.
pub fn extract_features(listing: &Listing, registry: &FeatureRegistry, exec: Execution) -> FeatureSet {
    let graph = CallGraph::build(listing);
    let results = par::map_range(exec, listing.functions.len(), |i| {
        function_vector(registry, listing, &graph, i)
    });
    let mut warnings = Vec::new();
    let mut functions = Vec::with_capacity(results.len());
    for (f, (v, w)) in listing.functions.iter().zip(results) {
        warnings.extend(w);
        functions.push((f.name.clone(), v));
    }
    let vectors: Vec<FeatureVector> = functions.iter().map(|(_, v)| v.clone()).collect();
    FeatureSet {
        registry_version: registry.version.to_string(),
        aggregate: aggregate(registry, &vectors),
        functions,
        warnings,
    }
}
