use serde::{Deserialize, Serialize};

use super::FeatureError;

pub const REGISTRY_VERSION: &str = "isc-62.v1";
pub const SLOT_COUNT: usize = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotGroup {
    Instruction,
    Cfg,
    Cg,
}

/// How per-function values combine into the binary row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    Sum,
    /// Mean weighted by each function's instruction count.
    Mean,
    Max,
    /// Smallest non-zero value; zero when every value is zero.
    MinPositive,
}

/// Where a slot's meaning comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    /// The slot's meaning is fixed by the published study.
    Study,
    /// The study cites the index but not its meaning.
    IndexOnly,
    /// Repository convention.
    Convention,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SlotDef {
    pub index: usize,
    pub name: &'static str,
    pub group: SlotGroup,
    pub aggregation: Aggregation,
    pub anchor: Anchor,
    pub definition: &'static str,
}

macro_rules! slots {
    ($( $idx:literal $name:literal $group:ident $agg:ident $anchor:ident $def:literal ;)*) => {
        &[$(SlotDef {
            index: $idx,
            name: $name,
            group: SlotGroup::$group,
            aggregation: Aggregation::$agg,
            anchor: Anchor::$anchor,
            definition: $def,
        }),*]
    };
}

static SLOTS_V1: &[SlotDef] = slots! {
    1 "instructions" Instruction Sum Convention "number of instructions";
    2 "data_transfer" Instruction Sum Convention "data-transfer instructions (mov family, push/pop, cmov, set, extends)";
    3 "control_transfer" Instruction Sum IndexOnly "jumps and conditional branches (calls and returns excluded)";
    4 "unknown" Instruction Sum Study "number of unknown instructions (mnemonic outside the registry)";
    5 "compare" Instruction Sum Convention "compare and test instructions";
    6 "arithmetic" Instruction Sum Study "arithmetic instructions";
    7 "logic" Instruction Sum Convention "bitwise logic and bit-manipulation instructions";
    8 "add_sub" Instruction Sum Study "add/sub family (add, adc, sub, sbb, inc, dec, neg, ...), a subset of arithmetic";
    9 "mul_div" Instruction Sum Convention "multiply and divide instructions, a subset of arithmetic";
    10 "shift" Instruction Sum Convention "shift and rotate instructions";
    11 "call" Instruction Sum Convention "call instructions";
    12 "return" Instruction Sum Convention "return instructions";
    13 "floating_point" Instruction Sum Convention "x87 and scalar SSE/VFP floating-point instructions";
    14 "vector" Instruction Sum Convention "packed SIMD instructions";
    15 "string_op" Instruction Sum Convention "string instructions (movs, stos, lods, scas, cmps, ins, outs)";
    16 "misc" Instruction Sum Convention "system, fence, hint and nop instructions";
    17 "conditional_branches" Instruction Sum Convention "conditional branches";
    18 "unconditional_jumps" Instruction Sum Convention "unconditional jumps";
    19 "indirect_calls" Instruction Sum Convention "calls without an explicit target";
    20 "indirect_jumps" Instruction Sum Convention "jumps without an explicit target";
    21 "external_calls" Instruction Sum Convention "direct calls to functions not defined in the listing (PLT stubs count as external)";
    22 "push_pop" Instruction Sum Convention "push and pop instructions";
    23 "nops" Instruction Sum IndexOnly "nop instructions, including padding";
    24 "data_transfer_ratio" Instruction Mean Convention "slot 2 / slot 1";
    25 "control_transfer_ratio" Instruction Mean Convention "slot 3 / slot 1";
    26 "arithmetic_ratio" Instruction Mean Convention "slot 6 / slot 1";
    27 "logic_ratio" Instruction Mean Convention "slot 7 / slot 1";
    28 "compare_ratio" Instruction Mean Convention "slot 5 / slot 1";
    29 "call_ratio" Instruction Mean Convention "slot 11 / slot 1";
    30 "floating_point_ratio" Instruction Mean Convention "slot 13 / slot 1";
    31 "vector_ratio" Instruction Mean Convention "slot 14 / slot 1";
    32 "unknown_ratio" Instruction Mean IndexOnly "slot 4 / slot 1";
    33 "bytes" Instruction Sum Convention "total encoded size in bytes";
    34 "mean_instruction_bytes" Instruction Mean Convention "slot 33 / slot 1";
    35 "distinct_mnemonics" Instruction Max Convention "number of distinct mnemonics (prefixes included)";
    36 "memory_operands" Instruction Sum Convention "instructions with a memory operand, excluding lea and nop";
    37 "blocks" Cfg Sum Convention "basic blocks";
    38 "loops" Cfg Sum Study "natural loops (back edges sharing a header merge)";
    39 "innermost_loops" Cfg Sum Study "loops containing no other loop";
    40 "edges" Cfg Sum Convention "intra-function CFG edges";
    41 "conditional_blocks" Cfg Sum IndexOnly "blocks with two or more successors";
    42 "back_edges" Cfg Sum Convention "edges whose target dominates their source";
    43 "max_loop_depth" Cfg Max Convention "deepest loop nesting (0 without loops)";
    44 "exit_blocks" Cfg Sum Convention "reachable blocks without successors";
    45 "cyclomatic" Cfg Sum Convention "edges - blocks + 2 over the reachable subgraph";
    46 "max_loop_size" Cfg Max Study "instructions in the largest loop";
    47 "min_loop_size" Cfg MinPositive Convention "instructions in the smallest loop";
    48 "mean_loop_size" Cfg Mean Study "mean instructions per loop";
    49 "total_loop_size" Cfg Sum Study "sum of loop sizes (nested loops count in each enclosing loop)";
    50 "mean_block_size" Cfg Mean Convention "mean instructions per block";
    51 "max_block_size" Cfg Max Convention "instructions in the largest block";
    52 "mean_out_degree" Cfg Mean Convention "edges / blocks";
    53 "max_in_degree" Cfg Max Convention "largest predecessor count";
    54 "max_out_degree" Cfg Max Convention "largest successor count";
    55 "unreachable_blocks" Cfg Sum Convention "blocks not reachable from the entry";
    56 "loop_instruction_fraction" Cfg Mean Convention "fraction of instructions inside some loop";
    57 "callees" Cg Sum IndexOnly "distinct callees; all indirect calls share one 'indirect' callee";
    58 "callers" Cg Sum IndexOnly "distinct functions in the listing that call this one";
    59 "call_sites" Cg Sum IndexOnly "outgoing call sites";
    60 "external_callees" Cg Sum IndexOnly "distinct callees not defined in the listing";
    61 "recursive" Cg Max IndexOnly "1 when the function lies on a call-graph cycle, else 0";
    62 "incoming_call_sites" Cg Sum IndexOnly "call sites in the listing that target this function";
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FeatureRegistry {
    pub version: &'static str,
    pub slots: &'static [SlotDef],
}

impl Default for FeatureRegistry {
    fn default() -> Self {
        FeatureRegistry {
            version: REGISTRY_VERSION,
            slots: SLOTS_V1,
        }
    }
}

impl FeatureRegistry {
    pub fn load(version: &str) -> Result<Self, FeatureError> {
        match version {
            REGISTRY_VERSION => Ok(Self::default()),
            other => Err(FeatureError::UnknownRegistryVersion(other.to_string())),
        }
    }

    pub fn slot(&self, index: usize) -> Option<&SlotDef> {
        self.slots.get(index.checked_sub(1)?)
    }

    pub fn by_name(&self, name: &str) -> Option<&SlotDef> {
        self.slots.iter().find(|s| s.name == name)
    }
}
