//! A standalone simulator of the inliner's per-call-site decision.
//!
//! The pipeline runs never-inline checks, attribute resolution, threshold
//! initialisation and adjustment, cost computation, and finally the
//! `cost < threshold` comparison. Every adjustment is recorded in a trace.

mod params;
mod parity;
mod pipeline;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use params::InlineParams;
pub use parity::{check_case, ParityCase, ParityRow};
pub use pipeline::{
    adjust_threshold, adjust_threshold_traced, check_never_inline, compute_cost, compute_cost_traced, decide,
    init_cost, init_threshold, resolve_attributes, InlineDecision, Stage, TraceRecord, Verdict,
};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CostModelError {
    #[error("negative count: {0}")]
    NegativeCount(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Attr {
    AlwaysInline,
    InlineHint,
    NoInline,
    OptNone,
    Naked,
    MinSize,
    OptSize,
    NoDuplicate,
    Flatten,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Linkage {
    #[default]
    External,
    Internal,
    Private,
    #[serde(alias = "Interposable")]
    Weak,
}

impl Linkage {
    pub fn is_local(self) -> bool {
        matches!(self, Linkage::Internal | Linkage::Private)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hotness {
    Cold,
    #[default]
    Neutral,
    LocallyHot,
    Hot,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BodySummary {
    pub instruction_count: u64,
    pub simplified_away_count: u64,
    pub internal_call_count: u64,
    pub intrinsic_count: u64,
    pub vector_instruction_count: u64,
    pub has_complex_branching: bool,
    pub indirect_to_direct_conversions: u64,
    pub byval_value_args: u64,
}

/// One call site as seen by the inliner.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CallSiteDescription {
    pub callee_attrs: BTreeSet<Attr>,
    pub caller_attrs: BTreeSet<Attr>,
    /// Attributes on the call instruction itself (e.g. a `noinline` call).
    pub call_site_attrs: BTreeSet<Attr>,
    pub callee_linkage: Linkage,
    pub callee_is_recursive: bool,
    pub callee_is_variadic: bool,
    pub callee_returns_twice: bool,
    pub callee_has_indirect_branch: bool,
    pub callee_is_unsplit_coroutine: bool,
    pub callee_has_dynamic_alloca: bool,
    pub callee_has_complex_intrinsic: bool,
    pub call_is_indirect: bool,
    pub byval_bad_addrspace: bool,
    pub incompatible_null_pointer: bool,
    pub misused_blockaddress: bool,
    pub is_last_call_to_static: bool,
    pub hotness: Hotness,
    pub body_summary: BodySummary,
}

impl CallSiteDescription {
    pub fn validate(&self) -> Result<(), CostModelError> {
        let b = &self.body_summary;
        if b.simplified_away_count > b.instruction_count {
            return Err(CostModelError::NegativeCount(format!(
                "simplified_away_count {} exceeds instruction_count {}",
                b.simplified_away_count, b.instruction_count
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OptLevel {
    O0,
    O1,
    #[default]
    O2,
    O3,
    Os,
    Oz,
}

impl OptLevel {
    pub const ALL: [OptLevel; 6] = [
        OptLevel::O0,
        OptLevel::O1,
        OptLevel::O2,
        OptLevel::O3,
        OptLevel::Os,
        OptLevel::Oz,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OptLevel::O0 => "O0",
            OptLevel::O1 => "O1",
            OptLevel::O2 => "O2",
            OptLevel::O3 => "O3",
            OptLevel::Os => "Os",
            OptLevel::Oz => "Oz",
        }
    }
}

impl fmt::Display for OptLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OptLevel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim_start_matches('-');
        OptLevel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| format!("unknown optimization level {s:?} (expected one of O0 O1 O2 O3 Os Oz)"))
    }
}

/// Never-inline heuristics, in evaluation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NeverReason {
    MisusedBlockAddress,
    CallerOptNone,
    CallerNoDuplicate,
    ConflictingAttributes,
    IncompatibleNullPointer,
    CalleeNoInline,
    InterposableCallee,
    UnsplitCoroutine,
    CallSiteNoInline,
    ByvalBadAddressSpace,
    IndirectCall,
    DynamicAlloca,
    ReturnsTwice,
    Variadic,
    IndirectBranch,
    ComplexIntrinsic,
    Recursive,
}

impl NeverReason {
    pub fn description(self) -> &'static str {
        match self {
            NeverReason::MisusedBlockAddress => "callee's block address is used outside the callee",
            NeverReason::CallerOptNone => "caller is optnone",
            NeverReason::CallerNoDuplicate => "caller forbids duplication",
            NeverReason::ConflictingAttributes => "callee is both always_inline and noinline",
            NeverReason::IncompatibleNullPointer => "null-pointer semantics differ between caller and callee",
            NeverReason::CalleeNoInline => "callee is noinline",
            NeverReason::InterposableCallee => "callee definition may be replaced at link or load time",
            NeverReason::UnsplitCoroutine => "callee is an unsplit coroutine",
            NeverReason::CallSiteNoInline => "call site is noinline",
            NeverReason::ByvalBadAddressSpace => "byval argument in a non-default address space",
            NeverReason::IndirectCall => "indirect call with unknown target",
            NeverReason::DynamicAlloca => "callee has a dynamic alloca",
            NeverReason::ReturnsTwice => "callee returns twice",
            NeverReason::Variadic => "callee initializes variadic arguments",
            NeverReason::IndirectBranch => "callee has an indirect branch",
            NeverReason::ComplexIntrinsic => "callee uses an intrinsic that cannot be inlined",
            NeverReason::Recursive => "callee is recursive",
        }
    }
}
