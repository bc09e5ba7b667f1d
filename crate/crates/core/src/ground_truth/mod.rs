//! Function-level inlining ground truth recovered from DWARF.
//!
//! A binary built with `-g` records, for every source function, whether an
//! abstract instance exists (`DW_AT_inline`), whether an out-of-line body was
//! emitted (`DW_AT_low_pc` / `DW_AT_ranges`), and every place its body was
//! inlined (`DW_TAG_inlined_subroutine`). Combined with the ELF symbol table
//! this tells us, per function, whether it was never inlined, inlined but
//! still present, or inlined and eliminated.

mod dwarf;
mod elf;
mod flow;
mod report;

use serde::{Deserialize, Serialize};

pub use dwarf::{extract_functions, extract_inline_instances, scan, DebugScan};
pub use elf::{function_symbols, SymbolRecord};
pub use flow::{delta_flow, FlowCounts};
pub use report::{binary_id, classify_presence, compute_inlining_report, reports_for_paths, InliningReport, Totals};

#[derive(Debug, thiserror::Error)]
pub enum GroundTruthError {
    #[error("not a readable ELF file: {0}")]
    MalformedElf(String),
    #[error("binary carries no DWARF debug info")]
    MissingDebugInfo,
    #[error("malformed DWARF near .debug_info offset {offset:#x}: {message}")]
    MalformedDwarf { offset: u64, message: String },
    #[error("binary describes no named functions; inlining ratio is undefined")]
    EmptyFunctionUniverse,
}

pub type Result<T, E = GroundTruthError> = std::result::Result<T, E>;

/// Decoded `DW_AT_inline` constant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InlineAttr {
    #[default]
    NotInlined,
    Inlined,
    DeclaredNotInlined,
    DeclaredInlined,
}

impl InlineAttr {
    pub fn from_constant(value: u64) -> Option<Self> {
        match value {
            0 => Some(InlineAttr::NotInlined),
            1 => Some(InlineAttr::Inlined),
            2 => Some(InlineAttr::DeclaredNotInlined),
            3 => Some(InlineAttr::DeclaredInlined),
            _ => None,
        }
    }

    /// True for the two constants that say the compiler inlined the function.
    pub fn says_inlined(self) -> bool {
        matches!(self, InlineAttr::Inlined | InlineAttr::DeclaredInlined)
    }

    // Merge precedence when several DIEs describe the same name.
    fn rank(self) -> u8 {
        match self {
            InlineAttr::NotInlined => 0,
            InlineAttr::DeclaredNotInlined => 1,
            InlineAttr::Inlined => 2,
            InlineAttr::DeclaredInlined => 3,
        }
    }

    pub(crate) fn merge(self, other: InlineAttr) -> InlineAttr {
        if other.rank() > self.rank() {
            other
        } else {
            self
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Presence {
    #[default]
    NeverInlined,
    InlinedRemaining,
    InlinedEliminated,
}

impl Presence {
    pub fn is_inlined(self) -> bool {
        self != Presence::NeverInlined
    }
}

/// One source-level function, merged across all DIEs that carry its name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionEntry {
    pub name: String,
    pub decl_file: Option<String>,
    pub inline_attr: InlineAttr,
    pub has_concrete_range: bool,
    pub presence: Presence,
    pub symbol_present: bool,
    pub inline_instance_count: u64,
    /// Compiler-generated clone (`.isra.`, `.part.`, ...). Still counted.
    pub artificial: bool,
}

/// One `DW_TAG_inlined_subroutine`: a copy of a callee's body inside a host.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InlineInstance {
    /// Name of the inlined callee; resolves to exactly one [`FunctionEntry`].
    pub abstract_origin: String,
    pub host_function: Option<String>,
    pub call_file: Option<String>,
    pub call_line: Option<u64>,
    pub call_column: Option<u64>,
    pub pc_ranges: Vec<(u64, u64)>,
}

const ARTIFICIAL_MARKERS: &[&str] = &[".isra.", ".part.", ".constprop.", ".cold", ".llvm."];

pub(crate) fn is_artificial_name(name: &str) -> bool {
    ARTIFICIAL_MARKERS.iter().any(|m| name.contains(m))
}

/// Renders a ratio the way every report and CSV in this crate does.
pub fn format_ratio(ratio: f64) -> String {
    format!("{ratio:.4}")
}
