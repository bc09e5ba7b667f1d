//! Inlining remarks (`-Rpass=inline` and friends) as structured records.

mod parse;
mod reconcile;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use parse::{parse_remark_line, parse_remark_stream, parse_remark_stream_detailed, ParsedStream};
pub use reconcile::{reconcile, DiscrepancyReport};

/// Histogram key for missed remarks that carry no reason text.
pub const NO_REASON: &str = "<none>";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RemarkKind {
    Passed,
    Missed,
    Analysis,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceLocation {
    pub file: String,
    pub line: u32,
    pub column: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InlineRemark {
    pub kind: RemarkKind,
    pub callee: String,
    pub caller: String,
    pub cost: Option<i64>,
    pub threshold: Option<i64>,
    pub reason: Option<String>,
    pub location: Option<SourceLocation>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemarkSummary {
    pub passed_count: u64,
    pub missed_count: u64,
    pub analysis_count: u64,
    pub reason_histogram: BTreeMap<String, u64>,
    pub inlined_pairs: BTreeSet<(String, String)>,
}

pub fn summarize(remarks: &[InlineRemark]) -> RemarkSummary {
    let mut s = RemarkSummary::default();
    for r in remarks {
        match r.kind {
            RemarkKind::Passed => {
                s.passed_count += 1;
                s.inlined_pairs.insert((r.caller.clone(), r.callee.clone()));
            }
            RemarkKind::Missed => {
                s.missed_count += 1;
                let key = r.reason.clone().unwrap_or_else(|| NO_REASON.to_string());
                *s.reason_histogram.entry(key).or_default() += 1;
            }
            RemarkKind::Analysis => s.analysis_count += 1,
        }
    }
    s
}

/// Canonical JSON form: a pretty-printed array.
pub fn to_json(remarks: &[InlineRemark]) -> String {
    let mut s = serde_json::to_string_pretty(remarks).expect("remarks serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> serde_json::Result<Vec<InlineRemark>> {
    serde_json::from_str(text)
}
