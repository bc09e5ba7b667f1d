use serde::{Deserialize, Serialize};

use super::{decide, CallSiteDescription, InlineParams, OptLevel, Verdict};
use crate::remarks::{InlineRemark, RemarkKind};

/// One single-call-site snippet with its simulator input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityCase {
    pub source: String,
    pub opt_level: OptLevel,
    #[serde(default)]
    pub flags: Vec<String>,
    pub caller: String,
    pub callee: String,
    /// Profile-dependent cases only need a matching verdict.
    #[serde(default)]
    pub profile: bool,
    pub site: CallSiteDescription,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityRow {
    pub case: String,
    pub compiler_inlined: bool,
    pub compiler_threshold: Option<i64>,
    pub verdict: Verdict,
    pub threshold: Option<i64>,
    pub verdict_match: bool,
    /// `None` when the compiler reported no numeric threshold.
    pub threshold_match: Option<bool>,
}

/// Compares the simulator against the compiler's remark for the case's
/// call site. `None` when the stream has no remark for that pair.
pub fn check_case(name: &str, case: &ParityCase, remarks: &[InlineRemark], params: &InlineParams) -> Option<ParityRow> {
    let remark = remarks
        .iter()
        .find(|r| r.callee == case.callee && r.caller == case.caller && r.kind != RemarkKind::Analysis)?;
    let decision = decide(&case.site, case.opt_level, params).ok()?;
    let compiler_inlined = remark.kind == RemarkKind::Passed;
    let threshold_match = match (remark.threshold, case.profile) {
        (Some(t), false) => Some(decision.threshold == Some(t)),
        _ => None,
    };
    Some(ParityRow {
        case: name.to_string(),
        compiler_inlined,
        compiler_threshold: remark.threshold,
        verdict: decision.verdict,
        threshold: decision.threshold,
        verdict_match: decision.verdict.inlines() == compiler_inlined,
        threshold_match,
    })
}
