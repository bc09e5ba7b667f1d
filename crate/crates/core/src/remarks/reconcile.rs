use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{InlineRemark, RemarkKind};
use crate::ground_truth::InliningReport;

/// Names on which the remark stream and DWARF disagree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub in_remarks_not_dwarf: BTreeSet<String>,
    pub in_dwarf_not_remarks: BTreeSet<String>,
    pub agreed: BTreeSet<String>,
}

/// Compares callees of passed remarks against functions DWARF shows as
/// inlined. Both inputs should come from the same build.
pub fn reconcile(remarks: &[InlineRemark], report: &InliningReport) -> DiscrepancyReport {
    let said: BTreeSet<&str> = remarks
        .iter()
        .filter(|r| r.kind == RemarkKind::Passed)
        .map(|r| r.callee.as_str())
        .collect();
    let seen: BTreeSet<&str> = report
        .entries
        .iter()
        .filter(|f| f.presence.is_inlined())
        .map(|f| f.name.as_str())
        .collect();
    let own = |it: std::collections::btree_set::Difference<'_, &str>| it.map(|s| s.to_string()).collect();
    DiscrepancyReport {
        in_remarks_not_dwarf: own(said.difference(&seen)),
        in_dwarf_not_remarks: own(seen.difference(&said)),
        agreed: said.intersection(&seen).map(|s| s.to_string()).collect(),
    }
}
