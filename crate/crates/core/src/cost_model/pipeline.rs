use serde::{Deserialize, Serialize};

use super::{Attr, CallSiteDescription, CostModelError, Hotness, InlineParams, NeverReason, OptLevel};

/// Highest-priority directive in `attrs`: optnone, noinline, minsize,
/// optsize, inlinehint, always_inline. Other attributes never win.
pub fn resolve_attributes<'a>(attrs: impl IntoIterator<Item = &'a Attr>) -> Option<Attr> {
    const ORDER: [Attr; 6] = [
        Attr::OptNone,
        Attr::NoInline,
        Attr::MinSize,
        Attr::OptSize,
        Attr::InlineHint,
        Attr::AlwaysInline,
    ];
    attrs
        .into_iter()
        .filter_map(|a| ORDER.iter().position(|o| o == a))
        .min()
        .map(|i| ORDER[i])
}

pub fn check_never_inline(site: &CallSiteDescription) -> Option<NeverReason> {
    let callee = &site.callee_attrs;
    let checks = [
        (site.misused_blockaddress, NeverReason::MisusedBlockAddress),
        (site.caller_attrs.contains(&Attr::OptNone), NeverReason::CallerOptNone),
        (
            site.caller_attrs.contains(&Attr::NoDuplicate),
            NeverReason::CallerNoDuplicate,
        ),
        (
            callee.contains(&Attr::AlwaysInline)
                && (callee.contains(&Attr::NoInline) || site.call_site_attrs.contains(&Attr::NoInline)),
            NeverReason::ConflictingAttributes,
        ),
        (site.incompatible_null_pointer, NeverReason::IncompatibleNullPointer),
        (
            [Attr::NoInline, Attr::OptNone, Attr::Naked]
                .iter()
                .any(|a| callee.contains(a)),
            NeverReason::CalleeNoInline,
        ),
        (
            site.callee_linkage == super::Linkage::Weak,
            NeverReason::InterposableCallee,
        ),
        (site.callee_is_unsplit_coroutine, NeverReason::UnsplitCoroutine),
        (
            site.call_site_attrs.contains(&Attr::NoInline),
            NeverReason::CallSiteNoInline,
        ),
        (site.byval_bad_addrspace, NeverReason::ByvalBadAddressSpace),
        (site.call_is_indirect, NeverReason::IndirectCall),
        (site.callee_has_dynamic_alloca, NeverReason::DynamicAlloca),
        (site.callee_returns_twice, NeverReason::ReturnsTwice),
        (site.callee_is_variadic, NeverReason::Variadic),
        (site.callee_has_indirect_branch, NeverReason::IndirectBranch),
        (site.callee_has_complex_intrinsic, NeverReason::ComplexIntrinsic),
        (site.callee_is_recursive, NeverReason::Recursive),
    ];
    checks.into_iter().find(|(hit, _)| *hit).map(|(_, r)| r)
}

pub fn init_threshold(opt_level: OptLevel, params: &InlineParams) -> i64 {
    match opt_level {
        OptLevel::O0 => 0,
        _ if params.threshold_overridden() => params.inline_threshold,
        OptLevel::O1 | OptLevel::O2 => params.inline_threshold,
        OptLevel::O3 => 250,
        OptLevel::Os => 50,
        OptLevel::Oz => 5,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Threshold,
    Cost,
    Note,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub stage: Stage,
    pub rule: String,
    pub delta: i64,
    pub value_after: i64,
}

impl TraceRecord {
    fn note(rule: impl Into<String>) -> Self {
        TraceRecord {
            stage: Stage::Note,
            rule: rule.into(),
            delta: 0,
            value_after: 0,
        }
    }
}

struct Tracker<'t> {
    stage: Stage,
    value: i64,
    trace: &'t mut Vec<TraceRecord>,
}

impl Tracker<'_> {
    fn set(&mut self, rule: &str, value: i64) {
        self.trace.push(TraceRecord {
            stage: self.stage,
            rule: rule.to_string(),
            delta: value - self.value,
            value_after: value,
        });
        self.value = value;
    }

    fn add(&mut self, rule: &str, delta: i64) {
        let v = self.value + delta;
        self.set(rule, v);
    }
}

pub fn adjust_threshold(base: i64, site: &CallSiteDescription, params: &InlineParams) -> i64 {
    adjust_threshold_traced(base, site, params, &mut Vec::new())
}

/// Applies the threshold rules in order, appending one record per rule that
/// fires. The running value starts at `base` without recording it.
pub fn adjust_threshold_traced(
    base: i64,
    site: &CallSiteDescription,
    params: &InlineParams,
    trace: &mut Vec<TraceRecord>,
) -> i64 {
    let caller_minsize = site.caller_attrs.contains(&Attr::MinSize);
    let mut t = Tracker {
        stage: Stage::Threshold,
        value: base,
        trace,
    };

    if !params.threshold_overridden() {
        if caller_minsize {
            let v = t.value.min(params.minsize_cap());
            t.set("minsize-caller", v);
        } else if site.caller_attrs.contains(&Attr::OptSize) {
            let v = t.value.min(params.optsize_cap());
            t.set("optsize-caller", v);
        }
    }
    if !caller_minsize && resolve_attributes(&site.callee_attrs) == Some(Attr::InlineHint) {
        let v = t.value.max(params.inlinehint_threshold);
        t.set("inlinehint", v);
    }
    match site.hotness {
        Hotness::Hot => {
            let v = t.value.max(params.hot_callsite_threshold);
            t.set("hot-callsite", v);
        }
        Hotness::LocallyHot => {
            let v = t.value.max(params.locally_hot_callsite_threshold);
            t.set("locally-hot-callsite", v);
        }
        Hotness::Cold => {
            let v = t.value.min(params.cold_callsite_threshold);
            t.set("cold-callsite", v);
        }
        Hotness::Neutral => {}
    }
    let body = &site.body_summary;
    if body.has_complex_branching && params.complex_branching_divisor != 1 {
        let v = t.value / params.complex_branching_divisor;
        t.set("complex-branching", v);
    }
    if body.vector_instruction_count > 0 && params.vector_divisor != 1 {
        let v = t.value / params.vector_divisor;
        t.set("vector-instructions", v);
    }
    if params.single_block_bonus_percent != 0
        && !body.has_complex_branching
        && site.hotness != Hotness::Cold
        && !caller_minsize
    {
        let bonus = t.value * params.single_block_bonus_percent / 100;
        t.add("single-block-bonus", bonus);
    }
    t.value
}

pub fn init_cost(site: &CallSiteDescription, params: &InlineParams) -> i64 {
    if site.is_last_call_to_static && site.callee_linkage.is_local() {
        params.last_call_to_static_bonus
    } else {
        0
    }
}

pub fn compute_cost(site: &CallSiteDescription, params: &InlineParams) -> Result<i64, CostModelError> {
    compute_cost_traced(site, params, &mut Vec::new())
}

/// Cost including [`init_cost`]; the first record carries the initial value.
pub fn compute_cost_traced(
    site: &CallSiteDescription,
    params: &InlineParams,
    trace: &mut Vec<TraceRecord>,
) -> Result<i64, CostModelError> {
    site.validate()?;
    let b = &site.body_summary;
    let ic = params.instruction_cost;
    let n = |v: u64| v as i64;
    let mut t = Tracker {
        stage: Stage::Cost,
        value: 0,
        trace,
    };
    let rule = if init_cost(site, params) != 0 {
        "last-call-to-static"
    } else {
        "init"
    };
    t.add(rule, init_cost(site, params));
    t.add("instructions", ic * n(b.instruction_count - b.simplified_away_count));
    t.add("call-penalty", params.inline_call_penalty * n(b.internal_call_count));
    t.add("intrinsics", ic * n(b.intrinsic_count));
    t.add("indirect-to-direct", -ic * n(b.indirect_to_direct_conversions));
    t.add("byval-args", -ic * n(b.byval_value_args));
    Ok(t.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "reason")]
pub enum Verdict {
    Never(NeverReason),
    Always,
    Inline,
    Decline,
}

impl Verdict {
    pub fn inlines(self) -> bool {
        matches!(self, Verdict::Always | Verdict::Inline)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InlineDecision {
    pub opt_level: OptLevel,
    pub params: InlineParams,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub cost: Option<i64>,
    pub threshold: Option<i64>,
    pub trace: Vec<TraceRecord>,
}

impl InlineDecision {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("decision serializes");
        s.push('\n');
        s
    }
}

pub fn decide(
    site: &CallSiteDescription,
    opt_level: OptLevel,
    params: &InlineParams,
) -> Result<InlineDecision, CostModelError> {
    site.validate()?;
    let mut trace = Vec::new();
    let done = |verdict, cost, threshold, trace| InlineDecision {
        opt_level,
        params: params.clone(),
        verdict,
        cost,
        threshold,
        trace,
    };

    if let Some(reason) = check_never_inline(site) {
        trace.push(TraceRecord::note(format!("never: {}", reason.description())));
        return Ok(done(Verdict::Never(reason), None, None, trace));
    }
    if resolve_attributes(&site.callee_attrs) == Some(Attr::AlwaysInline) {
        trace.push(TraceRecord::note("always: callee is always_inline"));
        return Ok(done(Verdict::Always, None, None, trace));
    }
    if site.caller_attrs.contains(&Attr::Flatten) {
        trace.push(TraceRecord::note("always: caller is flatten"));
        return Ok(done(Verdict::Always, None, None, trace));
    }
    if opt_level == OptLevel::O0 {
        trace.push(TraceRecord::note("O0: only always_inline callees are inlined"));
        return Ok(done(Verdict::Decline, Some(0), Some(0), trace));
    }

    let base = init_threshold(opt_level, params);
    let init_rule = if params.threshold_overridden() {
        "init:inline-threshold".to_string()
    } else {
        format!("init:{opt_level}")
    };
    trace.push(TraceRecord {
        stage: Stage::Threshold,
        rule: init_rule,
        delta: base,
        value_after: base,
    });
    let threshold = adjust_threshold_traced(base, site, params, &mut trace);
    let cost = compute_cost_traced(site, params, &mut trace)?;
    if params.cost_benefit_analysis {
        trace.push(TraceRecord::note(format!(
            "cost-benefit analysis requested (savings multiplier {}, size allowance {}); verdict unchanged",
            params.inline_savings_multiplier, params.inline_size_allowance
        )));
    }
    let verdict = if cost < threshold {
        Verdict::Inline
    } else {
        Verdict::Decline
    };
    Ok(done(verdict, Some(cost), Some(threshold), trace))
}
