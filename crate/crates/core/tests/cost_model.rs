use std::collections::BTreeSet;

use inlinescope::cost_model::{
    check_never_inline, compute_cost, decide, init_cost, init_threshold, resolve_attributes, Attr, BodySummary,
    CallSiteDescription, Hotness, InlineDecision, InlineParams, Linkage, OptLevel, Stage, Verdict,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// Highest priority first.
const PRECEDENCE: [Attr; 6] = [
    Attr::OptNone,
    Attr::NoInline,
    Attr::MinSize,
    Attr::OptSize,
    Attr::InlineHint,
    Attr::AlwaysInline,
];

#[test]
fn documented_constants() {
    let p = InlineParams::default();
    let levels = [
        (OptLevel::Oz, 5),
        (OptLevel::Os, 50),
        (OptLevel::O1, 225),
        (OptLevel::O2, 225),
        (OptLevel::O3, 250),
    ];
    for (lvl, t) in levels {
        assert_eq!(init_threshold(lvl, &p), t, "{lvl}");
    }
    assert_eq!(
        [
            p.inline_threshold,
            p.inlinehint_threshold,
            p.cold_callsite_threshold,
            p.hot_callsite_threshold,
            p.locally_hot_callsite_threshold,
            p.cold_callsite_rel_freq,
            p.hot_callsite_rel_freq,
            p.inline_call_penalty,
            p.inline_savings_multiplier,
            p.inline_size_allowance,
        ],
        [225, 335, 45, 3000, 525, 2, 60, 25, 8, 100]
    );
    let site = CallSiteDescription {
        callee_linkage: Linkage::Internal,
        is_last_call_to_static: true,
        ..Default::default()
    };
    assert_eq!(init_cost(&site, &p), -15000);
    assert_eq!(compute_cost(&site, &p).unwrap(), -15000);
}

#[test]
fn precedence_over_every_subset_and_ordering() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a7e);
    for mask in 0u32..64 {
        let subset: Vec<Attr> = (0..6).filter(|i| mask & (1 << i) != 0).map(|i| PRECEDENCE[i]).collect();
        let expected = PRECEDENCE.iter().copied().find(|a| subset.contains(a));
        assert_eq!(resolve_attributes(&subset), expected, "{subset:?}");
        for _ in 0..24 {
            let mut shuffled = subset.clone();
            shuffled.shuffle(&mut rng);
            assert_eq!(resolve_attributes(&shuffled), expected);
        }
        let again: Vec<Attr> = expected.into_iter().collect();
        assert_eq!(resolve_attributes(&again), expected);
        let doubled: Vec<Attr> = subset.iter().chain(subset.iter()).copied().collect();
        assert_eq!(resolve_attributes(&doubled), expected);
    }
}

fn attr_set() -> impl Strategy<Value = BTreeSet<Attr>> {
    prop::collection::btree_set(
        prop::sample::select(vec![
            Attr::AlwaysInline,
            Attr::InlineHint,
            Attr::NoInline,
            Attr::OptNone,
            Attr::Naked,
            Attr::MinSize,
            Attr::OptSize,
            Attr::NoDuplicate,
            Attr::Flatten,
        ]),
        0..4,
    )
}

fn body() -> impl Strategy<Value = BodySummary> {
    (
        0u64..400,
        0u64..400,
        0u64..6,
        0u64..6,
        0u64..4,
        any::<bool>(),
        0u64..3,
        0u64..3,
    )
        .prop_map(|(n, s, calls, intr, vec, complex, ind, byval)| BodySummary {
            instruction_count: n.max(s),
            simplified_away_count: s.min(n),
            internal_call_count: calls,
            intrinsic_count: intr,
            vector_instruction_count: vec,
            has_complex_branching: complex,
            indirect_to_direct_conversions: ind,
            byval_value_args: byval,
        })
}

prop_compose! {
    fn plain_site()(
        callee_attrs in attr_set(),
        caller_attrs in attr_set(),
        linkage in prop::sample::select(vec![Linkage::External, Linkage::Internal, Linkage::Private]),
        last in any::<bool>(),
        hotness in prop::sample::select(vec![Hotness::Cold, Hotness::Neutral, Hotness::LocallyHot, Hotness::Hot]),
        body in body(),
    ) -> CallSiteDescription {
        CallSiteDescription {
            callee_attrs,
            caller_attrs,
            callee_linkage: linkage,
            is_last_call_to_static: last,
            hotness,
            body_summary: body,
            ..Default::default()
        }
    }
}

fn level() -> impl Strategy<Value = OptLevel> {
    prop::sample::select(OptLevel::ALL.to_vec())
}

fn params() -> impl Strategy<Value = InlineParams> {
    (any::<bool>(), prop::option::of(0i64..20000)).prop_map(|(clang, threshold)| {
        let mut p = if clang {
            InlineParams::clang14()
        } else {
            InlineParams::default()
        };
        if let Some(t) = threshold {
            p.inline_threshold = t;
        }
        p
    })
}

fn set_never(site: &mut CallSiteDescription, which: usize) {
    match which {
        0 => site.callee_is_recursive = true,
        1 => site.callee_is_variadic = true,
        2 => site.callee_returns_twice = true,
        3 => site.callee_has_indirect_branch = true,
        4 => site.callee_is_unsplit_coroutine = true,
        5 => site.callee_has_dynamic_alloca = true,
        6 => site.callee_has_complex_intrinsic = true,
        7 => site.call_is_indirect = true,
        8 => site.byval_bad_addrspace = true,
        9 => site.incompatible_null_pointer = true,
        10 => site.misused_blockaddress = true,
        11 => site.callee_linkage = Linkage::Weak,
        12 => {
            site.call_site_attrs.insert(Attr::NoInline);
        }
        _ => {
            site.callee_attrs.insert(Attr::NoInline);
        }
    }
}

fn stage_sum(d: &InlineDecision, stage: Stage) -> i64 {
    d.trace.iter().filter(|r| r.stage == stage).map(|r| r.delta).sum()
}

proptest! {
    #[test]
    fn trace_deltas_conserve(site in plain_site(), lvl in level(), p in params()) {
        let d = decide(&site, lvl, &p).unwrap();
        if let (Some(cost), Some(threshold)) = (d.cost, d.threshold) {
            if lvl != OptLevel::O0 {
                prop_assert_eq!(stage_sum(&d, Stage::Cost), cost);
                prop_assert_eq!(stage_sum(&d, Stage::Threshold), threshold);
                let mut running = 0;
                for r in d.trace.iter().filter(|r| r.stage == Stage::Cost) {
                    running += r.delta;
                    prop_assert_eq!(running, r.value_after);
                }
            }
            prop_assert_eq!(d.verdict == Verdict::Inline, cost < threshold);
        }
    }

    #[test]
    fn never_conditions_dominate(mut site in plain_site(), which in 0usize..14, lvl in level(), p in params()) {
        set_never(&mut site, which);
        let d = decide(&site, lvl, &p).unwrap();
        prop_assert!(matches!(d.verdict, Verdict::Never(_)), "{:?}", d.verdict);
        prop_assert_eq!(Some(d.verdict), check_never_inline(&site).map(Verdict::Never));
        prop_assert_eq!((d.cost, d.threshold), (None, None));
    }

    #[test]
    fn bigger_bodies_never_flip_to_inline(site in plain_site(), extra in 1u64..500, lvl in level(), p in params()) {
        let before = decide(&site, lvl, &p).unwrap();
        let mut grown = site.clone();
        grown.body_summary.instruction_count += extra;
        let after = decide(&grown, lvl, &p).unwrap();
        prop_assert_eq!(after.threshold, before.threshold);
        prop_assert!(after.cost >= before.cost);
        if !before.verdict.inlines() {
            prop_assert!(!after.verdict.inlines());
        }
    }

    // O3's own starting point (250) is replaced by any explicit threshold,
    // so monotonicity in the knob holds among overridden values only.
    #[test]
    fn raising_threshold_never_blocks_inlining(site in plain_site(), lvl in level(), a in 0i64..20000, b in 0i64..20000) {
        let (lo, hi) = (a.min(b), a.max(b));
        let with = |t: i64| InlineParams { inline_threshold: t, ..InlineParams::clang14() };
        prop_assume!(with(lo).threshold_overridden() && with(hi).threshold_overridden());
        let d_lo = decide(&site, lvl, &with(lo)).unwrap();
        let d_hi = decide(&site, lvl, &with(hi)).unwrap();
        prop_assert!(d_hi.threshold >= d_lo.threshold);
        if d_lo.verdict.inlines() {
            prop_assert!(d_hi.verdict.inlines());
        }
    }

    #[test]
    fn decisions_round_trip_through_json(site in plain_site(), lvl in level(), p in params()) {
        let d = decide(&site, lvl, &p).unwrap();
        let back: InlineDecision = serde_json::from_str(&d.to_json()).unwrap();
        prop_assert_eq!(back, d);
    }
}

#[test]
fn negative_counts_rejected() {
    let site = CallSiteDescription {
        body_summary: BodySummary {
            instruction_count: 3,
            simplified_away_count: 4,
            ..Default::default()
        },
        ..Default::default()
    };
    assert!(decide(&site, OptLevel::O2, &InlineParams::default()).is_err());
}
