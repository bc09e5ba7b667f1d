use serde::{Deserialize, Serialize};

use super::grid::{axis_values, variant_flags, Assignment, AxisValue};
use super::{run_variant, AxisKind, SweepConfig, SweepError, VariantResult, VariantStatus};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStep {
    pub build: usize,
    /// Axis moved in this step; `None` for the base build.
    pub axis: Option<String>,
    pub accepted: bool,
    pub result: VariantResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub best_assignment: Assignment,
    pub best: VariantResult,
    pub base_ratio: Option<f64>,
    pub trajectory: Vec<TrajectoryStep>,
}

/// Axes in visiting order with their candidate values: `-inline-threshold`
/// ascending, then `-inline-call-penalty` descending, then the rest in
/// config order. A boolean axis only proposes its flipped value.
pub fn search_order(config: &SweepConfig) -> Vec<(usize, Vec<AxisValue>)> {
    let rank = |name: &str| match name {
        "inline-threshold" => 0,
        "inline-call-penalty" => 1,
        _ => 2,
    };
    let mut order: Vec<(usize, Vec<AxisValue>)> = config
        .axes
        .iter()
        .enumerate()
        .map(|(i, axis)| {
            let values = match axis.kind {
                AxisKind::BooleanFlip { default } => vec![AxisValue::Bool(!default)],
                AxisKind::IntegerSequence { .. } => {
                    let mut v = axis_values(axis);
                    match rank(axis.bare_name()) {
                        0 => v.sort(),
                        1 => v.sort_by(|a, b| b.cmp(a)),
                        _ => {}
                    }
                    v
                }
            };
            (i, values)
        })
        .collect();
    order.sort_by_key(|(i, _)| rank(config.axes[*i].bare_name()));
    order
}

fn better(candidate: &VariantResult, incumbent: Option<&VariantResult>) -> bool {
    if candidate.status != VariantStatus::Ok {
        return false;
    }
    match (candidate.ratio(), incumbent.and_then(VariantResult::ratio)) {
        (Some(c), Some(i)) => c > i,
        (Some(_), None) => true,
        _ => false,
    }
}

/// Greedy coordinate ascent with real builds.
pub fn search_extreme(config: &SweepConfig, budget: usize) -> Result<SearchOutcome, SweepError> {
    search_extreme_with(config, budget, |i, a| run_variant(config, i, a))
}

/// Greedy coordinate ascent on the inlining ratio.
///
/// Starts from the base flags with every axis unset. Each pass offers every
/// axis its next untried candidate on top of the incumbent; a move sticks
/// only on a strict improvement. Stops when the budget (counting the base
/// build) is spent or every axis is exhausted.
pub fn search_extreme_with<F>(config: &SweepConfig, budget: usize, mut evaluate: F) -> Result<SearchOutcome, SweepError>
where
    F: FnMut(usize, &Assignment) -> VariantResult,
{
    let needed = config.axes.len() + 1;
    if budget < needed {
        return Err(SweepError::BudgetTooSmall { budget, needed });
    }
    let order = search_order(config);
    let mut current: Assignment = vec![None; config.axes.len()];
    let base = evaluate(0, &current);
    let base_ratio = base.ratio();
    let mut incumbent = (base.status == VariantStatus::Ok).then(|| base.clone());
    let mut trajectory = vec![TrajectoryStep {
        build: 0,
        axis: None,
        accepted: incumbent.is_some(),
        result: base,
    }];
    let mut cursors = vec![0usize; order.len()];
    let mut builds = 1;
    'passes: loop {
        let mut moved = false;
        for (k, (axis, candidates)) in order.iter().enumerate() {
            if builds >= budget {
                break 'passes;
            }
            let Some(&value) = candidates.get(cursors[k]) else {
                continue;
            };
            cursors[k] += 1;
            moved = true;
            let mut proposal = current.clone();
            proposal[*axis] = Some(value);
            let result = evaluate(builds, &proposal);
            builds += 1;
            let accepted = better(&result, incumbent.as_ref());
            if accepted {
                current = proposal;
                incumbent = Some(result.clone());
            }
            trajectory.push(TrajectoryStep {
                build: builds - 1,
                axis: Some(config.axes[*axis].name.clone()),
                accepted,
                result,
            });
        }
        if !moved {
            break;
        }
    }
    let best = incumbent.ok_or(SweepError::NoSuccessfulBuild)?;
    debug_assert_eq!(best.flags, variant_flags(config, &current));
    Ok(SearchOutcome {
        best_assignment: current,
        best,
        base_ratio,
        trajectory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{FlagAxis, Measurement, PassVia, Project, Toolchain};

    fn config() -> SweepConfig {
        SweepConfig {
            toolchain: Toolchain::default(),
            projects: vec![Project {
                name: "p".into(),
                source_dir: ".".into(),
                build_command_template: "{FLAGS}".into(),
                artifact_glob: "a".into(),
            }],
            axes: vec![
                FlagAxis {
                    name: "-inline-call-penalty".into(),
                    kind: AxisKind::IntegerSequence {
                        start: 0,
                        step: 25,
                        count: 2,
                    },
                    pass_via: PassVia::MiddleEnd,
                },
                FlagAxis {
                    name: "-inline-threshold".into(),
                    kind: AxisKind::IntegerSequence {
                        start: 1000,
                        step: -500,
                        count: 3,
                    },
                    pass_via: PassVia::MiddleEnd,
                },
            ],
            base_flags: vec!["-O2".into()],
            per_build_timeout: 1.0,
            parallelism: 1,
            preset: None,
            grid_cap: 100,
            force_debug_info: true,
            ratio_aggregation: Default::default(),
        }
    }

    fn fake(config: &SweepConfig, i: usize, a: &Assignment, ratio: Option<f64>) -> VariantResult {
        VariantResult {
            variant_index: i,
            assignment: a.clone(),
            flags: variant_flags(config, a),
            status: if ratio.is_some() {
                VariantStatus::Ok
            } else {
                VariantStatus::BuildFailed
            },
            measurement: ratio.map(|r| Measurement {
                total_functions: 100,
                inlined: (r * 100.0) as u64,
                remaining: 0,
                eliminated: (r * 100.0) as u64,
                inlining_ratio: r,
                compile_seconds: 0.0,
                binary_bytes: 0,
            }),
            remarks: None,
            cause: None,
            work_dirs: vec![],
        }
    }

    fn value(a: &Assignment, k: usize, default: i64) -> i64 {
        match a[k] {
            Some(AxisValue::Int(v)) => v,
            _ => default,
        }
    }

    // threshold helps, a lower penalty helps a little
    fn model(a: &Assignment) -> f64 {
        let t = value(a, 1, 225) as f64;
        let p = value(a, 0, 25) as f64;
        (t / 2000.0 + (25.0 - p) / 1000.0).min(1.0)
    }

    #[test]
    fn order_and_directions() {
        let c = config();
        let o = search_order(&c);
        assert_eq!(o[0].0, 1);
        assert_eq!(o[0].1, [AxisValue::Int(0), AxisValue::Int(500), AxisValue::Int(1000)]);
        assert_eq!(o[1].1, [AxisValue::Int(25), AxisValue::Int(0)]);
    }

    #[test]
    fn climbs_to_the_grid_optimum() {
        let c = config();
        let out = search_extreme_with(&c, 50, |i, a| fake(&c, i, a, Some(model(a)))).unwrap();
        assert_eq!(value(&out.best_assignment, 1, 0), 1000);
        assert_eq!(value(&out.best_assignment, 0, 99), 0);
        let grid = crate::sweep::enumerate_variants(&c).unwrap();
        let optimum = grid.iter().map(model).fold(f64::MIN, f64::max);
        assert_eq!(out.best.ratio(), Some(optimum));
        assert!(out.best.ratio() >= out.base_ratio);
    }

    #[test]
    fn budget_accounting() {
        let c = config();
        let mut calls = 0;
        let out = search_extreme_with(&c, 3, |i, a| {
            calls += 1;
            fake(&c, i, a, Some(model(a)))
        })
        .unwrap();
        assert_eq!(calls, 3);
        let axes: Vec<_> = out.trajectory.iter().map(|s| s.axis.clone()).collect();
        assert_eq!(
            axes,
            [
                None,
                Some("-inline-threshold".into()),
                Some("-inline-call-penalty".into())
            ]
        );
        assert!(matches!(
            search_extreme_with(&c, 2, |i, a| fake(&c, i, a, None)),
            Err(SweepError::BudgetTooSmall { .. })
        ));
        assert!(matches!(
            search_extreme_with(&c, 10, |i, a| fake(&c, i, a, None)),
            Err(SweepError::NoSuccessfulBuild)
        ));
    }

    #[test]
    fn failures_keep_the_incumbent() {
        let c = config();
        let out = search_extreme_with(&c, 50, |i, a| {
            let r = model(a);
            fake(&c, i, a, (value(a, 1, 0) != 1000).then_some(r))
        })
        .unwrap();
        assert_eq!(value(&out.best_assignment, 1, 0), 500);
    }
}
