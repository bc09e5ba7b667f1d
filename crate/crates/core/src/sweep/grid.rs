use std::fmt;

use serde::{Deserialize, Serialize};

use super::config::{AxisKind, FlagAxis, PassVia, SweepConfig};
use super::presets::preset;
use super::SweepError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisValue {
    Int(i64),
    Bool(bool),
}

impl fmt::Display for AxisValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisValue::Int(v) => write!(f, "{v}"),
            AxisValue::Bool(v) => write!(f, "{v}"),
        }
    }
}

/// One value slot per config axis; `None` leaves the option at the
/// compiler default (not passed at all).
pub type Assignment = Vec<Option<AxisValue>>;

/// Values of an axis in declaration order.
pub fn axis_values(axis: &FlagAxis) -> Vec<AxisValue> {
    match axis.kind {
        AxisKind::IntegerSequence { start, step, count } => {
            (0..count as i64).map(|i| AxisValue::Int(start + i * step)).collect()
        }
        AxisKind::BooleanFlip { default } => vec![AxisValue::Bool(default), AxisValue::Bool(!default)],
    }
}

/// Cartesian product of all axes. The first axis varies slowest and each
/// axis walks its values in declaration order.
pub fn enumerate_variants(config: &SweepConfig) -> Result<Vec<Assignment>, SweepError> {
    if config.axes.is_empty() {
        return Err(SweepError::NoAxes);
    }
    let sets: Vec<Vec<AxisValue>> = config.axes.iter().map(axis_values).collect();
    let size = sets
        .iter()
        .try_fold(1usize, |acc, s| acc.checked_mul(s.len()))
        .filter(|&n| n <= config.grid_cap);
    let Some(size) = size else {
        let approx = sets.iter().fold(1f64, |acc, s| acc * s.len() as f64);
        return Err(SweepError::GridTooLarge {
            size: approx,
            cap: config.grid_cap,
        });
    };
    let mut out = Vec::with_capacity(size);
    let mut idx = vec![0usize; sets.len()];
    loop {
        out.push(idx.iter().zip(&sets).map(|(&i, s)| Some(s[i])).collect());
        let mut k = sets.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < sets[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Compiler arguments for one axis value.
pub fn axis_flags(axis: &FlagAxis, value: AxisValue) -> Vec<String> {
    match (axis.pass_via, value) {
        (PassVia::MiddleEnd, v) => vec!["-mllvm".into(), format!("{}={v}", axis.name)],
        (PassVia::Frontend, AxisValue::Int(v)) => vec![format!("{}={v}", axis.name)],
        (PassVia::Frontend, AxisValue::Bool(true)) => vec![axis.name.clone()],
        (PassVia::Frontend, AxisValue::Bool(false)) => vec![],
    }
}

/// Full flag list of a variant: base flags, preset, axis flags, then `-g`
/// unless debug info is already requested or forcing is disabled.
pub fn variant_flags(config: &SweepConfig, assignment: &[Option<AxisValue>]) -> Vec<String> {
    let mut flags: Vec<String> = config
        .base_flags
        .iter()
        .flat_map(|f| f.split_whitespace().map(str::to_string))
        .collect();
    if let Some(p) = config.preset.as_deref().and_then(preset) {
        flags.extend(p.flags());
    }
    for (axis, value) in config.axes.iter().zip(assignment) {
        if let Some(v) = value {
            flags.extend(axis_flags(axis, *v));
        }
    }
    if config.force_debug_info && !flags.iter().any(|f| f.starts_with("-g")) {
        flags.push("-g".into());
    }
    flags
}
