//! Flag sweeps: build a project under many flag combinations, measure the
//! inlining ratio of every variant, and search toward extreme inlining.

mod build;
mod config;
mod grid;
pub mod presets;
mod report;
mod search;

use serde::{Deserialize, Serialize};

pub use build::{
    build_variant, render_command, resolve_compiler, shell_quote, BuildArtifacts, BuildError, REMARK_FLAGS,
};
pub use config::{
    AxisKind, FlagAxis, PassVia, Project, RatioAggregation, SweepConfig, Toolchain, CC_ENV, DEFAULT_GRID_CAP,
    DEFAULT_TIMEOUT_SECONDS, FLAGS_PLACEHOLDER,
};
pub use grid::{axis_flags, axis_values, enumerate_variants, variant_flags, Assignment, AxisValue};
pub use presets::{preset, Preset, PRESETS};
pub use report::{emit_report, ReportOptions, REPORT_COLUMNS};
pub use search::{search_extreme, search_order, SearchOutcome, TrajectoryStep};

use crate::ground_truth::{compute_inlining_report, Totals};
use crate::par::{self, Execution};
use crate::remarks::{parse_remark_stream, summarize, RemarkSummary};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error("{0}")]
    Io(String),
    #[error("config: {0}")]
    Config(String),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("sweep has no axes")]
    NoAxes,
    #[error("grid of {size} variants exceeds the cap of {cap}")]
    GridTooLarge { size: f64, cap: usize },
    #[error("budget {budget} is below the {needed} builds one pass needs")]
    BudgetTooSmall { budget: usize, needed: usize },
    #[error("no variant built successfully")]
    NoSuccessfulBuild,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VariantStatus {
    Ok,
    BuildFailed,
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub total_functions: u64,
    pub inlined: u64,
    pub remaining: u64,
    pub eliminated: u64,
    pub inlining_ratio: f64,
    pub compile_seconds: f64,
    pub binary_bytes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariantResult {
    pub variant_index: usize,
    pub assignment: Assignment,
    pub flags: Vec<String>,
    pub status: VariantStatus,
    /// Present iff `status` is `Ok`.
    pub measurement: Option<Measurement>,
    pub remarks: Option<RemarkSummary>,
    pub cause: Option<String>,
    pub work_dirs: Vec<String>,
}

impl VariantResult {
    pub fn failed(variant_index: usize, assignment: Assignment, flags: Vec<String>, err: &BuildError) -> Self {
        VariantResult {
            variant_index,
            assignment,
            flags,
            status: match err {
                BuildError::Timeout { .. } => VariantStatus::Timeout,
                _ => VariantStatus::BuildFailed,
            },
            measurement: None,
            remarks: None,
            cause: Some(err.to_string()),
            work_dirs: vec![],
        }
    }

    pub fn ratio(&self) -> Option<f64> {
        self.measurement.as_ref().map(|m| m.inlining_ratio)
    }
}

/// Ratio and counts over every binary of every project build.
pub fn evaluate_variant(
    artifacts: &[BuildArtifacts],
    aggregation: RatioAggregation,
) -> Result<(Measurement, RemarkSummary), String> {
    let mut totals = Totals::default();
    let mut ratios = Vec::new();
    let mut bytes = 0u64;
    let mut remarks = Vec::new();
    for a in artifacts {
        for path in &a.binaries {
            let image = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
            bytes += image.len() as u64;
            let label = format!("{}/{}", a.project, a.relative(path));
            let report = compute_inlining_report(&image, &label).map_err(|e| format!("{label}: {e}"))?;
            let t = report.totals();
            totals.functions += t.functions;
            totals.inlined += t.inlined;
            totals.remaining += t.remaining;
            totals.eliminated += t.eliminated;
            ratios.push(report.inlining_ratio);
        }
        remarks.extend(parse_remark_stream(&a.diagnostics));
    }
    let ratio = match aggregation {
        RatioAggregation::SizeWeighted => totals.ratio(),
        RatioAggregation::Plain => (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64),
    }
    .ok_or_else(|| "no functions in any artifact".to_string())?;
    Ok((
        Measurement {
            total_functions: totals.functions,
            inlined: totals.inlined,
            remaining: totals.remaining,
            eliminated: totals.eliminated,
            inlining_ratio: ratio,
            compile_seconds: artifacts.iter().map(|a| a.compile_seconds).sum(),
            binary_bytes: bytes,
        },
        summarize(&remarks),
    ))
}

/// Builds every project with one assignment and measures the result.
pub fn run_variant(config: &SweepConfig, variant_index: usize, assignment: &[Option<AxisValue>]) -> VariantResult {
    let flags = variant_flags(config, assignment);
    let mut artifacts = Vec::new();
    for project in &config.projects {
        match build_variant(project, &flags, &config.toolchain, config.timeout()) {
            Ok(a) => artifacts.push(a),
            Err(e) => {
                log::warn!("variant {variant_index} ({}): {e}", project.name);
                return VariantResult::failed(variant_index, assignment.to_vec(), flags, &e);
            }
        }
    }
    let work_dirs = artifacts
        .iter()
        .map(|a| a.work_dir.path().display().to_string())
        .collect();
    match evaluate_variant(&artifacts, config.ratio_aggregation) {
        Ok((m, r)) => VariantResult {
            variant_index,
            assignment: assignment.to_vec(),
            flags,
            status: VariantStatus::Ok,
            measurement: Some(m),
            remarks: Some(r),
            cause: None,
            work_dirs,
        },
        Err(cause) => VariantResult {
            variant_index,
            assignment: assignment.to_vec(),
            flags,
            status: VariantStatus::BuildFailed,
            measurement: None,
            remarks: None,
            cause: Some(cause),
            work_dirs,
        },
    }
}

/// Runs the whole grid, up to `parallelism` builds at a time. Results come
/// back in enumeration order.
pub fn run_sweep(config: &SweepConfig, exec: Execution) -> Result<Vec<VariantResult>, SweepError> {
    if !config.force_debug_info {
        log::warn!("force_debug_info is off: variants built without -g cannot be measured");
    }
    let variants = enumerate_variants(config)?;
    let indexed: Vec<(usize, Assignment)> = variants.into_iter().enumerate().collect();
    Ok(par::map_bounded(exec, config.parallelism, &indexed, |(i, a)| {
        run_variant(config, *i, a)
    }))
}

pub fn all_failed(results: &[VariantResult]) -> bool {
    !results.is_empty() && results.iter().all(|r| r.status != VariantStatus::Ok)
}
