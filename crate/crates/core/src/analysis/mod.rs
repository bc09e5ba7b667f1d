//! Descriptive statistics over inlining ratios and feature tables:
//! min-max normalization, the three-sigma outlier cut, median-gap drift
//! ranking, and empirical CDFs with a small SVG renderer.

mod cdf;
mod drift;
pub mod stats;
mod svg;

pub use cdf::{inlining_cdf, CdfSeries, CdfSummary};
pub use drift::{median_gap, rank_features, DriftReport, FeatureDrift, FeatureTable, GapDetail};
pub use stats::{mean, median, normalize, population_std, three_sigma_filter, SigmaSplit};
pub use svg::render_cdf_svg;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("empty input")]
    EmptyInput,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("NaN in sample set '{0}'")]
    NotANumber(String),
    #[error("ratio {0} outside [0, 1]")]
    OutOfRange(f64),
    #[error("feature tables use different registries: '{a}' vs '{b}'")]
    RegistryMismatch { a: String, b: String },
    #[error("k must be at least 1")]
    ZeroK,
    #[error("feature table: {0}")]
    Table(String),
}

pub type Result<T> = std::result::Result<T, AnalysisError>;

/// A labelled list of finite-or-infinite reals; never NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    pub label: String,
    pub values: Vec<f64>,
}

impl SampleSet {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let label = label.into();
        if values.iter().any(|v| v.is_nan()) {
            return Err(AnalysisError::NotANumber(label));
        }
        Ok(SampleSet { label, values })
    }
}
