use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::stats::{bounds, mean, median, scale, three_sigma_filter};
use super::{AnalysisError, Result, SampleSet};
use crate::features::{FeatureRegistry, FeatureSet, BINARY_ROW, SLOT_COUNT};
use crate::par::{self, Execution};

/// Per-function rows of one binary's feature vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureTable {
    pub registry_version: String,
    pub rows: Vec<(String, Vec<f64>)>,
}

impl FeatureTable {
    /// Function rows of a feature set; the aggregate row is not included.
    pub fn from_feature_set(fs: &FeatureSet) -> Self {
        FeatureTable {
            registry_version: fs.registry_version.clone(),
            rows: fs
                .functions
                .iter()
                .map(|(n, v)| (n.clone(), v.values.clone()))
                .collect(),
        }
    }

    /// Reads `function,f1..f62` CSV text. The `__binary__` row is skipped.
    pub fn from_csv(text: &str, registry_version: &str) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| AnalysisError::Table(e.to_string()))?
            .clone();
        if headers.len() != SLOT_COUNT + 1 || &headers[0] != "function" {
            return Err(AnalysisError::Table(format!(
                "expected function,f1..f{SLOT_COUNT} header, got {} columns",
                headers.len()
            )));
        }
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| AnalysisError::Table(e.to_string()))?;
            if &record[0] == BINARY_ROW {
                continue;
            }
            let values = record
                .iter()
                .skip(1)
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| AnalysisError::Table(format!("row {}: {e}", i + 2)))?;
            rows.push((record[0].to_string(), values));
        }
        Ok(FeatureTable {
            registry_version: registry_version.to_string(),
            rows,
        })
    }

    /// Values of one slot (1-based) across all rows.
    pub fn column(&self, index: usize) -> Vec<f64> {
        self.rows.iter().map(|(_, v)| v[index - 1]).collect()
    }
}

/// Both medians and means after shared-scale normalization and the
/// per-set three-sigma cut.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapDetail {
    pub median_a: f64,
    pub median_b: f64,
    pub median_gap: f64,
    pub mean_a: f64,
    pub mean_b: f64,
    pub mean_gap: f64,
    pub kept_a: usize,
    pub kept_b: usize,
}

/// Normalizes `a` and `b` onto one scale (min and max over their union),
/// filters each set independently, and compares medians.
pub fn median_gap(a: &SampleSet, b: &SampleSet) -> Result<GapDetail> {
    for s in [a, b] {
        if s.values.is_empty() {
            return Err(AnalysisError::EmptyInput);
        }
        if s.values.iter().any(|v| v.is_nan()) {
            return Err(AnalysisError::NotANumber(s.label.clone()));
        }
    }
    let (lo_a, hi_a) = bounds(&a.values)?;
    let (lo_b, hi_b) = bounds(&b.values)?;
    let (lo, hi) = (lo_a.min(lo_b), hi_a.max(hi_b));
    let fa = three_sigma_filter(&scale(&a.values, lo, hi))?;
    let fb = three_sigma_filter(&scale(&b.values, lo, hi))?;
    let (median_a, median_b) = (median(&fa.kept)?, median(&fb.kept)?);
    let (mean_a, mean_b) = (mean(&fa.kept)?, mean(&fb.kept)?);
    Ok(GapDetail {
        median_a,
        median_b,
        median_gap: (median_a - median_b).abs(),
        mean_a,
        mean_b,
        mean_gap: (mean_a - mean_b).abs(),
        kept_a: fa.kept.len(),
        kept_b: fb.kept.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureDrift {
    pub index: usize,
    pub name: String,
    #[serde(flatten)]
    pub gap: GapDetail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub registry_version: String,
    pub features: Vec<FeatureDrift>,
    /// Slot indices by descending median gap, ties by ascending index.
    pub top_k: Vec<usize>,
}

impl DriftReport {
    /// `index,name,median_a,median_b,gap,kept_a,kept_b`, one row per slot.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,name,median_a,median_b,gap,kept_a,kept_b\n");
        for f in &self.features {
            let _ = writeln!(
                out,
                "{},{},{:.6},{:.6},{:.6},{},{}",
                f.index, f.name, f.gap.median_a, f.gap.median_b, f.gap.median_gap, f.gap.kept_a, f.gap.kept_b
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("drift report serializes");
        s.push('\n');
        s
    }
}

/// Median-gap drift for every slot and the `k` slots that moved most.
pub fn rank_features(
    a: &FeatureTable,
    b: &FeatureTable,
    k: usize,
    registry: &FeatureRegistry,
    exec: Execution,
) -> Result<DriftReport> {
    for t in [a, b] {
        if t.registry_version != registry.version {
            return Err(AnalysisError::RegistryMismatch {
                a: t.registry_version.clone(),
                b: registry.version.to_string(),
            });
        }
    }
    if k == 0 {
        return Err(AnalysisError::ZeroK);
    }
    let gaps = par::map(exec, registry.slots, |slot| {
        let sa = SampleSet::new(format!("a.f{}", slot.index), a.column(slot.index))?;
        let sb = SampleSet::new(format!("b.f{}", slot.index), b.column(slot.index))?;
        Ok(FeatureDrift {
            index: slot.index,
            name: slot.name.to_string(),
            gap: median_gap(&sa, &sb)?,
        })
    });
    let features = gaps.into_iter().collect::<Result<Vec<_>>>()?;
    let mut order: Vec<&FeatureDrift> = features.iter().collect();
    order.sort_by(|x, y| {
        y.gap
            .median_gap
            .total_cmp(&x.gap.median_gap)
            .then(x.index.cmp(&y.index))
    });
    let top_k = order.iter().take(k.min(SLOT_COUNT)).map(|f| f.index).collect();
    Ok(DriftReport {
        registry_version: registry.version.to_string(),
        features,
        top_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[f64]) -> SampleSet {
        SampleSet::new("s", v.to_vec()).unwrap()
    }

    #[test]
    fn gap_examples() {
        assert_eq!(
            median_gap(&set(&[1.0, 2.0, 3.0]), &set(&[1.0, 2.0, 3.0]))
                .unwrap()
                .median_gap,
            0.0
        );
        let g = median_gap(&set(&[0.0, 0.0, 1.0]), &set(&[1.0, 1.0, 0.0])).unwrap();
        assert_eq!((g.median_a, g.median_b, g.median_gap), (0.0, 1.0, 1.0));
        assert_eq!(median_gap(&set(&[]), &set(&[1.0])), Err(AnalysisError::EmptyInput));
    }

    fn table(rows: usize, f: impl Fn(usize, usize) -> f64) -> FeatureTable {
        FeatureTable {
            registry_version: crate::features::REGISTRY_VERSION.into(),
            rows: (0..rows)
                .map(|r| (format!("fn{r}"), (1..=SLOT_COUNT).map(|s| f(r, s)).collect()))
                .collect(),
        }
    }

    #[test]
    fn ranking() {
        let r = FeatureRegistry::default();
        let a = table(5, |i, _| i as f64);
        let same = rank_features(&a, &a, 18, &r, Execution::Sequential).unwrap();
        assert_eq!(same.top_k, (1..=18).collect::<Vec<_>>());
        let b = table(5, |i, s| if s == 6 { 100.0 + i as f64 } else { i as f64 });
        let d = rank_features(&a, &b, 3, &r, Execution::Parallel).unwrap();
        assert_eq!(d.top_k[0], 6);
        assert_eq!(d.top_k.len(), 3);
        let mut other = b.clone();
        other.registry_version = "x".into();
        assert!(matches!(
            rank_features(&a, &other, 3, &r, Execution::Sequential),
            Err(AnalysisError::RegistryMismatch { .. })
        ));
        assert_eq!(d.to_csv().lines().count(), SLOT_COUNT + 1);
    }
}
