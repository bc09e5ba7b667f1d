use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use super::{AnalysisError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CdfSummary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl fmt::Display for CdfSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={},min={:.4},max={:.4},mean={:.4}",
            self.count, self.min, self.max, self.mean
        )
    }
}

/// Empirical CDF: one point per distinct ratio, paired with the fraction
/// of samples at or below it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CdfSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub summary: CdfSummary,
}

impl CdfSeries {
    /// Fraction of samples `<= x`.
    pub fn at(&self, x: f64) -> f64 {
        match self.points.partition_point(|(r, _)| *r <= x) {
            0 => 0.0,
            i => self.points[i - 1].1,
        }
    }

    /// `ratio,fraction`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("ratio,fraction\n");
        for (r, f) in &self.points {
            let _ = writeln!(out, "{r:.4},{f:.6}");
        }
        out
    }
}

pub fn inlining_cdf(label: &str, ratios: &[f64]) -> Result<CdfSeries> {
    if ratios.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    if let Some(&bad) = ratios.iter().find(|r| !(0.0..=1.0).contains(*r)) {
        return Err(AnalysisError::OutOfRange(bad));
    }
    let mut sorted = ratios.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut points: Vec<(f64, f64)> = Vec::new();
    for (i, &r) in sorted.iter().enumerate() {
        let frac = (i + 1) as f64 / n;
        match points.last_mut() {
            Some(last) if last.0 == r => last.1 = frac,
            _ => points.push((r, frac)),
        }
    }
    Ok(CdfSeries {
        label: label.to_string(),
        points,
        summary: CdfSummary {
            count: sorted.len(),
            min: sorted[0],
            max: sorted[sorted.len() - 1],
            mean: sorted.iter().sum::<f64>() / n,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c = inlining_cdf("x", &[0.3, 0.1, 0.2]).unwrap();
        assert!((c.at(0.2) - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(c.at(0.05), 0.0);
        assert_eq!(inlining_cdf("z", &[0.0; 4]).unwrap().points, vec![(0.0, 1.0)]);
        assert_eq!(inlining_cdf("e", &[]), Err(AnalysisError::EmptyInput));
        assert_eq!(inlining_cdf("e", &[1.5]), Err(AnalysisError::OutOfRange(1.5)));
        assert_eq!(c.to_csv().lines().nth(2), Some("0.2000,0.666667"));
    }

    #[test]
    fn summary_rendering() {
        let s = CdfSummary {
            count: 10,
            min: 0.0,
            max: 0.0952,
            mean: 0.0083,
        };
        assert!(s.to_string().ends_with("max=0.0952,mean=0.0083"));
    }
}
