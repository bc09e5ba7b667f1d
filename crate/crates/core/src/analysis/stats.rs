use super::{AnalysisError, Result};

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Arithmetic mean. Summation runs over the sorted values so the result
/// does not depend on input order.
pub fn mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    Ok(sorted(values).iter().sum::<f64>() / values.len() as f64)
}

/// Population standard deviation (divides by n).
pub fn population_std(values: &[f64]) -> Result<f64> {
    let mu = mean(values)?;
    let var = sorted(values).iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / values.len() as f64;
    Ok(var.sqrt())
}

/// Middle value; the mean of the two middle values for even lengths.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    let v = sorted(values);
    let n = v.len();
    Ok(if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    })
}

/// Min-max scaling onto [0, 1]. A constant input maps to all zeros.
pub fn normalize(values: &[f64]) -> Result<Vec<f64>> {
    let (lo, hi) = bounds(values)?;
    Ok(scale(values, lo, hi))
}

pub(crate) fn bounds(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

pub(crate) fn scale(values: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let range = hi - lo;
    values
        .iter()
        .map(|v| if range > 0.0 { (v - lo) / range } else { 0.0 })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SigmaSplit {
    pub kept: Vec<f64>,
    pub removed: Vec<f64>,
}

/// One-shot three-sigma cut: keeps `v` iff `|v - mean| <= 3 * std` using
/// the population deviation of the whole input. Input order is preserved
/// within each side.
pub fn three_sigma_filter(values: &[f64]) -> Result<SigmaSplit> {
    if values.len() < 2 {
        return Err(AnalysisError::TooFewSamples {
            needed: 2,
            got: values.len(),
        });
    }
    let mu = mean(values)?;
    let bound = 3.0 * population_std(values)?;
    let (kept, removed) = values.iter().partition(|&&v| (v - mu).abs() <= bound);
    Ok(SigmaSplit { kept, removed })
}
