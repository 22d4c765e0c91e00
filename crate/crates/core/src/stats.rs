//! Sample statistics and rule-of-thumb smoothing scales.

use crate::error::{Error, Result};
use crate::grid::Sample1D;

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Standard deviation with the `1/(n-1)` normalization.
pub fn std_dev(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mu = mean(values);
    let ss: f64 = values.iter().map(|v| (v - mu).powi(2)).sum();
    (ss / (n - 1) as f64).sqrt()
}

/// Quantile with linear interpolation between order statistics
/// (position `q * (n - 1)` in the sorted sample).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    debug_assert!((0.0..=1.0).contains(&q));
    let pos = q * (sorted.len() - 1) as f64;
    let below = pos.floor() as usize;
    let above = pos.ceil() as usize;
    let frac = pos - below as f64;
    sorted[below] + frac * (sorted[above] - sorted[below])
}

pub fn interquartile_range(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile(&sorted, 0.75) - quantile(&sorted, 0.25)
}

/// Scott's rule bandwidth `n^(-1/5) * s`, as a standard deviation.
pub fn scott_scale(sample: &Sample1D) -> Result<f64> {
    let s = std_dev(sample.values());
    if s <= 0.0 {
        return Err(Error::DegenerateData(
            "sample standard deviation is zero".into(),
        ));
    }
    Ok((sample.len() as f64).powf(-0.2) * s)
}

/// Silverman's rule of thumb `0.9 * min(s, IQR/1.34) * n^(-1/5)`, as a
/// standard deviation. Falls back to whichever dispersion is non-zero.
pub fn silverman_scale(sample: &Sample1D) -> Result<f64> {
    let s = std_dev(sample.values());
    let iqr = interquartile_range(sample.values()) / 1.34;
    let spread = match (s > 0.0, iqr > 0.0) {
        (true, true) => s.min(iqr),
        (true, false) => s,
        (false, true) => iqr,
        (false, false) => {
            return Err(Error::DegenerateData(
                "sample has zero standard deviation and zero interquartile range".into(),
            ))
        }
    };
    Ok(0.9 * spread * (sample.len() as f64).powf(-0.2))
}
