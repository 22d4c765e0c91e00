//! Fixed-bandwidth Gaussian kernel density estimation.
//!
//! The smoothing parameter is carried as the kernel *variance* `t`, so the
//! estimate at `x` is `(1 / (n sqrt(t))) * sum_j phi((x - X_j) / sqrt(t))`
//! with `phi` the standard normal density. Summation is exact over all
//! samples; no tails are truncated.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::density::{DensityEstimate, Method};
use crate::error::{Error, Result};
use crate::grid::{Grid1D, Sample1D};
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandwidthRule {
    Scott,
    Silverman,
    Manual,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianBandwidth {
    variance: f64,
    rule: BandwidthRule,
}

impl GaussianBandwidth {
    pub fn manual(variance: f64) -> Result<Self> {
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "kernel variance must be positive and finite, got {variance}"
            )));
        }
        Ok(Self {
            variance,
            rule: BandwidthRule::Manual,
        })
    }

    /// Builds a bandwidth from a kernel standard deviation.
    pub fn from_std_dev(sigma: f64) -> Result<Self> {
        Self::manual(sigma * sigma)
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn rule(&self) -> BandwidthRule {
        self.rule
    }
}

/// Scott's rule: `t = (n^(-1/5) s)^2`.
pub fn scott_bandwidth(sample: &Sample1D) -> Result<GaussianBandwidth> {
    let h = stats::scott_scale(sample)?;
    Ok(GaussianBandwidth {
        variance: h * h,
        rule: BandwidthRule::Scott,
    })
}

/// Silverman's rule of thumb: `t = (0.9 min(s, IQR/1.34) n^(-1/5))^2`.
pub fn silverman_bandwidth(sample: &Sample1D) -> Result<GaussianBandwidth> {
    let h = stats::silverman_scale(sample)?;
    Ok(GaussianBandwidth {
        variance: h * h,
        rule: BandwidthRule::Silverman,
    })
}

pub(crate) fn kde_values(samples: &[f64], grid: &Grid1D, variance: f64) -> Vec<f64> {
    let inv_sd = 1.0 / variance.sqrt();
    let norm = inv_sd / ((2.0 * PI).sqrt() * samples.len() as f64);
    grid.nodes()
        .map(|x| {
            let sum: f64 = samples
                .iter()
                .map(|&s| {
                    let w = (x - s) * inv_sd;
                    (-0.5 * w * w).exp()
                })
                .sum();
            norm * sum
        })
        .collect()
}

pub fn gaussian_kde_evaluate(
    sample: &Sample1D,
    grid: &Grid1D,
    bw: &GaussianBandwidth,
) -> Result<DensityEstimate> {
    let y = kde_values(sample.values(), grid, bw.variance);
    DensityEstimate::new(*grid, y, Method::Gaussian, bw.variance, sample.len())
}

/// Gaussian estimate with Scott's bandwidth.
pub fn gaussian_kde(sample: &Sample1D, grid: &Grid1D) -> Result<DensityEstimate> {
    let bw = scott_bandwidth(sample)?;
    gaussian_kde_evaluate(sample, grid, &bw)
}
