use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{trapezoid, Grid1D};

/// Magnitude below which negative node values are treated as round-off.
pub const CLIP_TOLERANCE: f64 = 1e-12;

/// Fraction of the global peak a local maximum must rise above its higher
/// flanking minimum to count as a mode.
pub const MODE_PROMINENCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Gaussian,
    Diffusion,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Gaussian => "gaussian",
            Method::Diffusion => "diffusion",
        }
    }
}

/// Density values on a grid, tagged with the estimator that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    grid: Grid1D,
    y: Vec<f64>,
    method: Method,
    smoothing: f64,
    sample_count: usize,
    negative_excursion: f64,
}

impl DensityEstimate {
    /// Wraps raw estimator output. Negative values of magnitude below
    /// [`CLIP_TOLERANCE`] are zeroed; anything more negative is an error.
    pub fn new(
        grid: Grid1D,
        mut y: Vec<f64>,
        method: Method,
        smoothing: f64,
        sample_count: usize,
    ) -> Result<Self> {
        if y.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} density values for a grid of {} nodes",
                y.len(),
                grid.len()
            )));
        }
        let mut most_negative = 0.0f64;
        for (index, v) in y.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { index, value: *v });
            }
            if *v < 0.0 {
                if *v <= -CLIP_TOLERANCE {
                    return Err(Error::NegativeDensity { index, value: *v });
                }
                most_negative = most_negative.min(*v);
                *v = 0.0;
            }
        }
        Ok(Self {
            grid,
            y,
            method,
            smoothing,
            sample_count,
            negative_excursion: most_negative.abs(),
        })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Variance `t` for the Gaussian estimator, final time `T` for diffusion.
    pub fn smoothing(&self) -> f64 {
        self.smoothing
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }

    /// Largest magnitude of a negative value removed by clipping.
    pub fn negative_excursion(&self) -> f64 {
        self.negative_excursion
    }

    pub(crate) fn set_sample_count(&mut self, n: usize) {
        self.sample_count = n;
    }

    pub fn integral(&self) -> f64 {
        trapezoid(&self.grid, &self.y)
    }

    pub fn mode_count(&self) -> usize {
        count_modes(&self.y)
    }
}

/// Indices of prominence-filtered local maxima.
///
/// Node `i` (interior only) is a mode when `y[i] > y[i-1]`, `y[i] >= y[i+1]`,
/// and `y[i]` exceeds the higher of its two nearest flanking local minima by at
/// least `MODE_PROMINENCE * max(y)`.
pub fn find_modes(y: &[f64]) -> Vec<usize> {
    let n = y.len();
    if n < 3 {
        return Vec::new();
    }
    let peak = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let threshold = MODE_PROMINENCE * peak;
    let mut modes = Vec::new();
    for i in 1..n - 1 {
        if !(y[i] > y[i - 1] && y[i] >= y[i + 1]) {
            continue;
        }
        // Descend to the nearest local minimum on each side; plateaus on the
        // right belong to the peak and are walked over.
        let mut l = i;
        while l > 0 && y[l - 1] <= y[l] {
            l -= 1;
        }
        let mut r = i;
        while r + 1 < n && y[r + 1] <= y[r] {
            r += 1;
        }
        let base = y[l].max(y[r]);
        if y[i] - base >= threshold {
            modes.push(i);
        }
    }
    modes
}

pub fn count_modes(y: &[f64]) -> usize {
    find_modes(y).len()
}
