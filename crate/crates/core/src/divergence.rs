//! Wasserstein-1 distance between grid-aligned densities.
//!
//! In one dimension `W1(a, b) = ∫ |F_a(x) - F_b(x)| dx`. Both CDFs are
//! renormalized to end at one, so estimates that lose mass through the domain
//! boundary are still compared as probability measures; the raw mass is kept
//! on the [`CdfFunction`] as a diagnostic.

use crate::density::DensityEstimate;
use crate::error::{Error, Result};
use crate::grid::{trapezoid, Grid1D};

/// Densities with less mass than this cannot be normalized.
pub const MIN_MASS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CdfFunction {
    grid: Grid1D,
    c: Vec<f64>,
    raw_mass: f64,
}

impl CdfFunction {
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.c
    }

    /// Trapezoidal integral of the density before renormalization.
    pub fn raw_mass(&self) -> f64 {
        self.raw_mass
    }
}

/// Normalized cumulative trapezoid of `y` on `grid`.
pub fn cdf_of(grid: &Grid1D, y: &[f64]) -> Result<CdfFunction> {
    if y.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "{} values for a grid of {} nodes",
            y.len(),
            grid.len()
        )));
    }
    let half_dx = 0.5 * grid.dx();
    let mut c = Vec::with_capacity(y.len());
    let mut acc = 0.0;
    c.push(0.0);
    for w in y.windows(2) {
        acc += half_dx * (w[0] + w[1]);
        c.push(acc);
    }
    let raw_mass = acc;
    if raw_mass.is_nan() || raw_mass <= MIN_MASS {
        return Err(Error::ZeroMass(raw_mass));
    }
    c.iter_mut().for_each(|v| *v /= raw_mass);
    *c.last_mut().expect("grid has nodes") = 1.0;
    Ok(CdfFunction {
        grid: *grid,
        c,
        raw_mass,
    })
}

pub fn to_cdf(d: &DensityEstimate) -> Result<CdfFunction> {
    cdf_of(d.grid(), d.values())
}

/// Trapezoidal integral of `|F_a - F_b|` over the shared grid.
pub fn wasserstein1_cdf(a: &CdfFunction, b: &CdfFunction) -> Result<f64> {
    a.grid.ensure_same(&b.grid)?;
    let diff: Vec<f64> = a.c.iter().zip(&b.c).map(|(x, y)| (x - y).abs()).collect();
    Ok(trapezoid(&a.grid, &diff))
}

pub fn wasserstein1(a: &DensityEstimate, b: &DensityEstimate) -> Result<f64> {
    a.grid().ensure_same(b.grid())?;
    wasserstein1_cdf(&to_cdf(a)?, &to_cdf(b)?)
}
