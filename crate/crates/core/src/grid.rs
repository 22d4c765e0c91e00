//! Uniform 1-D evaluation grids, samples, and grid-aligned functions.
//!
//! Every estimator in the crate evaluates on a [`Grid1D`] of `m + 1` equispaced
//! nodes and integrates with the trapezoidal rule, so densities are treated as
//! piecewise-linear functions between nodes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest number of intervals accepted by [`make_grid`].
pub const MIN_INTERVALS: usize = 16;

/// Default number of intervals for estimation grids.
pub const DEFAULT_INTERVALS: usize = 1024;

/// Default fractional padding added on each side by [`default_domain`].
pub const DEFAULT_MARGIN: f64 = 0.1;

/// Uniform grid over the closed interval `[lo, hi]` split into `m` intervals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    lo: f64,
    hi: f64,
    m: usize,
}

impl Grid1D {
    /// Builds a grid with at least two intervals. Estimation code should go
    /// through [`make_grid`], which also enforces [`MIN_INTERVALS`]; this
    /// constructor exists for small worked examples.
    pub fn coarse(lo: f64, hi: f64, m: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return Err(Error::DomainEmpty { lo, hi });
        }
        if m < 2 {
            return Err(Error::Resolution {
                intervals: m,
                min: 2,
            });
        }
        Ok(Self { lo, hi, m })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Number of intervals.
    pub fn intervals(&self) -> usize {
        self.m
    }

    /// Number of nodes, `m + 1`.
    pub fn len(&self) -> usize {
        self.m + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        (self.hi - self.lo) / self.m as f64
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Node `i`; the last node is `hi` exactly.
    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i <= self.m);
        if i == self.m {
            self.hi
        } else {
            self.lo + i as f64 * self.dx()
        }
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.m + 1).map(move |i| self.node(i))
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// Trapezoidal quadrature weight of node `i`.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.m {
            0.5 * self.dx()
        } else {
            self.dx()
        }
    }

    pub(crate) fn ensure_same(&self, other: &Grid1D) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "[{}, {}] with {} intervals vs [{}, {}] with {} intervals",
                self.lo, self.hi, self.m, other.lo, other.hi, other.m
            )))
        }
    }
}

/// Builds an estimation grid; requires `hi > lo` and `m >= MIN_INTERVALS`.
pub fn make_grid(lo: f64, hi: f64, m: usize) -> Result<Grid1D> {
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
        return Err(Error::DomainEmpty { lo, hi });
    }
    if m < MIN_INTERVALS {
        return Err(Error::Resolution {
            intervals: m,
            min: MIN_INTERVALS,
        });
    }
    Grid1D::coarse(lo, hi, m)
}

/// Data range padded by `margin_fraction` of the range on both sides.
pub fn default_domain(values: &[f64], margin_fraction: f64) -> Result<(f64, f64)> {
    if !(margin_fraction >= 0.0 && margin_fraction.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "margin fraction must be a finite non-negative number, got {margin_fraction}"
        )));
    }
    check_finite(values)?;
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if values.is_empty() || max <= min {
        return Err(Error::DegenerateData(
            "need at least two distinct values to derive a domain".into(),
        ));
    }
    let pad = margin_fraction * (max - min);
    Ok((min - pad, max + pad))
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

/// A finite sample of at least two observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample1D {
    values: Vec<f64>,
}

impl Sample1D {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InsufficientData {
                count: values.len(),
                min: 2,
            });
        }
        check_finite(&values)?;
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Node values of a function on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid1D,
    y: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid1D, y: Vec<f64>) -> Result<Self> {
        if y.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} nodes",
                y.len(),
                grid.len()
            )));
        }
        check_finite(&y)?;
        Ok(Self { grid, y })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        let y = grid.nodes().map(f).collect();
        Self::new(grid, y)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn into_values(self) -> Vec<f64> {
        self.y
    }

    pub fn integrate(&self) -> f64 {
        trapezoid(&self.grid, &self.y)
    }
}

/// Trapezoidal integral of `f` over its grid.
pub fn integrate(f: &GridFunction) -> f64 {
    f.integrate()
}

pub(crate) fn trapezoid(grid: &Grid1D, y: &[f64]) -> f64 {
    debug_assert_eq!(y.len(), grid.len());
    let inner: f64 = y.windows(2).map(|w| w[0] + w[1]).sum();
    0.5 * inner * grid.dx()
}

/// Discretizes the empirical measure of `sample` on `grid` by linear binning.
///
/// Each observation carries mass `1/n`, split between its two bracketing nodes
/// in proportion to proximity. Node values are mass divided by the node's
/// trapezoidal weight, so the trapezoidal integral of the result is one.
pub fn bin_samples(sample: &Sample1D, grid: &Grid1D) -> Result<GridFunction> {
    let outside: Vec<f64> = sample
        .values()
        .iter()
        .copied()
        .filter(|&v| !grid.contains(v))
        .collect();
    if !outside.is_empty() {
        return Err(Error::OutOfDomain {
            lo: grid.lo(),
            hi: grid.hi(),
            values: outside,
        });
    }

    let m = grid.intervals();
    let dx = grid.dx();
    let mass = 1.0 / sample.len() as f64;
    let mut node_mass = vec![0.0; grid.len()];
    for &v in sample.values() {
        let pos = (v - grid.lo()) / dx;
        let k = (pos.floor() as usize).min(m - 1);
        let frac = (pos - k as f64).clamp(0.0, 1.0);
        node_mass[k] += mass * (1.0 - frac);
        node_mass[k + 1] += mass * frac;
    }
    let y = node_mass
        .iter()
        .enumerate()
        .map(|(i, w)| w / grid.weight(i))
        .collect();
    GridFunction::new(*grid, y)
}
