//! Diffusion-based kernel density estimation.
//!
//! The estimate is the solution at time `T` of
//!
//! ```text
//! du/dt = 1/2 d²/dx² (u / p)        on [lo, hi]
//! d/dx (u / p) = 0                  at lo and hi
//! u(x, 0) = empirical measure of the sample
//! ```
//!
//! where `p` is a strictly positive pilot density. In regions where `p` is
//! large the effective kernel is narrow, in sparse regions it is wide. The
//! zero-flux boundary keeps all mass inside the domain.
//!
//! Time stepping is implicit Euler on the unknown `w = u / p`, which turns each
//! step into a symmetric, strictly diagonally dominant tridiagonal solve.

use serde::{Deserialize, Serialize};

use crate::density::{DensityEstimate, Method};
use crate::error::{Error, Result};
use crate::gaussian;
use crate::grid::{bin_samples, Grid1D, GridFunction, Sample1D};
use crate::stats;
use crate::tridiag::Tridiagonal;

/// Pilot values below `PILOT_FLOOR_FRACTION * max(p)` are raised to it.
pub const PILOT_FLOOR_FRACTION: f64 = 1e-3;

pub const DEFAULT_STEPS: usize = 32;
pub const MIN_STEPS: usize = 8;

/// Strictly positive pilot density on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotDensity {
    p: GridFunction,
    floor: f64,
}

impl PilotDensity {
    /// Clamps `p` below at `floor`.
    pub fn new(p: GridFunction, floor: f64) -> Result<Self> {
        if !(floor > 0.0 && floor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "pilot floor must be positive, got {floor}"
            )));
        }
        let grid = *p.grid();
        let y = p.into_values().into_iter().map(|v| v.max(floor)).collect();
        Ok(Self {
            p: GridFunction::new(grid, y)?,
            floor,
        })
    }

    /// Constant pilot `1 / (hi - lo)`.
    pub fn uniform(grid: &Grid1D) -> Self {
        let value = 1.0 / grid.width();
        Self {
            p: GridFunction::new(*grid, vec![value; grid.len()])
                .expect("constant pilot matches its grid"),
            floor: value,
        }
    }

    pub fn grid(&self) -> &Grid1D {
        self.p.grid()
    }

    pub fn values(&self) -> &[f64] {
        self.p.values()
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// Piecewise-linear interpolation of the pilot at `x` (clamped to the grid).
    pub fn at(&self, x: f64) -> f64 {
        let g = self.grid();
        let pos = ((x - g.lo()) / g.dx()).clamp(0.0, g.intervals() as f64);
        let k = (pos.floor() as usize).min(g.intervals() - 1);
        let frac = pos - k as f64;
        let y = self.values();
        y[k] + frac * (y[k + 1] - y[k])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeRule {
    SilvermanSquared,
    Manual,
}

/// Final diffusion time and number of implicit steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingSchedule {
    final_time: f64,
    steps: usize,
    rule: TimeRule,
}

impl SmoothingSchedule {
    pub fn manual(final_time: f64, steps: usize) -> Result<Self> {
        Self::with_rule(final_time, steps, TimeRule::Manual)
    }

    fn with_rule(final_time: f64, steps: usize, rule: TimeRule) -> Result<Self> {
        if !(final_time > 0.0 && final_time.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "final time must be positive and finite, got {final_time}"
            )));
        }
        if steps < MIN_STEPS {
            return Err(Error::InvalidParameter(format!(
                "need at least {MIN_STEPS} time steps, got {steps}"
            )));
        }
        Ok(Self {
            final_time,
            steps,
            rule,
        })
    }

    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn rule(&self) -> TimeRule {
        self.rule
    }

    pub fn time_step(&self) -> f64 {
        self.final_time / self.steps as f64
    }

    pub fn with_steps(self, steps: usize) -> Result<Self> {
        Self::with_rule(self.final_time, steps, self.rule)
    }

    /// Same schedule with the final time multiplied by `factor`.
    pub fn scaled(self, factor: f64) -> Result<Self> {
        Self::with_rule(self.final_time * factor, self.steps, self.rule)
    }
}

/// `T = (0.9 min(s, IQR/1.34) n^(-1/5))^2` with [`DEFAULT_STEPS`] steps.
pub fn silverman_time(sample: &Sample1D) -> Result<SmoothingSchedule> {
    let h = stats::silverman_scale(sample)?;
    SmoothingSchedule::with_rule(h * h, DEFAULT_STEPS, TimeRule::SilvermanSquared)
}

/// Gaussian pilot with Silverman variance, normalized to unit mass on the
/// grid and floored at `PILOT_FLOOR_FRACTION` of its maximum.
pub fn build_pilot(sample: &Sample1D, grid: &Grid1D) -> Result<PilotDensity> {
    let h = stats::silverman_scale(sample)?;
    let mut y = gaussian::kde_values(sample.values(), grid, h * h);
    let mass = crate::grid::trapezoid(grid, &y);
    if mass.is_nan() || mass <= 0.0 {
        return Err(Error::ZeroMass(mass));
    }
    y.iter_mut().for_each(|v| *v /= mass);
    let peak = y.iter().copied().fold(0.0, f64::max);
    PilotDensity::new(GridFunction::new(*grid, y)?, PILOT_FLOOR_FRACTION * peak)
}

/// Advances `u0` to the schedule's final time with implicit Euler steps.
///
/// `u0` carries no sample size, so the returned estimate reports a sample
/// count of zero; [`diffkde`] fills it in.
pub fn diffkde_solve(
    u0: &GridFunction,
    pilot: &PilotDensity,
    schedule: &SmoothingSchedule,
) -> Result<DensityEstimate> {
    let grid = *u0.grid();
    grid.ensure_same(pilot.grid())?;
    let u = evolve(u0.values(), pilot.values(), &grid, schedule)?;
    DensityEstimate::new(grid, u, Method::Diffusion, schedule.final_time(), 0)
}

/// Implicit Euler on `w = u / p`: each step solves
/// `(P - dt/2 D2) w_next = u` with `P = diag(p)` and `D2` the second
/// difference with reflected ghost nodes `w[-1] = w[1]`, `w[m+1] = w[m-1]`.
pub(crate) fn evolve(
    u0: &[f64],
    p: &[f64],
    grid: &Grid1D,
    schedule: &SmoothingSchedule,
) -> Result<Vec<f64>> {
    let n = grid.len();
    debug_assert_eq!(u0.len(), n);
    let dx = grid.dx();
    let r = schedule.time_step() / (dx * dx);

    let mut sub = vec![-0.5 * r; n];
    let mut sup = vec![-0.5 * r; n];
    let diag: Vec<f64> = p.iter().map(|pi| pi + r).collect();
    sup[0] = -r;
    sub[n - 1] = -r;
    sub[0] = 0.0;
    sup[n - 1] = 0.0;
    let system = Tridiagonal::factor(sub, &diag, &sup)?;

    let mut u = u0.to_vec();
    for _ in 0..schedule.steps() {
        system.solve_in_place(&mut u);
        u.iter_mut().zip(p).for_each(|(w, pi)| *w *= pi);
    }
    Ok(u)
}

/// Geometric mean of the pilot over the sample points.
///
/// Near `x` the solution spreads like a Gaussian of variance `T / p(x)`. The
/// Silverman time is a variance in squared data units, so it is multiplied by
/// this factor before the solve: the local kernel variance becomes
/// `h² g / p(x)`, equal to `h²` where the pilot sits at its geometric mean,
/// smaller in dense regions and larger in sparse ones.
pub fn pilot_time_scale(pilot: &PilotDensity, sample: &Sample1D) -> f64 {
    let log_sum: f64 = sample.values().iter().map(|&x| pilot.at(x).ln()).sum();
    (log_sum / sample.len() as f64).exp()
}

/// Pilot, schedule and result of one end-to-end diffusion estimate.
#[derive(Debug, Clone)]
pub struct DiffusionRun {
    pub estimate: DensityEstimate,
    pub pilot: PilotDensity,
    /// Schedule handed to the solver, final time already scaled.
    pub schedule: SmoothingSchedule,
    /// Silverman variance before scaling, squared data units.
    pub variance: f64,
}

/// End-to-end diffusion estimate with default pilot and final time.
pub fn diffkde(sample: &Sample1D, grid: &Grid1D) -> Result<DensityEstimate> {
    diffkde_run(sample, grid).map(|run| run.estimate)
}

pub fn diffkde_run(sample: &Sample1D, grid: &Grid1D) -> Result<DiffusionRun> {
    let u0 = bin_samples(sample, grid)?;
    let pilot = build_pilot(sample, grid)?;
    let base = silverman_time(sample)?;
    let schedule = base.scaled(pilot_time_scale(&pilot, sample))?;
    let mut estimate = diffkde_solve(&u0, &pilot, &schedule)?;
    estimate.set_sample_count(sample.len());
    Ok(DiffusionRun {
        estimate,
        pilot,
        schedule,
        variance: base.final_time(),
    })
}
