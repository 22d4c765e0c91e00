//! Model-versus-field comparisons over regional subsets.
//!
//! A comparison averages both datasets over one decade, restricts them to a
//! region, optionally masks them to shared grid cells, estimates a density for
//! each on a common grid and reports the Wasserstein-1 distance between the
//! model and field curves for every requested estimator.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::density::{DensityEstimate, Method};
use crate::diffusion::diffkde_run;
use crate::divergence::wasserstein1;
use crate::error::{Error, Result};
use crate::gaussian::gaussian_kde;
use crate::grid::{default_domain, make_grid, Grid1D, Sample1D, DEFAULT_INTERVALS, DEFAULT_MARGIN};
use crate::ocean::{
    apply_region, decade_mean, extract_values, mask_common, CellGrid, GeoDataset, RegionFilter,
    Source,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// Only cells where both sources have data.
    Masked,
    /// All available data of each source.
    Full,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Masked => "masked",
            Scenario::Full => "full",
        }
    }
}

/// Explicit evaluation grid, bypassing the data-derived domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridOverride {
    pub lo: f64,
    pub hi: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub region: RegionFilter,
    pub decade: i32,
    /// Number of grid intervals when the domain is derived from the data.
    pub intervals: usize,
    pub margin: f64,
    pub grid_override: Option<GridOverride>,
    pub estimators: BTreeSet<Method>,
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario, region: RegionFilter, decade: i32) -> Self {
        Self {
            scenario,
            region,
            decade,
            intervals: DEFAULT_INTERVALS,
            margin: DEFAULT_MARGIN,
            grid_override: None,
            estimators: [Method::Diffusion, Method::Gaussian].into_iter().collect(),
        }
    }

    pub fn with_region(&self, region: RegionFilter) -> Self {
        Self {
            region,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.estimators.is_empty() {
            return Err(Error::InvalidParameter("no estimator requested".into()));
        }
        match self.grid_override {
            Some(g) => make_grid(g.lo, g.hi, g.intervals).map(|_| ()),
            None => {
                if !(self.margin >= 0.0 && self.margin.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "margin must be non-negative, got {}",
                        self.margin
                    )));
                }
                make_grid(0.0, 1.0, self.intervals).map(|_| ())
            }
        }
    }
}

/// One estimated curve and its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub source: Source,
    pub estimate: DensityEstimate,
    /// Trapezoidal integral before any renormalization.
    pub raw_mass: f64,
    /// Smoothing variance in squared data units (Silverman `h²` for the
    /// diffusion estimator, kernel variance for the Gaussian one).
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub config: ScenarioConfig,
    pub n_model: usize,
    pub n_field: usize,
    pub grid: Grid1D,
    /// Ordered by method, then model before field.
    pub curves: Vec<Curve>,
    /// Wasserstein-1 distance between model and field, per method.
    pub errors: Vec<(Method, f64)>,
}

impl ComparisonReport {
    pub fn domain(&self) -> (f64, f64) {
        (self.grid.lo(), self.grid.hi())
    }

    pub fn curve(&self, method: Method, source: Source) -> Option<&Curve> {
        self.curves
            .iter()
            .find(|c| c.estimate.method() == method && c.source == source)
    }

    pub fn error(&self, method: Method) -> Option<f64> {
        self.errors
            .iter()
            .find(|(m, _)| *m == method)
            .map(|(_, e)| *e)
    }
}

fn estimate(method: Method, source: Source, sample: &Sample1D, grid: &Grid1D) -> Result<Curve> {
    let (estimate, variance) = match method {
        Method::Gaussian => {
            let d = gaussian_kde(sample, grid)?;
            let t = d.smoothing();
            (d, t)
        }
        Method::Diffusion => {
            let run = diffkde_run(sample, grid)?;
            (run.estimate, run.variance)
        }
    };
    Ok(Curve {
        source,
        raw_mass: estimate.integral(),
        estimate,
        variance,
    })
}

/// Runs one scenario/region comparison.
pub fn run_comparison(
    model: &GeoDataset,
    field: &GeoDataset,
    cfg: &ScenarioConfig,
    cells: &CellGrid,
) -> Result<ComparisonReport> {
    cfg.validate()?;
    let prepare = |ds: &GeoDataset| -> Result<GeoDataset> {
        apply_region(&decade_mean(ds, cfg.decade, cells)?, cfg.region)
    };
    let mut model_ds = prepare(model)?;
    let mut field_ds = prepare(field)?;
    if cfg.scenario == Scenario::Masked {
        (model_ds, field_ds) = mask_common(&model_ds, &field_ds, cells)?;
    }

    let model_sample = Sample1D::new(extract_values(&model_ds, cells))?;
    let field_sample = Sample1D::new(extract_values(&field_ds, cells))?;

    let grid = match cfg.grid_override {
        Some(g) => make_grid(g.lo, g.hi, g.intervals)?,
        None => {
            let union: Vec<f64> = model_sample
                .values()
                .iter()
                .chain(field_sample.values())
                .copied()
                .collect();
            let (lo, hi) = default_domain(&union, cfg.margin)?;
            make_grid(lo, hi, cfg.intervals)?
        }
    };

    let mut curves = Vec::new();
    let mut errors = Vec::new();
    for &method in &cfg.estimators {
        let m = estimate(method, Source::Model, &model_sample, &grid)?;
        let f = estimate(method, Source::Field, &field_sample, &grid)?;
        errors.push((method, wasserstein1(&m.estimate, &f.estimate)?));
        curves.push(m);
        curves.push(f);
    }

    Ok(ComparisonReport {
        config: cfg.clone(),
        n_model: model_sample.len(),
        n_field: field_sample.len(),
        grid,
        curves,
        errors,
    })
}

/// Outcome of one region within a suite.
#[derive(Debug)]
pub struct RegionOutcome {
    pub region: RegionFilter,
    pub result: Result<ComparisonReport>,
}

/// Runs `base` for every region in [`RegionFilter::SUITE`] order. Regions
/// run concurrently; a failing region does not stop the others.
pub fn run_suite(
    model: &GeoDataset,
    field: &GeoDataset,
    base: &ScenarioConfig,
    cells: &CellGrid,
) -> Vec<RegionOutcome> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = RegionFilter::SUITE
            .into_iter()
            .map(|region| {
                let cfg = base.with_region(region);
                scope.spawn(move || RegionOutcome {
                    region,
                    result: run_comparison(model, field, &cfg, cells),
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("comparison thread panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ocean::GeoRecord;

    fn rec(lat: f64, lon: f64, depth: f64, value: f64) -> GeoRecord {
        GeoRecord {
            lat,
            lon,
            depth,
            decade: 1990,
            value,
        }
    }

    fn dataset(source: Source) -> GeoDataset {
        let mut records = Vec::new();
        for i in 0..12 {
            let lat = -63.0 + 9.0 * i as f64;
            for (j, depth) in [17.5, 82.5, 457.5].into_iter().enumerate() {
                let value = -28.0 + 0.5 * i as f64 - 0.7 * j as f64 + 0.1 * (i * j) as f64;
                records.push(rec(lat, 36.0, depth, value));
            }
        }
        GeoDataset::new(records, source)
    }

    #[test]
    fn identical_inputs_give_zero_error() {
        let model = dataset(Source::Model);
        let field = dataset(Source::Field);
        let cells = CellGrid::default();
        for scenario in [Scenario::Masked, Scenario::Full] {
            let cfg = ScenarioConfig::new(scenario, RegionFilter::All, 1990);
            let r = run_comparison(&model, &field, &cfg, &cells).unwrap();
            assert_eq!(r.n_model, 36);
            assert_eq!(r.n_field, 36);
            for method in [Method::Diffusion, Method::Gaussian] {
                assert!(r.error(method).unwrap().abs() < 1e-12);
                assert_eq!(
                    r.curve(method, Source::Model).unwrap().estimate.values(),
                    r.curve(method, Source::Field).unwrap().estimate.values()
                );
            }
        }
    }

    #[test]
    fn curves_share_grid_and_counts() {
        let model = dataset(Source::Model);
        let mut field = dataset(Source::Field);
        field.records.truncate(20);
        field.records.iter_mut().for_each(|r| r.value += 1.0);
        let cfg = ScenarioConfig::new(Scenario::Full, RegionFilter::All, 1990);
        let r = run_comparison(&model, &field, &cfg, &CellGrid::default()).unwrap();
        assert_eq!((r.n_model, r.n_field), (36, 20));
        assert_eq!(r.curves.len(), 4);
        for c in &r.curves {
            assert_eq!(c.estimate.grid(), &r.grid);
            let n = if c.source == Source::Model { 36 } else { 20 };
            assert_eq!(c.estimate.sample_count(), n);
        }
        assert!(r.errors.iter().all(|(_, e)| *e > 0.0));
        let diff = r.curve(Method::Diffusion, Source::Field).unwrap();
        assert!((diff.raw_mass - 1.0).abs() < 1e-6);
    }

    #[test]
    fn masked_scenario_equalizes_counts() {
        let model = dataset(Source::Model);
        let mut field = dataset(Source::Field);
        field.records.retain(|r| r.depth < 100.0);
        field.records.truncate(15);
        let cfg = ScenarioConfig::new(Scenario::Masked, RegionFilter::All, 1990);
        let r = run_comparison(&model, &field, &cfg, &CellGrid::default()).unwrap();
        assert_eq!(r.n_model, r.n_field);
        assert_eq!(r.n_field, 15);
    }

    #[test]
    fn single_estimator_and_grid_override() {
        let model = dataset(Source::Model);
        let field = dataset(Source::Field);
        let mut cfg = ScenarioConfig::new(Scenario::Full, RegionFilter::Euphotic, 1990);
        cfg.estimators = [Method::Gaussian].into_iter().collect();
        cfg.grid_override = Some(GridOverride {
            lo: -35.0,
            hi: -15.0,
            intervals: 256,
        });
        let r = run_comparison(&model, &field, &cfg, &CellGrid::default()).unwrap();
        assert_eq!(r.curves.len(), 2);
        assert_eq!(r.domain(), (-35.0, -15.0));
        assert_eq!(r.grid.intervals(), 256);
        assert!(r.error(Method::Diffusion).is_none());

        cfg.estimators.clear();
        assert!(run_comparison(&model, &field, &cfg, &CellGrid::default()).is_err());
    }

    #[test]
    fn errors_propagate() {
        let model = dataset(Source::Model);
        let field = GeoDataset::new(vec![rec(0.0, 180.0, 17.5, -20.0)], Source::Field);
        let cells = CellGrid::default();
        let masked = ScenarioConfig::new(Scenario::Masked, RegionFilter::All, 1990);
        assert!(matches!(
            run_comparison(&model, &field, &masked, &cells),
            Err(Error::EmptyIntersection)
        ));
        let full = ScenarioConfig::new(Scenario::Full, RegionFilter::All, 1990);
        assert!(matches!(
            run_comparison(&model, &field, &full, &cells),
            Err(Error::InsufficientData { count: 1, .. })
        ));
        let other_decade = ScenarioConfig::new(Scenario::Full, RegionFilter::All, 2000);
        assert!(matches!(
            run_comparison(&model, &field, &other_decade, &cells),
            Err(Error::EmptyResult(_))
        ));
    }

    #[test]
    fn suite_runs_regions_in_order_and_survives_failures() {
        let model = dataset(Source::Model);
        // Field data only north of 45° S: the Southern Ocean region fails.
        let mut field = dataset(Source::Field);
        field.records.retain(|r| r.lat > -45.0);
        let base = ScenarioConfig::new(Scenario::Masked, RegionFilter::All, 1990);
        let out = run_suite(&model, &field, &base, &CellGrid::default());
        let regions: Vec<_> = out.iter().map(|o| o.region).collect();
        assert_eq!(regions, RegionFilter::SUITE.to_vec());
        assert!(out[0].result.is_ok());
        assert!(out[1].result.is_ok());
        assert!(out[2].result.is_ok());
        assert!(out[3].result.is_err());
        let e = out[1].result.as_ref().unwrap();
        let x = out[2].result.as_ref().unwrap();
        assert_eq!(e.n_model, x.n_model);
    }
}
