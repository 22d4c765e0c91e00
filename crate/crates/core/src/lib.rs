//! Density estimation and model-data comparison for 1-D samples.
//!
//! Two estimators are provided: a fixed-bandwidth Gaussian kernel estimator
//! ([`gaussian`]) and a diffusion-based estimator with a pilot-driven adaptive
//! kernel and zero-flux boundaries ([`diffusion`]). Estimates are compared with
//! the Wasserstein-1 distance ([`divergence`]). The [`ocean`] and [`pipeline`]
//! modules apply this to gridded tracer data from a model and from field
//! observations.

pub mod density;
pub mod diffusion;
pub mod divergence;
pub mod error;
pub mod gaussian;
pub mod grid;
pub mod ocean;
pub mod pipeline;
pub mod stats;
pub mod synthetic;
pub mod tridiag;

pub use density::{count_modes, find_modes, DensityEstimate, Method};
pub use diffusion::{
    build_pilot, diffkde, diffkde_run, diffkde_solve, silverman_time, PilotDensity,
    SmoothingSchedule,
};
pub use divergence::{to_cdf, wasserstein1, CdfFunction};
pub use error::{Error, Result};
pub use gaussian::{gaussian_kde, gaussian_kde_evaluate, scott_bandwidth, GaussianBandwidth};
pub use grid::{bin_samples, default_domain, integrate, make_grid, Grid1D, GridFunction, Sample1D};
pub use ocean::{
    apply_region, decade_mean, extract_values, load_csv, mask_common, CellGrid, CellKey,
    GeoDataset, GeoRecord, RegionFilter, Source,
};
pub use pipeline::{
    run_comparison, run_suite, ComparisonReport, Curve, GridOverride, RegionOutcome, Scenario,
    ScenarioConfig,
};
