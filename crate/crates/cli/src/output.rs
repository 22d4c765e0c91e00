//! Curve CSVs, JSON reports and the suite index.
//!
//! All floating-point output is rounded to 9 significant digits so files are
//! stable across runs and platforms.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use densitycmp::{ComparisonReport, DensityEstimate, Grid1D, Method, RegionOutcome, Source};
use serde::Serialize;

use crate::CliError;

/// Rounds to 9 significant digits.
pub fn round9(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.8e}").parse().expect("formatted float parses")
}

/// Text form of [`round9`], switching to exponent notation for tiny or huge
/// magnitudes.
pub fn fmt9(v: f64) -> String {
    let r = round9(v);
    let a = r.abs();
    if r == 0.0 {
        "0".to_string()
    } else if (1e-4..1e15).contains(&a) {
        r.to_string()
    } else {
        format!("{r:e}")
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Data(format!("{}: {e}", path.display()))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::Data(format!("{}: {e}", path.display()))
}

/// Writes `x` followed by one column per named curve.
pub fn write_curves<W: Write>(
    out: W,
    grid: &Grid1D,
    columns: &[(String, &DensityEstimate)],
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["x".to_string()];
    header.extend(columns.iter().map(|(name, _)| name.clone()));
    w.write_record(&header)?;
    for (i, x) in grid.nodes().enumerate() {
        let mut row = vec![fmt9(x)];
        row.extend(columns.iter().map(|(_, d)| fmt9(d.values()[i])));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn method_suffix(m: Method) -> &'static str {
    match m {
        Method::Diffusion => "diff",
        Method::Gaussian => "gauss",
    }
}

/// Curve columns `model_diff,field_diff,model_gauss,field_gauss` (requested
/// methods only).
pub fn report_columns(report: &ComparisonReport) -> Vec<(String, &DensityEstimate)> {
    let mut cols = Vec::new();
    for m in [Method::Diffusion, Method::Gaussian] {
        for s in [Source::Model, Source::Field] {
            if let Some(c) = report.curve(m, s) {
                cols.push((format!("{s}_{}", method_suffix(m)), &c.estimate));
            }
        }
    }
    cols
}

pub fn write_report_curves(path: &Path, report: &ComparisonReport) -> Result<(), CliError> {
    let file = std::fs::File::create(path).map_err(io_err(path))?;
    write_curves(
        std::io::BufWriter::new(file),
        &report.grid,
        &report_columns(report),
    )
    .map_err(csv_err(path))
}

#[derive(Serialize)]
struct ConfigEcho {
    scenario: &'static str,
    region: &'static str,
    decade: i32,
    estimators: Vec<&'static str>,
    margin: f64,
    grid_override: Option<DomainOut>,
}

#[derive(Serialize)]
struct DomainOut {
    lo: f64,
    hi: f64,
    intervals: usize,
}

#[derive(Serialize)]
struct CurveOut {
    method: &'static str,
    source: String,
    sample_count: usize,
    /// Kernel variance (Gaussian) or diffusion time (diffusion).
    smoothing: f64,
    variance: f64,
    raw_mass: f64,
    values: Vec<f64>,
}

#[derive(Serialize)]
struct ReportOut {
    config: ConfigEcho,
    n_model: usize,
    n_field: usize,
    domain: DomainOut,
    errors: BTreeMap<&'static str, f64>,
    curves: Vec<CurveOut>,
}

pub fn report_json(report: &ComparisonReport) -> String {
    let cfg = &report.config;
    let out = ReportOut {
        config: ConfigEcho {
            scenario: cfg.scenario.name(),
            region: cfg.region.name(),
            decade: cfg.decade,
            estimators: cfg.estimators.iter().map(|m| m.as_str()).collect(),
            margin: round9(cfg.margin),
            grid_override: cfg.grid_override.map(|g| DomainOut {
                lo: round9(g.lo),
                hi: round9(g.hi),
                intervals: g.intervals,
            }),
        },
        n_model: report.n_model,
        n_field: report.n_field,
        domain: DomainOut {
            lo: round9(report.grid.lo()),
            hi: round9(report.grid.hi()),
            intervals: report.grid.intervals(),
        },
        errors: report
            .errors
            .iter()
            .map(|(m, e)| (m.as_str(), round9(*e)))
            .collect(),
        curves: report
            .curves
            .iter()
            .map(|c| CurveOut {
                method: c.estimate.method().as_str(),
                source: c.source.to_string(),
                sample_count: c.estimate.sample_count(),
                smoothing: round9(c.estimate.smoothing()),
                variance: round9(c.variance),
                raw_mass: round9(c.raw_mass),
                values: c.estimate.values().iter().map(|&v| round9(v)).collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&out).expect("report serializes");
    s.push('\n');
    s
}

pub fn write_report(path: &Path, report: &ComparisonReport) -> Result<(), CliError> {
    std::fs::write(path, report_json(report)).map_err(io_err(path))
}

/// Sibling path `<stem>.curves.csv` for a report path.
pub fn curves_path(report: &Path) -> std::path::PathBuf {
    let stem = report
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    report.with_file_name(format!("{stem}.curves.csv"))
}

pub const INDEX_HEADER: [&str; 8] = [
    "region",
    "status",
    "n_model",
    "n_field",
    "error_diff",
    "error_gauss",
    "report",
    "message",
];

pub fn write_index(
    path: &Path,
    outcomes: &[RegionOutcome],
    report_names: &[String],
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(INDEX_HEADER).map_err(csv_err(path))?;
    for (o, name) in outcomes.iter().zip(report_names) {
        let row = match &o.result {
            Ok(r) => {
                let err = |m| r.error(m).map(fmt9).unwrap_or_default();
                vec![
                    o.region.name().to_string(),
                    "ok".to_string(),
                    r.n_model.to_string(),
                    r.n_field.to_string(),
                    err(Method::Diffusion),
                    err(Method::Gaussian),
                    name.clone(),
                    String::new(),
                ]
            }
            Err(e) => vec![
                o.region.name().to_string(),
                e.kind().to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                e.to_string(),
            ],
        };
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}
