mod cli;
mod output;

use std::collections::BTreeSet;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use densitycmp::ocean::{load_value_column, CellGrid};
use densitycmp::{
    default_domain, diffkde_run, gaussian_kde, load_csv, make_grid, run_comparison, run_suite,
    GridOverride, Method, Sample1D, ScenarioConfig, Source,
};

use crate::cli::{Cli, Command, CompareArgs, DataArgs, EstimateArgs, GridArgs, SuiteArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Data(_) => ExitCode::from(1),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) => m,
        }
    }
}

impl From<densitycmp::Error> for CliError {
    fn from(e: densitycmp::Error) -> Self {
        let msg = format!("{}: {e}", e.kind());
        if e.is_usage() {
            CliError::Usage(msg)
        } else {
            CliError::Data(msg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let head: Vec<&str> = rendered
                .lines()
                .take_while(|l| !l.trim().is_empty())
                .map(str::trim)
                .collect();
            let head = head.join(" ");
            let head = head.strip_prefix("error: ").unwrap_or(&head);
            eprintln!("error: usage: {head}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Estimate(args) => cmd_estimate(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Suite(args) => cmd_suite(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let line = e.message().replace('\n', " ");
            eprintln!("error: {line}");
            e.exit_code()
        }
    }
}

/// Checks grid flags without touching any file.
fn validate_grid(g: &GridArgs) -> Result<Option<GridOverride>, CliError> {
    if !(g.margin >= 0.0 && g.margin.is_finite()) {
        return Err(CliError::Usage(format!(
            "invalid-parameter: --margin must be a non-negative number, got {}",
            g.margin
        )));
    }
    match (g.lo, g.hi) {
        (Some(lo), Some(hi)) => {
            make_grid(lo, hi, g.points)?;
            Ok(Some(GridOverride {
                lo,
                hi,
                intervals: g.points,
            }))
        }
        _ => {
            make_grid(0.0, 1.0, g.points)?;
            Ok(None)
        }
    }
}

fn cmd_estimate(args: EstimateArgs) -> Result<ExitCode, CliError> {
    let fixed = validate_grid(&args.grid)?;
    let values = load_value_column(&args.input)?;
    let sample = Sample1D::new(values)
        .map_err(|e| CliError::Data(format!("{}: {}: {e}", e.kind(), args.input.display())))?;
    let grid = match fixed {
        Some(g) => make_grid(g.lo, g.hi, g.intervals)?,
        None => {
            let (lo, hi) = default_domain(sample.values(), args.grid.margin)?;
            make_grid(lo, hi, args.grid.points)?
        }
    };

    let mut columns = Vec::new();
    for method in args.method.methods() {
        let estimate = match method {
            Method::Diffusion => {
                let run = diffkde_run(&sample, &grid)?;
                eprintln!(
                    "diffusion: variance={} time={} steps={} integral={}",
                    output::fmt9(run.variance),
                    output::fmt9(run.schedule.final_time()),
                    run.schedule.steps(),
                    output::fmt9(run.estimate.integral()),
                );
                run.estimate
            }
            Method::Gaussian => {
                let d = gaussian_kde(&sample, &grid)?;
                eprintln!(
                    "gaussian: variance={} integral={}",
                    output::fmt9(d.smoothing()),
                    output::fmt9(d.integral()),
                );
                d
            }
        };
        columns.push((
            format!("density_{}", output::method_suffix(method)),
            estimate,
        ));
    }
    let columns: Vec<_> = columns.iter().map(|(n, d)| (n.clone(), d)).collect();

    let result = match &args.out {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            output::write_curves(std::io::BufWriter::new(file), &grid, &columns)
        }
        None => output::write_curves(std::io::stdout().lock(), &grid, &columns),
    };
    result.map_err(|e| CliError::Data(e.to_string()))?;
    Ok(ExitCode::SUCCESS)
}

struct Loaded {
    model: densitycmp::GeoDataset,
    field: densitycmp::GeoDataset,
    cells: CellGrid,
    base: ScenarioConfig,
}

fn load_inputs(data: &DataArgs, region: densitycmp::RegionFilter) -> Result<Loaded, CliError> {
    let grid_override = validate_grid(&data.grid)?;
    let mut base = ScenarioConfig::new(data.scenario.into(), region, data.decade);
    base.intervals = data.grid.points;
    base.margin = data.grid.margin;
    base.grid_override = grid_override;
    base.estimators = data.method.methods().into_iter().collect::<BTreeSet<_>>();

    let cells = match &data.depth_table {
        Some(path) => CellGrid::from_file(path)?,
        None => CellGrid::default(),
    };
    Ok(Loaded {
        model: load_csv(&data.model, Source::Model)?,
        field: load_csv(&data.field, Source::Field)?,
        cells,
        base,
    })
}

fn ensure_parent(path: &Path) -> Result<(), CliError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => Err(CliError::Data(format!(
            "{}: output directory does not exist",
            dir.display()
        ))),
        _ => Ok(()),
    }
}

fn cmd_compare(args: CompareArgs) -> Result<ExitCode, CliError> {
    let inputs = load_inputs(&args.data, args.region.into())?;
    ensure_parent(&args.out)?;
    let report = run_comparison(&inputs.model, &inputs.field, &inputs.base, &inputs.cells)?;
    output::write_report(&args.out, &report)?;
    output::write_report_curves(&output::curves_path(&args.out), &report)?;
    for (m, e) in &report.errors {
        eprintln!(
            "{}: n_model={} n_field={} wasserstein={}",
            m.as_str(),
            report.n_model,
            report.n_field,
            output::fmt9(*e)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_suite(args: SuiteArgs) -> Result<ExitCode, CliError> {
    let inputs = load_inputs(&args.data, densitycmp::RegionFilter::All)?;
    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Data(format!("{}: {e}", args.out.display())))?;
    let outcomes = run_suite(&inputs.model, &inputs.field, &inputs.base, &inputs.cells);

    let mut names = Vec::new();
    for o in &outcomes {
        let name = format!("report-{}.json", o.region.name());
        match &o.result {
            Ok(report) => {
                let path = args.out.join(&name);
                output::write_report(&path, report)?;
                output::write_report_curves(&output::curves_path(&path), report)?;
            }
            Err(e) => eprintln!("error: {}: {}: {e}", o.region.name(), e.kind()),
        }
        names.push(name);
    }
    output::write_index(&args.out.join("index.csv"), &outcomes, &names)?;

    if outcomes.iter().any(|o| o.result.is_ok()) {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError::Data("every region failed".into()))
    }
}
