use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_densitycmp"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn assert_error_line(o: &Output, code: i32, needle: &str) {
    assert_eq!(o.status.code(), Some(code), "stderr: {}", stderr(o));
    let err = stderr(o);
    let lines: Vec<&str> = err.lines().filter(|l| l.starts_with("error:")).collect();
    assert_eq!(lines.len(), 1, "stderr: {err}");
    assert!(lines[0].contains(needle), "{} lacks {needle}", lines[0]);
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn values_file(dir: &Path, values: &[f64]) -> PathBuf {
    let mut s = String::from("value\n");
    for v in values {
        s.push_str(&format!("{v}\n"));
    }
    write(dir, "values.csv", &s)
}

/// Two records per cell on a 5×3×3 layout covering both hemispheres and
/// three depths.
fn geo_file(dir: &Path, name: &str, every: usize, offset: f64) -> PathBuf {
    let mut s = String::from("lat,lon,depth,decade,value\n");
    let mut k = 0usize;
    for lat in [-60.0, -50.0, -10.0, 0.0, 20.0] {
        for lon in [0.0, 36.0, 72.0] {
            for depth in [17.5, 82.5, 500.0] {
                if k.is_multiple_of(every) {
                    for j in 0..2 {
                        let v = -25.0 + offset + ((k * 7 + j * 3) % 11) as f64 * 0.4;
                        s.push_str(&format!("{lat},{lon},{depth},1990,{v}\n"));
                    }
                }
                k += 1;
            }
        }
    }
    write(dir, name, &s)
}

#[test]
fn estimate_writes_m_plus_one_rows() {
    let dir = TempDir::new().unwrap();
    let input = values_file(dir.path(), &[1.0, 2.0, 2.5, 3.0, 4.5]);
    let out = dir.path().join("curve.csv");
    let o = run(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--method",
        "both",
        "--points",
        "1024",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,density_diff,density_gauss"));
    assert_eq!(lines.count(), 1025);
    let err = stderr(&o);
    assert!(err.contains("diffusion:") && err.contains("gaussian:"));
    assert!(err.contains("integral=1"));
}

#[test]
fn estimate_omits_absent_columns_and_defaults_to_stdout() {
    let dir = TempDir::new().unwrap();
    let input = values_file(dir.path(), &[0.0, 1.0, 1.5]);
    let o = run(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--method",
        "gauss",
        "--points",
        "32",
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("x,density_gauss"));
    assert_eq!(text.lines().count(), 34);
}

#[test]
fn estimate_with_one_value_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    let input = values_file(dir.path(), &[3.0]);
    let o = run(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--method",
        "diff",
    ]);
    assert_error_line(&o, 1, "insufficient-data");
    assert!(stderr(&o).contains("values.csv"));
}

#[test]
fn empty_domain_is_a_usage_error_before_io() {
    let o = run(&[
        "estimate",
        "--input",
        "/nonexistent/values.csv",
        "--lo",
        "5",
        "--hi",
        "5",
    ]);
    assert_error_line(&o, 2, "domain-empty");
}

#[test]
fn argument_errors_exit_two_with_one_line() {
    assert_error_line(&run(&["estimate"]), 2, "--input");
    assert_error_line(
        &run(&["estimate", "--input", "x.csv", "--method", "median"]),
        2,
        "median",
    );
    assert_error_line(
        &run(&["estimate", "--input", "x.csv", "--points", "4"]),
        2,
        "resolution",
    );
    assert_error_line(
        &run(&["compare", "--model", "a", "--field", "b", "--out", "r.json"]),
        2,
        "--scenario",
    );
    assert_error_line(
        &run(&["estimate", "--input", "x.csv", "--lo", "1"]),
        2,
        "--hi",
    );
}

#[test]
fn missing_input_names_the_file() {
    let o = run(&["estimate", "--input", "/nonexistent/vals.csv"]);
    assert_error_line(&o, 1, "/nonexistent/vals.csv");
}

#[test]
fn identical_inputs_compare_to_zero() {
    let dir = TempDir::new().unwrap();
    let model = geo_file(dir.path(), "model.csv", 1, 0.0);
    let report = dir.path().join("report.json");
    let o = run(&[
        "compare",
        "--model",
        model.to_str().unwrap(),
        "--field",
        model.to_str().unwrap(),
        "--decade",
        "1990",
        "--region",
        "all",
        "--scenario",
        "full",
        "--points",
        "128",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["n_model"], 45);
    assert_eq!(json["n_field"], 45);
    assert_eq!(json["config"]["scenario"], "full");
    assert_eq!(json["domain"]["intervals"], 128);
    for m in ["diffusion", "gaussian"] {
        assert!(json["errors"][m].as_f64().unwrap().abs() < 1e-12);
    }
    let curves = json["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 4);
    for c in curves {
        assert_eq!(c["values"].as_array().unwrap().len(), 129);
        assert!(c["raw_mass"].as_f64().unwrap() > 0.0);
        assert!(c["smoothing"].as_f64().unwrap() > 0.0);
    }

    let csv = fs::read_to_string(dir.path().join("report.curves.csv")).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some("x,model_diff,field_diff,model_gauss,field_gauss")
    );
    assert_eq!(csv.lines().count(), 130);
}

#[test]
fn masked_compare_on_disjoint_cells_fails() {
    let dir = TempDir::new().unwrap();
    let model = write(
        dir.path(),
        "model.csv",
        "lat,lon,depth,decade,value\n0,0,17.5,1990,-20\n0,0,82.5,1990,-21\n",
    );
    let field = write(
        dir.path(),
        "field.csv",
        "lat,lon,depth,decade,value\n30,90,17.5,1990,-20\n30,90,82.5,1990,-22\n",
    );
    let report = dir.path().join("r.json");
    let o = run(&[
        "compare",
        "--model",
        model.to_str().unwrap(),
        "--field",
        field.to_str().unwrap(),
        "--scenario",
        "masked",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_error_line(&o, 1, "empty-intersection");
    assert!(!report.exists());
}

fn suite(dir: &Path, model: &Path, field: &Path, scenario: &str, out: &str) -> Output {
    run(&[
        "suite",
        "--model",
        model.to_str().unwrap(),
        "--field",
        field.to_str().unwrap(),
        "--scenario",
        scenario,
        "--points",
        "64",
        "--out",
        dir.join(out).to_str().unwrap(),
    ])
}

fn index_rows(dir: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(dir.join("index.csv")).unwrap();
    text.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn suite_index_is_ordered_and_partitions_counts() {
    let dir = TempDir::new().unwrap();
    let model = geo_file(dir.path(), "model.csv", 1, 0.0);
    let field = geo_file(dir.path(), "field.csv", 2, 0.5);
    let o = suite(dir.path(), &model, &field, "full", "out");
    assert!(o.status.success(), "{}", stderr(&o));

    let rows = index_rows(&dir.path().join("out"));
    assert_eq!(rows[0][0], "region");
    let regions: Vec<&str> = rows[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(
        regions,
        ["all", "euphotic", "euphotic-ex-so", "euphotic-so"]
    );
    assert!(rows[1..].iter().all(|r| r[1] == "ok"));
    let count = |i: usize, col: usize| rows[i][col].parse::<usize>().unwrap();
    for col in [2, 3] {
        assert_eq!(count(2, col), count(3, col) + count(4, col));
    }
    // 5 latitudes × 3 longitudes × 3 depths; euphotic keeps two depths.
    assert_eq!(count(1, 2), 45);
    assert_eq!(count(2, 2), 30);
    assert_eq!(count(4, 2), 12);
    for r in ["all", "euphotic", "euphotic-ex-so", "euphotic-so"] {
        assert!(dir.path().join(format!("out/report-{r}.json")).is_file());
        assert!(dir
            .path()
            .join(format!("out/report-{r}.curves.csv"))
            .is_file());
    }
}

#[test]
fn suite_records_partial_failures() {
    let dir = TempDir::new().unwrap();
    let model = geo_file(dir.path(), "model.csv", 1, 0.0);
    // Southern Ocean field data sits in a cell the model lacks.
    let field = write(
        dir.path(),
        "field.csv",
        "lat,lon,depth,decade,value\n\
         0,0,17.5,1990,-20\n0,36,17.5,1990,-21\n20,72,82.5,1990,-22.5\n-10,0,500,1990,-23\n-70,0,17.5,1990,-24\n",
    );
    let o = suite(dir.path(), &model, &field, "masked", "out");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = index_rows(&dir.path().join("out"));
    let status: Vec<&str> = rows[1..].iter().map(|r| r[1].as_str()).collect();
    assert_eq!(status, ["ok", "ok", "ok", "empty-intersection"]);
    assert!(!dir.path().join("out/report-euphotic-so.json").exists());
}

#[test]
fn suite_fails_when_every_region_fails() {
    let dir = TempDir::new().unwrap();
    let model = geo_file(dir.path(), "model.csv", 1, 0.0);
    let field = write(
        dir.path(),
        "field.csv",
        "lat,lon,depth,decade,value\n-80,180,17.5,1990,-20\n-80,180,82.5,1990,-21\n",
    );
    let o = suite(dir.path(), &model, &field, "masked", "out");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).lines().all(|l| l.starts_with("error:")));
    let rows = index_rows(&dir.path().join("out"));
    assert_eq!(rows.len(), 5);
    let status: Vec<&str> = rows[1..].iter().map(|r| r[1].as_str()).collect();
    assert_eq!(
        status,
        [
            "empty-intersection",
            "empty-intersection",
            "empty-result",
            "empty-intersection"
        ]
    );
}
