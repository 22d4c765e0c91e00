//! Gridded tracer records from model output and field observations.
//!
//! Inputs are assumed to already sit on the model's horizontal grid
//! (1.8° × 3.6°) and vertical levels. Records are re-keyed to grid cells by
//! rounding, which tolerates small coordinate jitter without interpolating.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const LAT_STEP: f64 = 1.8;
pub const LON_STEP: f64 = 3.6;

/// Depth of the euphotic zone in meters (inclusive).
pub const EUPHOTIC_DEPTH: f64 = 130.0;

/// Southern Ocean boundary latitude; records at or south of it belong to it.
pub const SOUTHERN_OCEAN_LAT: f64 = -45.0;

/// Default plausibility window for values, permil.
pub const DEFAULT_VALUE_WINDOW: (f64, f64) = (-60.0, 0.0);

/// Default vertical level centers in meters: 19 layers whose thickness grows
/// by 30 m per layer from 65 m at the surface.
pub const DEFAULT_DEPTH_LEVELS: [f64; 19] = [
    17.5, 82.5, 177.5, 302.5, 457.5, 642.5, 857.5, 1102.5, 1377.5, 1682.5, 2017.5, 2382.5, 2777.5,
    3202.5, 3657.5, 4142.5, 4657.5, 5202.5, 5777.5,
];

pub const CSV_HEADER: [&str; 5] = ["lat", "lon", "depth", "decade", "value"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoRecord {
    pub lat: f64,
    pub lon: f64,
    pub depth: f64,
    pub decade: i32,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Model,
    Field,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Model => "model",
            Source::Field => "field",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeoDataset {
    pub records: Vec<GeoRecord>,
    pub source: Source,
}

impl GeoDataset {
    pub fn new(records: Vec<GeoRecord>, source: Source) -> Self {
        Self { records, source }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    fn with_records(&self, records: Vec<GeoRecord>) -> Self {
        Self {
            records,
            source: self.source,
        }
    }
}

/// Quantized grid-cell coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellKey {
    pub lat_q: i32,
    pub lon_q: i32,
    pub depth_q: i32,
}

/// Horizontal spacing and vertical levels used to key records to cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CellGrid {
    depth_levels: Vec<f64>,
}

impl Default for CellGrid {
    fn default() -> Self {
        Self {
            depth_levels: DEFAULT_DEPTH_LEVELS.to_vec(),
        }
    }
}

impl CellGrid {
    pub fn new(depth_levels: Vec<f64>) -> Result<Self> {
        if depth_levels.is_empty() {
            return Err(Error::InvalidParameter("depth table is empty".into()));
        }
        if depth_levels.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidParameter(
                "depth table has non-finite entries".into(),
            ));
        }
        if depth_levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "depth table must be strictly increasing".into(),
            ));
        }
        Ok(Self { depth_levels })
    }

    /// Reads one depth in meters per line; blank lines and `#` comments are
    /// skipped.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut levels = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let depth: f64 = line.parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: i as u64 + 1,
                message: format!("invalid depth {line:?}"),
            })?;
            levels.push(depth);
        }
        Self::new(levels).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })
    }

    pub fn depth_levels(&self) -> &[f64] {
        &self.depth_levels
    }

    pub fn key(&self, r: &GeoRecord) -> CellKey {
        let lon_cells = (360.0 / LON_STEP).round() as i32;
        let lon_q = (r.lon.rem_euclid(360.0) / LON_STEP).round() as i32 % lon_cells;
        let depth_q = self
            .depth_levels
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| (*a - r.depth).abs().total_cmp(&(*b - r.depth).abs()))
            .map(|(i, _)| i as i32)
            .expect("depth table is non-empty");
        CellKey {
            lat_q: (r.lat / LAT_STEP).round() as i32,
            lon_q,
            depth_q,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionFilter {
    All,
    Euphotic,
    EuphoticExSo,
    EuphoticSo,
}

impl RegionFilter {
    /// Order in which suites report regions.
    pub const SUITE: [RegionFilter; 4] = [
        RegionFilter::All,
        RegionFilter::Euphotic,
        RegionFilter::EuphoticExSo,
        RegionFilter::EuphoticSo,
    ];

    pub fn admits(&self, r: &GeoRecord) -> bool {
        let euphotic = r.depth <= EUPHOTIC_DEPTH;
        let south = r.lat <= SOUTHERN_OCEAN_LAT;
        match self {
            RegionFilter::All => true,
            RegionFilter::Euphotic => euphotic,
            RegionFilter::EuphoticExSo => euphotic && !south,
            RegionFilter::EuphoticSo => euphotic && south,
        }
    }

    /// Hyphenated name used on the command line and in file names.
    pub fn name(&self) -> &'static str {
        match self {
            RegionFilter::All => "all",
            RegionFilter::Euphotic => "euphotic",
            RegionFilter::EuphoticExSo => "euphotic-ex-so",
            RegionFilter::EuphoticSo => "euphotic-so",
        }
    }
}

impl std::str::FromStr for RegionFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RegionFilter::SUITE
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown region {s:?}")))
    }
}

impl fmt::Display for RegionFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn validate_record(r: &GeoRecord, window: (f64, f64)) -> std::result::Result<(), String> {
    for (name, v) in [
        ("lat", r.lat),
        ("lon", r.lon),
        ("depth", r.depth),
        ("value", r.value),
    ] {
        if !v.is_finite() {
            return Err(format!("{name} is not finite"));
        }
    }
    if !(-90.0..=90.0).contains(&r.lat) {
        return Err(format!("lat {} outside [-90, 90]", r.lat));
    }
    if !(-180.0..360.0).contains(&r.lon) {
        return Err(format!("lon {} outside [-180, 360)", r.lon));
    }
    if r.depth < 0.0 {
        return Err(format!("depth {} is negative", r.depth));
    }
    if r.value < window.0 || r.value > window.1 {
        return Err(format!(
            "value {} outside plausibility window [{}, {}]",
            r.value, window.0, window.1
        ));
    }
    Ok(())
}

pub fn load_csv(path: &Path, source: Source) -> Result<GeoDataset> {
    load_csv_with_window(path, source, DEFAULT_VALUE_WINDOW)
}

/// Reads a `lat,lon,depth,decade,value` file, rejecting the first row that
/// fails to parse or falls outside `window`.
pub fn load_csv_with_window(path: &Path, source: Source, window: (f64, f64)) -> Result<GeoDataset> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(parse_err(
            1,
            format!(
                "expected header `{}`, found `{}`",
                CSV_HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(path, e))?;
        let line = row.position().map_or(0, |p| p.line());
        let record: GeoRecord = row
            .deserialize(Some(&header))
            .map_err(|e| parse_err(line, deserialize_message(e)))?;
        validate_record(&record, window).map_err(|message| parse_err(line, message))?;
        records.push(record);
    }
    if records.is_empty() {
        return Err(Error::EmptyDataset {
            path: path.to_path_buf(),
        });
    }
    Ok(GeoDataset { records, source })
}

/// Reads a single-column CSV with header `value`.
pub fn load_value_column(path: &Path) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if header.iter().ne(["value"]) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!(
                "expected header `value`, found `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut values = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(path, e))?;
        let line = row.position().map_or(0, |p| p.line());
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let (v,): (f64,) = row
            .deserialize(None)
            .map_err(|e| parse_err(deserialize_message(e)))?;
        if !v.is_finite() {
            return Err(parse_err(format!("value {v} is not finite")));
        }
        values.push(v);
    }
    Ok(values)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        kind => Error::Parse {
            path: path.to_path_buf(),
            line,
            message: csv_kind_message(kind),
        },
    }
}

fn deserialize_message(e: csv::Error) -> String {
    csv_kind_message(e.into_kind())
}

fn csv_kind_message(kind: csv::ErrorKind) -> String {
    match kind {
        csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => format!("expected {expected_len} fields, found {len}"),
        other => format!("{other:?}"),
    }
}

/// Averages the records of one decade per grid cell (values and coordinates).
pub fn decade_mean(ds: &GeoDataset, decade: i32, cells: &CellGrid) -> Result<GeoDataset> {
    #[derive(Default)]
    struct Acc {
        n: usize,
        lat: f64,
        lon: f64,
        depth: f64,
        value: f64,
    }
    let mut groups: BTreeMap<CellKey, Acc> = BTreeMap::new();
    for r in ds.records.iter().filter(|r| r.decade == decade) {
        let acc = groups.entry(cells.key(r)).or_default();
        acc.n += 1;
        acc.lat += r.lat;
        acc.lon += r.lon;
        acc.depth += r.depth;
        acc.value += r.value;
    }
    if groups.is_empty() {
        return Err(Error::EmptyResult(format!(
            "{} data has no records for decade {decade}",
            ds.source
        )));
    }
    let records = groups
        .into_values()
        .map(|a| {
            let n = a.n as f64;
            GeoRecord {
                lat: a.lat / n,
                lon: a.lon / n,
                depth: a.depth / n,
                decade,
                value: a.value / n,
            }
        })
        .collect();
    Ok(ds.with_records(records))
}

pub fn apply_region(ds: &GeoDataset, region: RegionFilter) -> Result<GeoDataset> {
    let records: Vec<GeoRecord> = ds
        .records
        .iter()
        .copied()
        .filter(|r| region.admits(r))
        .collect();
    if records.is_empty() {
        return Err(Error::EmptyResult(format!(
            "{} data has no records in region {region}",
            ds.source
        )));
    }
    Ok(ds.with_records(records))
}

fn unique_keys(ds: &GeoDataset, cells: &CellGrid) -> Result<BTreeSet<CellKey>> {
    let mut keys = BTreeSet::new();
    for r in &ds.records {
        let key = cells.key(r);
        if !keys.insert(key) {
            return Err(Error::DuplicateCell(format!(
                "{} data, cell {key:?}",
                ds.source
            )));
        }
    }
    Ok(keys)
}

/// Restricts both datasets to the cells present in both.
pub fn mask_common(
    model: &GeoDataset,
    field: &GeoDataset,
    cells: &CellGrid,
) -> Result<(GeoDataset, GeoDataset)> {
    let model_keys = unique_keys(model, cells)?;
    let field_keys = unique_keys(field, cells)?;
    let common: BTreeSet<CellKey> = model_keys.intersection(&field_keys).copied().collect();
    if common.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    let keep = |ds: &GeoDataset| {
        let records = ds
            .records
            .iter()
            .copied()
            .filter(|r| common.contains(&cells.key(r)))
            .collect();
        ds.with_records(records)
    };
    Ok((keep(model), keep(field)))
}

/// Values ordered by cell key; ties keep input order.
pub fn extract_values(ds: &GeoDataset, cells: &CellGrid) -> Vec<f64> {
    let mut keyed: Vec<(CellKey, f64)> =
        ds.records.iter().map(|r| (cells.key(r), r.value)).collect();
    keyed.sort_by_key(|(k, _)| *k);
    keyed.into_iter().map(|(_, v)| v).collect()
}
