//! Reproducible experiment drivers.  Each driver returns an
//! [`ExperimentReport`] holding a result table, named checks and plot series;
//! [`write_outputs`] serialises a report as `results.csv`, `results.json` and
//! `plotdata/*.dat`.

mod runs;
mod sublevel;

pub use runs::{
    exp_coarea, exp_convex_refined, exp_curvilinear_divergence, exp_cusp, exp_exponent, exp_polygon_finiteness,
    exp_regular_polygon, exp_sector_constant, exp_sector_equivalence, exp_solve, ConvexFamily, CONTROL_BETA,
    CUSP_DELTAS,
};
pub use sublevel::{exp_sublevel_chain, polygonize_sublevel, TestFunction, CHAIN_GAMMA};

use crate::error::{invalid, Result};
use crate::geometry::{DomainSpec, Polygon};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Mesh schedule shared by the drivers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshConfig {
    /// Coarsest target element size.  Sector runs scale it by the radius and
    /// sublevel runs by half the diameter.
    pub h0: f64,
    /// Number of meshes: the coarse one and `levels − 1` red refinements.
    pub levels: usize,
    /// Grading ratio at corners.
    pub q: f64,
    /// Number of graded layers at each corner.
    pub depth: usize,
}

impl Default for MeshConfig {
    fn default() -> Self {
        MeshConfig { h0: 0.1, levels: 3, q: 0.5, depth: 4 }
    }
}

impl MeshConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.h0 > 0.0) || !self.h0.is_finite() {
            return invalid(format!("h0 must be positive, got {}", self.h0));
        }
        if self.levels < 2 {
            return invalid(format!("levels must be at least 2, got {}", self.levels));
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            return invalid(format!("grading ratio must lie in (0, 1), got {}", self.q));
        }
        Ok(())
    }
}

/// Everything needed to rerun an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub domain: Option<DomainSpec>,
    pub betas: Vec<f64>,
    pub mesh: MeshConfig,
    pub out_dir: Option<String>,
    pub seed: u64,
    /// Experiment-specific parameters as given on the command line.
    #[serde(default)]
    pub params: serde_json::Map<String, serde_json::Value>,
}

impl ExperimentConfig {
    pub fn new(experiment: &str) -> ExperimentConfig {
        ExperimentConfig {
            experiment: experiment.to_string(),
            domain: None,
            betas: vec![0.5],
            mesh: MeshConfig::default(),
            out_dir: None,
            seed: 0,
            params: serde_json::Map::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(b) = self.betas.iter().find(|b| !(**b > 0.0 && **b < 1.0)) {
            return invalid(format!("beta values must lie in (0, 1), got {b}"));
        }
        self.mesh.validate()
    }
}

/// A table cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

/// Floats are written with 17 significant digits so that values round-trip.
pub fn format_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Table {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of a column; non-numeric cells are skipped.
    pub fn numbers(&self, name: &str) -> Vec<f64> {
        match self.column(name) {
            Some(k) => self.rows.iter().filter_map(|r| r[k].as_f64()).collect(),
            None => Vec::new(),
        }
    }
}

/// A named pass/fail assertion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// Two-column data for external plotting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(name: &str, x_label: &str, y_label: &str, points: Vec<(f64, f64)>) -> Series {
        Series { name: name.into(), x_label: x_label.into(), y_label: y_label.into(), points }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub table: Table,
    pub checks: Vec<Check>,
    pub series: Vec<Series>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, table: Table) -> ExperimentReport {
        ExperimentReport {
            experiment: experiment.into(),
            table,
            checks: Vec::new(),
            series: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// First 16 hex digits of the SHA-256 of the polygon's vertex list.
pub fn domain_hash(poly: &Polygon) -> String {
    let bytes = serde_json::to_vec(poly.vertices()).expect("vertex lists serialise");
    let digest = Sha256::digest(&bytes);
    digest.iter().take(8).fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Render `results.csv`: a header row, then one row per table row with the seed appended.
pub fn render_csv(report: &ExperimentReport, seed: u64) -> String {
    let mut out = String::new();
    let mut header = report.table.columns.clone();
    header.push("seed".into());
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &report.table.rows {
        let mut cells: Vec<String> = row.iter().map(Cell::csv).collect();
        cells.push(seed.to_string());
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Render one plot series as whitespace-separated columns behind `#` comments.
pub fn render_dat(series: &Series, experiment: &str, seed: u64) -> String {
    let mut out = format!("# experiment {experiment} seed {seed}\n# {} {}\n", series.x_label, series.y_label);
    for (x, y) in &series.points {
        let _ = writeln!(out, "{} {}", format_num(*x), format_num(*y));
    }
    out
}

#[derive(Serialize)]
struct JsonOut<'a> {
    config: &'a ExperimentConfig,
    versions: serde_json::Value,
    seed: u64,
    passed: bool,
    #[serde(flatten)]
    report: &'a ExperimentReport,
}

/// Render `results.json`.
pub fn render_json(report: &ExperimentReport, config: &ExperimentConfig) -> String {
    let out = JsonOut {
        config,
        versions: serde_json::json!({ "torsionlab": env!("CARGO_PKG_VERSION") }),
        seed: config.seed,
        passed: report.passed(),
        report,
    };
    let mut s = serde_json::to_string_pretty(&out).expect("reports serialise");
    s.push('\n');
    s
}

/// Write all output files of a report into `dir`.
pub fn write_outputs(report: &ExperimentReport, config: &ExperimentConfig, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir.join("plotdata"))?;
    fs::write(dir.join("results.csv"), render_csv(report, config.seed))?;
    fs::write(dir.join("results.json"), render_json(report, config))?;
    for s in &report.series {
        fs::write(
            dir.join("plotdata").join(format!("{}.dat", s.name)),
            render_dat(s, &report.experiment, config.seed),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::unit_square;

    #[test]
    fn csv_quoting_and_numbers() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![0.1.into(), "x,y".into(), Cell::Missing]);
        let rep = ExperimentReport::new("demo", t);
        let csv = render_csv(&rep, 7);
        assert_eq!(csv, "a,b,c,seed\n1.0000000000000001e-1,\"x,y\",,7\n");
        assert_eq!(format_num(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn hash_is_stable_and_discriminating() {
        let a = domain_hash(&unit_square());
        assert_eq!(a, domain_hash(&unit_square()));
        assert_eq!(a.len(), 16);
        assert_ne!(a, domain_hash(&unit_square().scaled(2.0)));
    }

    #[test]
    fn config_validation() {
        let mut c = ExperimentConfig::new("sector");
        assert!(c.validate().is_ok());
        c.betas = vec![1.0];
        assert!(c.validate().is_err());
        c.betas = vec![0.5];
        c.mesh.levels = 1;
        assert!(c.validate().is_err());
    }
}
