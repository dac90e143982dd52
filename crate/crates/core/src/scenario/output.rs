//! Plot-ready CSV tables and JSON summaries.
//!
//! Everything written here is a pure function of the [`RunResult`]: no
//! timestamps, no host names, map keys in sorted order. Two runs of the same
//! config therefore produce byte-identical files.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::config::OutputFormat;
use super::runner::{Outcome, RunResult};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => write!(f, "{v}"),
        }
    }
}

impl From<&Cell> for Value {
    fn from(c: &Cell) -> Value {
        match *c {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn fidelity_table(
        name: String,
        key: &'static str,
        rows: impl Iterator<Item = (Cell, f64)>,
        squared: bool,
    ) -> Table {
        let mut columns = vec![key, "fidelity"];
        if squared {
            columns.push("fidelity_squared");
        }
        let rows = rows
            .map(|(k, f)| {
                let mut row = vec![k, Cell::Float(f)];
                if squared {
                    row.push(Cell::Float(f * f));
                }
                row
            })
            .collect();
        Table {
            name,
            columns,
            rows,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "columns": self.columns,
            "rows": self
                .rows
                .iter()
                .map(|r| r.iter().map(Value::from).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

impl RunResult {
    /// Output tables; `squared` adds a labeled `fidelity_squared` column.
    pub fn tables(&self, squared: bool) -> Vec<Table> {
        let id = self.config().scenario;
        match &self.outcome {
            Outcome::Curve { trace, .. } => {
                let fid = Table::fidelity_table(
                    format!("{id}_fidelity"),
                    "z",
                    trace
                        .z_grid
                        .iter()
                        .zip(&trace.fidelity)
                        .map(|(z, f)| (Cell::Float(*z), *f)),
                    squared,
                );
                let mut rows = Vec::new();
                for (z, row) in trace.z_grid.iter().zip(&trace.intensities) {
                    for (site, v) in row.iter().enumerate() {
                        rows.push(vec![
                            Cell::Float(*z),
                            Cell::Int(site as u64),
                            Cell::Float(*v),
                        ]);
                    }
                }
                let intensity = Table {
                    name: format!("{id}_intensity"),
                    columns: vec!["z", "site", "intensity"],
                    rows,
                };
                vec![fid, intensity]
            }
            Outcome::DetuningSweep { points } => vec![Table::fidelity_table(
                format!("{id}_sweep"),
                "delta_over_kappa",
                points.iter().map(|(d, f)| (Cell::Float(*d), *f)),
                squared,
            )],
            Outcome::Ensemble { stats } => stats
                .iter()
                .map(|s| {
                    Table::fidelity_table(
                        format!("{id}_ensemble_delta{}", s.delta_over_kappa),
                        "realization",
                        s.fidelities
                            .iter()
                            .enumerate()
                            .map(|(i, f)| (Cell::Int(i as u64), *f)),
                        squared,
                    )
                })
                .collect(),
            Outcome::PhaseSweep { curves } => curves
                .iter()
                .map(|c| {
                    Table::fidelity_table(
                        format!("{id}_phi_n0_{}", c.n0),
                        "phi",
                        c.points.iter().map(|(p, f)| (Cell::Float(*p), *f)),
                        squared,
                    )
                })
                .collect(),
            Outcome::PhotonSweep { points } => vec![Table::fidelity_table(
                format!("{id}_n0"),
                "n0",
                points.iter().map(|(n, f)| (Cell::Int(u64::from(*n)), *f)),
                squared,
            )],
        }
    }

    /// Scalar results plus provenance.
    pub fn summary(&self) -> Value {
        let results = match &self.outcome {
            Outcome::Curve {
                trace,
                final_fidelity,
            } => json!({
                "final_fidelity": final_fidelity,
                "min_fidelity": trace.fidelity.iter().copied().fold(f64::INFINITY, f64::min),
                "num_samples": trace.z_grid.len(),
                "total_photons": trace.total_photons,
                "max_photon_number_drift": trace.photon_number_drift(),
            }),
            Outcome::DetuningSweep { points } => json!({
                "points": points
                    .iter()
                    .map(|(d, f)| json!({"delta_over_kappa": d, "fidelity": f}))
                    .collect::<Vec<_>>(),
            }),
            Outcome::Ensemble { stats } => json!({
                "ensembles": stats
                    .iter()
                    .map(|s| json!({
                        "delta_over_kappa": s.delta_over_kappa,
                        "ordered_fidelity": s.ordered_fidelity,
                        "realizations": s.fidelities.len(),
                        "mean": s.mean,
                        "std_dev": s.std_dev,
                        "min": s.min,
                        "max": s.max,
                    }))
                    .collect::<Vec<_>>(),
            }),
            Outcome::PhaseSweep { curves } => json!({
                "curves": curves
                    .iter()
                    .map(|c| {
                        let fs = c.points.iter().map(|p| p.1);
                        json!({
                            "n0": c.n0,
                            "min_fidelity": fs.clone().fold(f64::INFINITY, f64::min),
                            "max_fidelity": fs.fold(f64::NEG_INFINITY, f64::max),
                        })
                    })
                    .collect::<Vec<_>>(),
            }),
            Outcome::PhotonSweep { points } => json!({
                "points": points
                    .iter()
                    .map(|(n, f)| json!({"n0": n, "fidelity": f}))
                    .collect::<Vec<_>>(),
            }),
        };
        json!({
            "scenario": self.config().scenario,
            "results": results,
            "provenance": self.provenance,
        })
    }
}

/// Writes the run into `dir` and returns the paths written, in order.
///
/// CSV: one file per table plus `<id>_summary.json`. JSON: a single `<id>.json`
/// holding the summary and every table.
pub fn write_outputs(
    result: &RunResult,
    dir: &Path,
    format: OutputFormat,
    squared: bool,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let id = result.config().scenario;
    let tables = result.tables(squared);
    let mut written = Vec::new();
    match format {
        OutputFormat::Csv => {
            for t in &tables {
                let path = dir.join(format!("{}.csv", t.name));
                fs::write(&path, t.to_csv())?;
                written.push(path);
            }
            let path = dir.join(format!("{id}_summary.json"));
            fs::write(&path, pretty(&result.summary()))?;
            written.push(path);
        }
        OutputFormat::Json => {
            let tables: serde_json::Map<String, Value> = tables
                .iter()
                .map(|t| (t.name.clone(), t.to_json()))
                .collect();
            let doc = json!({ "summary": result.summary(), "tables": tables });
            let path = dir.join(format!("{id}.json"));
            fs::write(&path, pretty(&doc))?;
            written.push(path);
        }
    }
    Ok(written)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}
