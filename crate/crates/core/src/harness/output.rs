use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::convergence::ConvergenceTable;
use super::run::RunRecord;
use crate::error::{Error, Result};

pub const SERIES_HEADER: [&str; 11] =
    ["step", "time", "dt", "lambda", "tv", "tv_increase", "ttv_max", "delta_dev", "gamma_dev", "cons_defect", "min_state"];
pub const FIELD_HEADER: [&str; 4] = ["time", "x", "component", "value"];

#[derive(Serialize)]
struct SeriesRow {
    step: usize,
    time: f64,
    dt: f64,
    lambda: f64,
    tv: f64,
    tv_increase: f64,
    ttv_max: f64,
    delta_dev: f64,
    gamma_dev: f64,
    cons_defect: f64,
    min_state: f64,
}

#[derive(Serialize)]
struct FieldRow {
    time: f64,
    x: f64,
    component: usize,
    value: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPaths {
    pub dir: PathBuf,
    pub summary: PathBuf,
    pub series: PathBuf,
    pub config: PathBuf,
    pub field: Option<PathBuf>,
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let io = match e.into_kind() {
        csv::ErrorKind::Io(io) => io,
        other => std::io::Error::other(format!("{other:?}")),
    };
    Error::io(path, io)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::io(path, e.into()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes `summary.json`, `config.toml`, `series.csv` and, when requested
/// and retained, `field.csv` under `out_dir/<run_id>/`.
pub fn emit_outputs(record: &RunRecord, out_dir: &Path) -> Result<OutputPaths> {
    let dir = out_dir.join(&record.summary.run_id);
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let summary = dir.join("summary.json");
    write_json(&summary, &record.summary)?;
    let config = dir.join("config.toml");
    fs::write(&config, record.config.to_toml()).map_err(|e| Error::io(&config, e))?;

    let series = dir.join("series.csv");
    let mut w = csv::Writer::from_path(&series).map_err(|e| csv_error(&series, e))?;
    for (step, d) in record.series().iter().enumerate() {
        let (dt, lambda) = if step == 0 { (0.0, 0.0) } else { (record.dts[step - 1], record.lambdas[step - 1]) };
        let row = SeriesRow {
            step,
            time: record.times[step],
            dt,
            lambda,
            tv: d.tv,
            tv_increase: d.tv_increase,
            ttv_max: d.ttv_max,
            delta_dev: d.delta_dev,
            gamma_dev: d.gamma_dev,
            cons_defect: d.cons_defect,
            min_state: d.min_state,
        };
        w.serialize(row).map_err(|e| csv_error(&series, e))?;
    }
    w.flush().map_err(|e| Error::io(&series, e))?;

    let field = match (&record.fields, record.config.output.dump_fields) {
        (Some(fields), true) => {
            let path = dir.join("field.csv");
            let mut w = csv::Writer::from_path(&path).map_err(|e| csv_error(&path, e))?;
            let n = record.grid.len();
            let x = record.grid.centers();
            let every = record.config.output.field_every;
            let last = fields.len() - 1;
            for (level, state) in fields.iter().enumerate() {
                if level % every != 0 && level != last {
                    continue;
                }
                for c in 0..state.len() / n {
                    for i in 0..n {
                        let row = FieldRow { time: record.times[level], x: x[i], component: c, value: state[c * n + i] };
                        w.serialize(row).map_err(|e| csv_error(&path, e))?;
                    }
                }
            }
            w.flush().map_err(|e| Error::io(&path, e))?;
            Some(path)
        }
        _ => None,
    };
    Ok(OutputPaths { dir, summary, series, config, field })
}

/// Writes `convergence.csv` (`n,shock_location,shock_error,steps`) and
/// `convergence.json` under `out_dir/<study_id>/`.
pub fn emit_convergence(table: &ConvergenceTable, out_dir: &Path) -> Result<PathBuf> {
    let dir = out_dir.join(&table.study_id);
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let path = dir.join("convergence.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| csv_error(&path, e))?;
    w.write_record(["n", "shock_location", "shock_error", "steps"]).map_err(|e| csv_error(&path, e))?;
    let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
    for r in &table.rows {
        w.write_record([r.n.to_string(), opt(r.shock_location), opt(r.shock_error), r.steps.to_string()])
            .map_err(|e| csv_error(&path, e))?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    write_json(&dir.join("convergence.json"), table)?;
    Ok(dir)
}
