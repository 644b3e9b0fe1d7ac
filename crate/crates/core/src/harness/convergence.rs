use serde::Serialize;

use super::config::RunConfig;
use super::run::{run_parallel, RunOutcome, RunRecord};
use crate::error::Result;

/// Least-squares slope of `y` against `x`; `None` for fewer than two distinct `x`.
pub fn least_squares_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let k = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / k, y.iter().sum::<f64>() / k);
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Slope of `log(error)` against `log(n)`; `None` when any error is zero or missing.
pub fn log_log_slope(ns: &[usize], errors: &[Option<f64>]) -> Option<f64> {
    let errors: Option<Vec<f64>> = errors.iter().map(|e| e.filter(|v| *v > 0.0 && v.is_finite())).collect();
    let x: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let y: Vec<f64> = errors?.iter().map(|e| e.ln()).collect();
    least_squares_slope(&x, &y)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub shock_location: Option<f64>,
    pub shock_error: Option<f64>,
    pub steps: usize,
    pub outcome: RunOutcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    /// Run id of the coarsest run with the cell count removed.
    pub study_id: String,
    pub integrator: String,
    pub cfl: f64,
    pub rows: Vec<ConvergenceRow>,
    pub slope: Option<f64>,
    #[serde(skip)]
    pub records: Vec<RunRecord>,
}

/// Shock-location error over the cell counts of `config`, one table per sweep combination.
/// The runs of each table execute concurrently.
pub fn convergence_study(config: &RunConfig) -> Result<Vec<ConvergenceTable>> {
    config.validate()?;
    let mut tables = Vec::new();
    for base in config.expand() {
        let jobs: Vec<RunConfig> = base.mesh.n.iter().map(|&n| base.with_n(n)).collect();
        let records: Vec<RunRecord> = run_parallel(&jobs).into_iter().collect::<Result<_>>()?;
        let rows: Vec<ConvergenceRow> = records
            .iter()
            .map(|r| ConvergenceRow {
                n: r.summary.n,
                shock_location: r.summary.shock_location,
                shock_error: r.summary.shock_error,
                steps: r.summary.steps,
                outcome: r.summary.outcome.clone(),
            })
            .collect();
        let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
        let errors: Vec<Option<f64>> = rows.iter().map(|r| r.shock_error).collect();
        let id = jobs[0].run_id();
        let study_id = id.rsplit_once("_n").map_or(id.clone(), |(head, _)| head.to_string());
        tables.push(ConvergenceTable {
            study_id,
            integrator: base.scheme.integrator.to_string(),
            cfl: base.time.cfl,
            slope: log_log_slope(&ns, &errors),
            rows,
            records,
        });
    }
    Ok(tables)
}
