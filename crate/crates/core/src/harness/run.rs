use std::time::Instant;

use serde::Serialize;

use super::config::{serde_plain, RunConfig};
use crate::diagnostics::{
    exact_ttv_profile, shock_location, weak_form_residual, DiagnosticsSeries, StepDiagnostics, TestFunction,
    WeakFormResidual,
};
use crate::error::{Error, Result};
use crate::integrators::{Integrator, StageRecord, StepOptions};
use crate::problems::{select_timestep, Grid1D, Problem};
use crate::space::{NumericalFlux, Semidiscretization};

/// States beyond this magnitude end the run as diverged.
pub const DIVERGENCE_BOUND: f64 = 1e100;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum RunOutcome {
    Completed,
    /// Stopped at `time` because the state became non-finite or exceeded [`DIVERGENCE_BOUND`].
    Diverged { step: usize, time: f64 },
}

/// Scalar results of one run, in output order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub run_id: String,
    pub config_hash: String,
    pub problem: String,
    pub flux: String,
    pub integrator: String,
    pub n: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub steps: usize,
    pub outcome: RunOutcome,
    pub shock_location: Option<f64>,
    pub exact_shock_location: Option<f64>,
    pub shock_error: Option<f64>,
    pub tvd_violation_max: Option<f64>,
    pub ttv_max: f64,
    pub ttvrk_max: f64,
    pub exact_ttv_max: Option<f64>,
    pub delta_dev_max: f64,
    pub gamma_dev_max: f64,
    pub delta_dev_near_shock: f64,
    pub gamma_dev_near_shock: f64,
    pub conservation_defect: f64,
    pub initial_mass: f64,
    pub min_state: f64,
    pub weakform_discrete: Option<f64>,
    pub weakform_continuous: Option<f64>,
    pub weakform_scale: Option<f64>,
    pub clamped_denominators: usize,
    pub wall_clock_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    /// Snapshot with a single cell count and no sweep.
    pub config: RunConfig,
    pub problem: Problem,
    pub grid: Grid1D,
    /// `times[0] = 0`, `times[steps] = t_end` for completed runs.
    pub times: Vec<f64>,
    pub dts: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub diagnostics: DiagnosticsSeries,
    /// Full state at every time level, when retained.
    pub fields: Option<Vec<Vec<f64>>>,
    /// Interface transfers of every step, retained with the fields.
    pub flows: Option<Vec<Vec<f64>>>,
    pub stages: Option<Vec<StageRecord>>,
    pub final_state: Vec<f64>,
    pub exact_ttv: Option<Vec<f64>>,
    pub weak_form: Option<WeakFormResidual>,
    pub summary: RunSummary,
}

impl RunRecord {
    pub fn steps(&self) -> usize {
        self.dts.len()
    }

    pub fn series(&self) -> &[StepDiagnostics] {
        &self.diagnostics.steps
    }

    /// Weak-form residuals for another test function.
    pub fn weak_form_with(&self, phi: &TestFunction) -> Result<WeakFormResidual> {
        let (Some(fields), Some(flows)) = (&self.fields, &self.flows) else {
            return Err(Error::Unavailable("fields were not retained"));
        };
        weak_form_residual(&self.grid, &self.problem.law, &self.times, fields, flows, phi)
    }
}

fn has_diverged(state: &[f64]) -> bool {
    state.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE_BOUND)
}

/// Runs one configuration: a single cell count and no sweep section.
pub fn run(config: &RunConfig) -> Result<RunRecord> {
    if config.mesh.n.len() != 1 || config.sweep.is_some() {
        return Err(Error::Config("run needs a single cell count and no sweep; expand the config first".into()));
    }
    config.validate()?;
    let started = Instant::now();
    let n = config.mesh.n[0];
    let problem = config.build_problem()?;
    let grid = problem.grid(n)?;
    let law = problem.law;
    let semi = Semidiscretization::new(NumericalFlux::new(config.scheme.flux, law)?, grid.clone())?;
    let integrator = Integrator::new(config.scheme.integrator)?;
    let keep_fields = config.output.keep_fields;
    let opts = StepOptions { frozen_weights: config.scheme.frozen_weights, record_flows: keep_fields };
    let t_end = config.time.t_end;

    let mut u = problem.initial_state(&grid);
    let mut diagnostics = DiagnosticsSeries::new(&u, n, grid.is_periodic(), config.diagnostics.exclusion_radius);
    let initial_mass: f64 = u[..n].iter().sum();
    let mut times = vec![0.0];
    let (mut dts, mut lambdas) = (Vec::new(), Vec::new());
    let mut fields = keep_fields.then(|| vec![u.clone()]);
    let mut flows = keep_fields.then(Vec::new);
    let mut stages = config.output.keep_stages.then(Vec::new);
    let mut clamped = 0;
    let mut outcome = RunOutcome::Completed;
    let mut t = 0.0;
    while t < t_end {
        let step = dts.len();
        if step >= config.time.max_steps {
            return Err(Error::Config(format!("time.max_steps = {} reached at t = {t}", config.time.max_steps)));
        }
        let wrap = |e: Error| Error::Step { step, time: t, snapshot: u.clone(), source: Box::new(e) };
        let remaining = t_end - t;
        let dt = select_timestep(config.time.cfl, &law, &grid, &u, remaining).map_err(wrap)?;
        let out = integrator.step(&semi, &u, dt, opts).map_err(wrap)?;
        t = if dt >= remaining { t_end } else { t + dt };
        clamped += out.record.clamped_denominators;
        diagnostics.push(&out.record, &out.state);
        times.push(t);
        dts.push(dt);
        lambdas.push(dt / grid.dx());
        if let (Some(f), Some(fl)) = (flows.as_mut(), out.flows) {
            f.push(fl);
        }
        if let Some(s) = stages.as_mut() {
            s.push(out.record);
        }
        u = out.state;
        if let Some(f) = fields.as_mut() {
            f.push(u.clone());
        }
        if has_diverged(&u) {
            outcome = RunOutcome::Diverged { step: dts.len(), time: t };
            break;
        }
    }

    let completed = outcome == RunOutcome::Completed;
    let window = config.diagnostics.shock_window.map(|[a, b]| (a, b)).or_else(|| problem.shock_window(t_end));
    let shock = if completed { shock_location(&u[..n], &grid, window).ok() } else { None };
    let exact_shock = problem.exact_shock_location(t_end);
    let shock_error = match (shock, exact_shock) {
        (Some(s), Some(e)) => {
            let d = (s - e).abs();
            // on a periodic domain both ends of the box are the same interface
            Some(if grid.is_periodic() { d.min(grid.width() - d) } else { d })
        }
        _ => None,
    };
    let exact_ttv = if config.diagnostics.exact_ttv { exact_ttv_profile(&problem, &grid, &times) } else { None };
    let weak_form = if config.diagnostics.weak_form && completed {
        let phi = TestFunction::default_for(problem.domain, t_end)?;
        let (Some(f), Some(fl)) = (&fields, &flows) else { unreachable!("validated: weak form keeps fields") };
        Some(weak_form_residual(&grid, &law, &times, f, fl, &phi)?)
    } else {
        None
    };
    let w = diagnostics.weights;
    let summary = RunSummary {
        run_id: config.run_id(),
        config_hash: config.hash(),
        problem: config.problem.id.as_str().to_string(),
        flux: serde_plain(&config.scheme.flux),
        integrator: config.scheme.integrator.to_string(),
        n,
        cfl: config.time.cfl,
        t_end,
        steps: dts.len(),
        outcome,
        shock_location: shock,
        exact_shock_location: exact_shock,
        shock_error,
        tvd_violation_max: diagnostics.tvd_violation(),
        ttv_max: diagnostics.ttv_max(),
        ttvrk_max: diagnostics.ttvrk_max(),
        exact_ttv_max: exact_ttv.as_ref().map(|p| p.iter().copied().fold(0.0, f64::max)),
        delta_dev_max: w.delta,
        gamma_dev_max: w.gamma,
        delta_dev_near_shock: w.delta_near_shock,
        gamma_dev_near_shock: w.gamma_near_shock,
        conservation_defect: diagnostics.conservation_defect(),
        initial_mass,
        min_state: diagnostics.min_state(),
        weakform_discrete: weak_form.map(|r| r.discrete),
        weakform_continuous: weak_form.map(|r| r.continuous),
        weakform_scale: weak_form.map(|r| r.scale),
        clamped_denominators: clamped,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    Ok(RunRecord {
        config: config.clone(),
        problem,
        grid,
        times,
        dts,
        lambdas,
        diagnostics,
        fields,
        flows,
        stages,
        final_state: u,
        exact_ttv,
        weak_form,
        summary,
    })
}

/// Runs `jobs` concurrently, one thread each, returning results in input order.
pub fn run_parallel(jobs: &[RunConfig]) -> Vec<Result<RunRecord>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = jobs.iter().map(|c| scope.spawn(move || run(c))).collect();
        handles.into_iter().map(|h| h.join().expect("run thread panicked")).collect()
    })
}

/// Every sweep combination at every cell count of `config`.
pub fn run_all(config: &RunConfig) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let jobs: Vec<RunConfig> =
        config.expand().iter().flat_map(|c| c.mesh.n.iter().map(move |&n| c.with_n(n))).collect();
    run_parallel(&jobs).into_iter().collect()
}
