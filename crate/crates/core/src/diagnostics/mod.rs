//! Variation, weight, shock and conservation diagnostics over recorded runs.
//!
//! All functions act on one scalar field: for systems the caller passes the
//! first (positivity constrained) component.

mod weak;

pub use weak::{weak_form_residual, TestFunction, WeakFormResidual};

use crate::error::{Error, Result};
use crate::integrators::StageRecord;
use crate::problems::{Grid1D, Problem};

/// `sum_i |U_i - U_{i-1}|`, including the wrap term on periodic grids.
pub fn total_variation(state: &[f64], periodic: bool) -> f64 {
    let inner: f64 = state.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    match (periodic, state.first(), state.last()) {
        (true, Some(first), Some(last)) if state.len() > 1 => inner + (first - last).abs(),
        _ => inner,
    }
}

/// Per-cell sum of absolute successive differences of a time series of states.
pub fn total_time_variation(series: &[Vec<f64>]) -> Result<Vec<f64>> {
    if series.len() < 2 {
        return Err(Error::param("time variation needs at least two time levels"));
    }
    let mut acc = TimeVariation::new(&series[0]);
    for s in &series[1..] {
        acc.push(s);
    }
    Ok(acc.profile)
}

/// Running per-cell length of a path of states.
#[derive(Debug, Clone)]
pub struct TimeVariation {
    last: Vec<f64>,
    profile: Vec<f64>,
}

impl TimeVariation {
    pub fn new(start: &[f64]) -> Self {
        Self { last: start.to_vec(), profile: vec![0.0; start.len()] }
    }

    pub fn push(&mut self, next: &[f64]) {
        for ((p, l), v) in self.profile.iter_mut().zip(self.last.iter_mut()).zip(next) {
            *p += (v - *l).abs();
            *l = *v;
        }
    }

    pub fn profile(&self) -> &[f64] {
        &self.profile
    }

    pub fn max(&self) -> f64 {
        self.profile.iter().copied().fold(0.0, f64::max)
    }
}

/// Time variation along the stage path: per step the walk
/// `U^n -> U^(1) -> ... -> U^(s) -> U^{n+1}`.
#[derive(Debug, Clone)]
pub struct StageTimeVariation {
    inner: TimeVariation,
    cells: usize,
}

impl StageTimeVariation {
    pub fn new(start: &[f64]) -> Self {
        Self { inner: TimeVariation::new(start), cells: start.len() }
    }

    pub fn push_step(&mut self, record: &StageRecord, next: &[f64]) {
        for stage in &record.stages {
            self.inner.push(&stage[..self.cells]);
        }
        self.inner.push(next);
    }

    pub fn profile(&self) -> &[f64] {
        self.inner.profile()
    }

    pub fn max(&self) -> f64 {
        self.inner.max()
    }
}

/// Stage-path variation for a whole run, `records[n]` taking `states[n]` to `states[n + 1]`.
pub fn total_time_variation_rk(states: &[Vec<f64>], records: &[StageRecord]) -> Result<Vec<f64>> {
    if records.is_empty() || states.len() != records.len() + 1 {
        return Err(Error::Unavailable("stage records were not retained for every step"));
    }
    let cells = states[0].len();
    let mut acc = StageTimeVariation::new(&states[0]);
    for (record, next) in records.iter().zip(&states[1..]) {
        acc.push_step(record, &next[..cells]);
    }
    Ok(acc.profile().to_vec())
}

/// Cells within `radius` of an interface whose jump is at least half the largest jump.
pub fn shock_mask(state: &[f64], periodic: bool, radius: usize) -> Vec<bool> {
    let n = state.len();
    let mut mask = vec![false; n];
    let jumps: Vec<f64> = (0..n)
        .map(|i| if i + 1 < n { (state[i + 1] - state[i]).abs() } else if periodic { (state[0] - state[i]).abs() } else { 0.0 })
        .collect();
    let top = jumps.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return mask;
    }
    for (i, &j) in jumps.iter().enumerate() {
        if j < 0.5 * top {
            continue;
        }
        // interface i sits between cells i and i + 1; mark `radius` cells per side
        for k in 0..2 * radius {
            let cell = i as isize + 1 + k as isize - radius as isize;
            if periodic {
                mask[cell.rem_euclid(n as isize) as usize] = true;
            } else if (0..n as isize).contains(&cell) {
                mask[cell as usize] = true;
            }
        }
    }
    mask
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WeightDeviation {
    /// `max |delta - 1|` away from detected shocks.
    pub delta: f64,
    /// `max_k max |gamma^(k) - 1|` away from detected shocks.
    pub gamma: f64,
    pub delta_near_shock: f64,
    pub gamma_near_shock: f64,
}

impl WeightDeviation {
    pub fn delta_all(&self) -> f64 {
        self.delta.max(self.delta_near_shock)
    }

    pub fn gamma_all(&self) -> f64 {
        self.gamma.max(self.gamma_near_shock)
    }
}

/// Deviation of the Patankar weights from one, split by `near_shock`.
/// Explicit steps carry no weights and deviate by zero.
pub fn weight_deviation(record: &StageRecord, near_shock: &[bool]) -> WeightDeviation {
    let split = |w: &[f64]| {
        let (mut away, mut near) = (0.0f64, 0.0f64);
        for (i, v) in w.iter().enumerate() {
            let d = (v - 1.0).abs();
            if near_shock.get(i).copied().unwrap_or(false) {
                near = near.max(d);
            } else {
                away = away.max(d);
            }
        }
        (away, near)
    };
    let (delta, delta_near_shock) = split(&record.final_weights);
    let (mut gamma, mut gamma_near_shock) = (0.0f64, 0.0f64);
    for w in &record.stage_weights {
        let (a, n) = split(w);
        gamma = gamma.max(a);
        gamma_near_shock = gamma_near_shock.max(n);
    }
    WeightDeviation { delta, gamma, delta_near_shock, gamma_near_shock }
}

/// Per-cell weight deviation profile `|delta_i - 1|`.
pub fn delta_profile(record: &StageRecord) -> Vec<f64> {
    record.final_weights.iter().map(|w| (w - 1.0).abs()).collect()
}

/// Interface position with the largest jump `|U_{i+1} - U_i|`, optionally
/// restricted to interfaces inside `window`. Ties go to the smallest index.
pub fn shock_location(state: &[f64], grid: &Grid1D, window: Option<(f64, f64)>) -> Result<f64> {
    let n = state.len();
    if n != grid.len() {
        return Err(Error::param(format!("state has {n} cells, grid has {}", grid.len())));
    }
    let inside = |x: f64| window.is_none_or(|(lo, hi)| x >= lo && x <= hi);
    let mut best: Option<(f64, f64)> = None;
    let last = if grid.is_periodic() { n } else { n - 1 };
    for i in 0..last {
        let x = grid.interface(i);
        if !inside(x) {
            continue;
        }
        let jump = (state[(i + 1) % n] - state[i]).abs();
        if best.is_none_or(|(b, _)| jump > b) {
            best = Some((jump, x));
        }
    }
    match best {
        Some((jump, x)) if jump > 0.0 => Ok(x),
        _ => Err(Error::NoShock),
    }
}

/// Signed largest per-step increase of a total-variation series; `None` for fewer than two entries.
pub fn tvd_violation(tv: &[f64]) -> Option<f64> {
    tv.windows(2).map(|w| w[1] - w[0]).reduce(f64::max)
}

pub fn mass(state: &[f64]) -> f64 {
    state.iter().sum()
}

/// Largest per-step change of total mass.
pub fn conservation_defect(masses: &[f64]) -> f64 {
    masses.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max)
}

/// Time variation per cell of the exact solution sampled at cell centres and the given times.
pub fn exact_ttv_profile(problem: &Problem, grid: &Grid1D, times: &[f64]) -> Option<Vec<f64>> {
    let sample = |t: f64| -> Option<Vec<f64>> {
        grid.centers().into_iter().map(|x| problem.exact(x, t).map(|v| v[0])).collect()
    };
    let mut acc = TimeVariation::new(&sample(*times.first()?)?);
    for &t in &times[1..] {
        acc.push(&sample(t)?);
    }
    Some(acc.profile().to_vec())
}

/// Per-step quantities reported in the time series.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepDiagnostics {
    pub tv: f64,
    pub tv_increase: f64,
    pub ttv_max: f64,
    pub delta_dev: f64,
    pub gamma_dev: f64,
    pub cons_defect: f64,
    pub min_state: f64,
}

/// Incremental diagnostics for a running simulation.
#[derive(Debug, Clone)]
pub struct DiagnosticsSeries {
    cells: usize,
    periodic: bool,
    exclusion_radius: usize,
    ttv: TimeVariation,
    ttvrk: StageTimeVariation,
    last_tv: f64,
    last_mass: f64,
    /// Entry 0 describes the initial state.
    pub steps: Vec<StepDiagnostics>,
    pub weights: WeightDeviation,
}

impl DiagnosticsSeries {
    /// `state` holds every component; the first `cells` entries are tracked.
    pub fn new(state: &[f64], cells: usize, periodic: bool, exclusion_radius: usize) -> Self {
        let u = &state[..cells];
        let tv = total_variation(u, periodic);
        let first = StepDiagnostics {
            tv,
            min_state: u.iter().copied().fold(f64::INFINITY, f64::min),
            ..Default::default()
        };
        Self {
            cells,
            periodic,
            exclusion_radius,
            ttv: TimeVariation::new(u),
            ttvrk: StageTimeVariation::new(u),
            last_tv: tv,
            last_mass: mass(u),
            steps: vec![first],
            weights: WeightDeviation::default(),
        }
    }

    pub fn push(&mut self, record: &StageRecord, state: &[f64]) -> StepDiagnostics {
        let u = &state[..self.cells];
        let tv = total_variation(u, self.periodic);
        self.ttv.push(u);
        self.ttvrk.push_step(record, u);
        let mask = shock_mask(u, self.periodic, self.exclusion_radius);
        let w = weight_deviation(record, &mask);
        self.weights = WeightDeviation {
            delta: self.weights.delta.max(w.delta),
            gamma: self.weights.gamma.max(w.gamma),
            delta_near_shock: self.weights.delta_near_shock.max(w.delta_near_shock),
            gamma_near_shock: self.weights.gamma_near_shock.max(w.gamma_near_shock),
        };
        let m = mass(u);
        let d = StepDiagnostics {
            tv,
            tv_increase: tv - self.last_tv,
            ttv_max: self.ttv.max(),
            delta_dev: w.delta_all(),
            gamma_dev: w.gamma_all(),
            cons_defect: (m - self.last_mass).abs(),
            min_state: u.iter().copied().fold(f64::INFINITY, f64::min),
        };
        self.last_tv = tv;
        self.last_mass = m;
        self.steps.push(d);
        d
    }

    pub fn tv_series(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.tv).collect()
    }

    pub fn tvd_violation(&self) -> Option<f64> {
        tvd_violation(&self.tv_series())
    }

    pub fn conservation_defect(&self) -> f64 {
        self.steps.iter().map(|s| s.cons_defect).fold(0.0, f64::max)
    }

    pub fn ttv_profile(&self) -> &[f64] {
        self.ttv.profile()
    }

    pub fn ttv_max(&self) -> f64 {
        self.ttv.max()
    }

    pub fn ttvrk_profile(&self) -> &[f64] {
        self.ttvrk.profile()
    }

    pub fn ttvrk_max(&self) -> f64 {
        self.ttvrk.max()
    }

    pub fn min_state(&self) -> f64 {
        self.steps.iter().map(|s| s.min_state).fold(f64::INFINITY, f64::min)
    }
}
