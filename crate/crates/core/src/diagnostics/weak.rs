//! Weak-form (summation by parts) residuals of a recorded run.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::problems::{ConservationLaw, Grid1D};

type Field = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Smooth test function `phi(x, t)` with compact support.
#[derive(Clone)]
pub struct TestFunction {
    name: String,
    phi: Field,
    phi_t: Field,
    phi_x: Field,
    x_support: (f64, f64),
    t_support: (f64, f64),
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("x_support", &self.x_support)
            .field("t_support", &self.t_support)
            .finish()
    }
}

/// `exp(-1 / (1 - s^2))` on `|s| < 1` and its derivative.
fn mollifier(s: f64) -> (f64, f64) {
    if s.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let q = 1.0 - s * s;
    let v = (-1.0 / q).exp();
    (v, v * (-2.0 * s / (q * q)))
}

impl TestFunction {
    /// Closures for the value and both partial derivatives, supported in the given box.
    pub fn from_fn(
        name: impl Into<String>,
        x_support: (f64, f64),
        t_support: (f64, f64),
        phi: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        phi_t: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        phi_x: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            phi: Arc::new(phi),
            phi_t: Arc::new(phi_t),
            phi_x: Arc::new(phi_x),
            x_support,
            t_support,
        }
    }

    /// Product of mollifiers in `x` (centre `xc`, radius `rx`) and in `t`
    /// (centre 0, radius `rt`), so `phi(x, 0)` is the spatial profile.
    pub fn bump(xc: f64, rx: f64, rt: f64) -> Result<Self> {
        if !(rx > 0.0 && rt > 0.0 && xc.is_finite() && rx.is_finite() && rt.is_finite()) {
            return Err(Error::param("bump radii must be positive and finite"));
        }
        let phi = move |x: f64, t: f64| mollifier((x - xc) / rx).0 * mollifier(t / rt).0;
        let phi_t = move |x: f64, t: f64| mollifier((x - xc) / rx).0 * mollifier(t / rt).1 / rt;
        let phi_x = move |x: f64, t: f64| mollifier((x - xc) / rx).1 / rx * mollifier(t / rt).0;
        Ok(Self::from_fn(format!("bump(x={xc}, rx={rx}, rt={rt})"), (xc - rx, xc + rx), (-rt, rt), phi, phi_t, phi_x))
    }

    pub fn zero() -> Self {
        Self::from_fn("zero", (0.0, 0.0), (0.0, 0.0), |_, _| 0.0, |_, _| 0.0, |_, _| 0.0)
    }

    /// Centred bump covering most of the domain and 90% of the time horizon.
    pub fn default_for(domain: (f64, f64), t_end: f64) -> Result<Self> {
        let w = domain.1 - domain.0;
        Self::bump(domain.0 + 0.5 * w, 0.4 * w, 0.9 * t_end)
    }

    /// The test functions used by the weak-form checks.
    pub fn shipped(domain: (f64, f64), t_end: f64) -> Result<Vec<Self>> {
        let (a, w) = (domain.0, domain.1 - domain.0);
        Ok(vec![
            Self::default_for(domain, t_end)?,
            Self::bump(a + 0.3 * w, 0.15 * w, 0.5 * t_end)?,
            Self::bump(a + 0.7 * w, 0.2 * w, 0.75 * t_end)?,
        ])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        (self.phi)(x, t)
    }

    pub fn dt(&self, x: f64, t: f64) -> f64 {
        (self.phi_t)(x, t)
    }

    pub fn dx(&self, x: f64, t: f64) -> f64 {
        (self.phi_x)(x, t)
    }

    pub fn x_support(&self) -> (f64, f64) {
        self.x_support
    }

    pub fn t_support(&self) -> (f64, f64) {
        self.t_support
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakFormResidual {
    /// Discrete identity evaluated with the scheme's own interface transfers.
    pub discrete: f64,
    /// The same sum with the physical flux in place of the numerical one.
    pub continuous: f64,
    /// `dx * mean(dt) * sum |U| * max |phi|` over the recorded space-time grid.
    pub scale: f64,
}

/// Evaluates both weak-form sums of a run on the first component.
///
/// `states[n]` is the full state at `times[n]`; `flows[n]` holds the
/// `n + 1` interface transfers of step `n` (see the integrators).
pub fn weak_form_residual(
    grid: &Grid1D,
    law: &ConservationLaw,
    times: &[f64],
    states: &[Vec<f64>],
    flows: &[Vec<f64>],
    phi: &TestFunction,
) -> Result<WeakFormResidual> {
    let n = grid.len();
    let steps = times.len().saturating_sub(1);
    if steps == 0 || states.len() != times.len() || flows.len() != steps {
        return Err(Error::Unavailable("weak-form residual needs every state and interface transfer of the run"));
    }
    if flows.iter().any(|f| f.len() != n + 1) || states.iter().any(|s| s.len() < n) {
        return Err(Error::param("recorded fields do not match the grid"));
    }
    let (xs, ts) = (phi.x_support(), phi.t_support());
    let t_end = times[steps];
    let empty = xs.0 >= xs.1 || ts.0 >= ts.1;
    if !empty && (xs.0 < grid.a() || xs.1 > grid.b() || ts.1 > t_end || ts.0 > times[0]) {
        return Err(Error::param(format!(
            "test function support {xs:?} x {ts:?} leaves the run box [{}, {}] x [{}, {t_end}]",
            grid.a(),
            grid.b(),
            times[0]
        )));
    }
    let m = law.components();
    let dx = grid.dx();
    let centers = grid.centers();
    let periodic = grid.is_periodic();
    let sample = |t: f64| -> Vec<f64> { centers.iter().map(|&x| phi.value(x, t)).collect() };
    // phi at cell k, zero outside the grid unless periodic
    let at = |p: &[f64], k: isize| -> f64 {
        if periodic {
            p[k.rem_euclid(n as isize) as usize]
        } else if (0..n as isize).contains(&k) {
            p[k as usize]
        } else {
            0.0
        }
    };
    let faces = if periodic { 0..n } else { 0..n + 1 };
    let mut cell = vec![0.0; m];
    let mut fcell = vec![0.0; m];
    let physical = |state: &[f64], k: isize, cell: &mut Vec<f64>, out: &mut Vec<f64>| -> f64 {
        let k = grid.wrap(k);
        for c in 0..m {
            cell[c] = state[c * n + k];
        }
        law.flux(cell, out);
        out[0]
    };

    let mut phi_prev = sample(times[0]);
    let mut time_part = 0.0;
    let mut flux_part = 0.0;
    let mut cont_flux_part = 0.0;
    let initial: f64 = phi_prev.iter().zip(&states[0]).map(|(p, u)| p * u).sum::<f64>() * dx;
    let mut abs_u = states[0][..n].iter().map(|u| u.abs()).sum::<f64>();
    let mut max_phi = phi_prev.iter().fold(0.0f64, |a, p| a.max(p.abs()));
    for step in 0..steps {
        let dt = times[step + 1] - times[step];
        let state = &states[step];
        for k in faces.clone() {
            let dphi = at(&phi_prev, k as isize) - at(&phi_prev, k as isize - 1);
            if dphi == 0.0 {
                continue;
            }
            flux_part += dphi * flows[step][k];
            let fl = physical(state, k as isize - 1, &mut cell, &mut fcell);
            let fr = physical(state, k as isize, &mut cell, &mut fcell);
            cont_flux_part += dphi * dt * 0.5 * (fl + fr);
        }
        let phi_next = sample(times[step + 1]);
        let next = &states[step + 1];
        time_part += phi_next.iter().zip(&phi_prev).zip(next).map(|((a, b), u)| (a - b) * u).sum::<f64>();
        abs_u += next[..n].iter().map(|u| u.abs()).sum::<f64>();
        max_phi = phi_next.iter().fold(max_phi, |a, p| a.max(p.abs()));
        phi_prev = phi_next;
    }
    let discrete = (dx * time_part + dx * flux_part + initial).abs();
    let continuous = (dx * time_part + cont_flux_part + initial).abs();
    let scale = dx * (t_end - times[0]) / steps as f64 * abs_u * max_phi;
    Ok(WeakFormResidual { discrete, continuous, scale })
}
