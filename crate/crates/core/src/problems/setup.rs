use serde::{Deserialize, Serialize};

use super::grid::{Boundary, Grid1D};
use super::law::ConservationLaw;
use crate::error::{Error, Result};

/// Problem identifiers accepted in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemId {
    #[serde(rename = "burgers")]
    Burgers,
    #[serde(rename = "buckley")]
    Buckley,
    #[serde(rename = "sw_dam_break")]
    SwDamBreak,
    #[serde(rename = "burgers_smooth")]
    BurgersSmooth,
}

impl ProblemId {
    pub const ALL: [ProblemId; 4] = [
        ProblemId::Burgers,
        ProblemId::Buckley,
        ProblemId::SwDamBreak,
        ProblemId::BurgersSmooth,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemId::Burgers => "burgers",
            ProblemId::Buckley => "buckley",
            ProblemId::SwDamBreak => "sw_dam_break",
            ProblemId::BurgersSmooth => "burgers_smooth",
        }
    }
}

impl std::fmt::Display for ProblemId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        ProblemId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown problem '{s}'")))
    }
}

/// Optional overrides of the problem defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemParams {
    /// Inner state of the double Riemann problem, or left depth of the dam break.
    pub u1: Option<f64>,
    /// Outer state of the double Riemann problem, or right depth of the dam break.
    pub u2: Option<f64>,
    pub a: Option<f64>,
    pub g_grav: Option<f64>,
    pub buckley_standard: Option<bool>,
    pub mean: Option<f64>,
    pub amplitude: Option<f64>,
}

/// Scalar double Riemann problem with a convex flux on `[u2, u1]`:
/// a rarefaction leaves `x_left` and a shock leaves `x_right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannSetup {
    pub u1: f64,
    pub u2: f64,
    pub x_left: f64,
    pub x_right: f64,
}

/// Dam break on a wet bed: depth `h_left` for `x <= x_jump`, `h_right` beyond, at rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DamBreak {
    pub h_left: f64,
    pub h_right: f64,
    pub x_jump: f64,
    pub g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialData {
    DoubleRiemann(RiemannSetup),
    DamBreak(DamBreak),
    /// `mean + amplitude * sin(2 pi (x - a) / (b - a))`
    Sine { mean: f64, amplitude: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub id: ProblemId,
    pub law: ConservationLaw,
    pub domain: (f64, f64),
    pub boundary: Boundary,
    pub initial: InitialData,
}

impl Problem {
    pub fn new(id: ProblemId, params: &ProblemParams) -> Result<Self> {
        let problem = match id {
            ProblemId::Burgers => {
                let setup = RiemannSetup {
                    u1: params.u1.unwrap_or(2.0),
                    u2: params.u2.unwrap_or(1e-13),
                    x_left: -0.5,
                    x_right: 0.5,
                };
                Problem {
                    id,
                    law: ConservationLaw::burgers(),
                    domain: (-1.0, 1.0),
                    boundary: Boundary::Periodic,
                    initial: InitialData::DoubleRiemann(setup),
                }
            }
            ProblemId::Buckley => {
                let law = ConservationLaw::buckley_leverett_variant(
                    params.a.unwrap_or(0.5),
                    params.buckley_standard.unwrap_or(false),
                )?;
                let setup = RiemannSetup {
                    u1: params.u1.unwrap_or(0.5),
                    u2: params.u2.unwrap_or(1e-30),
                    x_left: -0.5,
                    x_right: 0.5,
                };
                Problem {
                    id,
                    law,
                    domain: (-1.0, 1.0),
                    boundary: Boundary::Periodic,
                    initial: InitialData::DoubleRiemann(setup),
                }
            }
            ProblemId::SwDamBreak => {
                let g = params.g_grav.unwrap_or(9.8);
                let law = ConservationLaw::shallow_water(g)?;
                Problem {
                    id,
                    law,
                    domain: (0.0, 10.0),
                    boundary: Boundary::Outflow,
                    initial: InitialData::DamBreak(DamBreak {
                        h_left: params.u1.unwrap_or(2.5),
                        h_right: params.u2.unwrap_or(0.025),
                        x_jump: 5.0,
                        g,
                    }),
                }
            }
            ProblemId::BurgersSmooth => Problem {
                id,
                law: ConservationLaw::burgers(),
                domain: (-1.0, 1.0),
                boundary: Boundary::Periodic,
                initial: InitialData::Sine {
                    mean: params.mean.unwrap_or(1.5),
                    amplitude: params.amplitude.unwrap_or(1.0),
                },
            },
        };
        problem.validate()?;
        Ok(problem)
    }

    fn validate(&self) -> Result<()> {
        match self.initial {
            InitialData::DoubleRiemann(s) => {
                if !(s.u2 > 0.0 && s.u1 > s.u2 && s.u1.is_finite()) {
                    return Err(Error::param(format!(
                        "double Riemann states need u1 > u2 > 0, got u1 = {}, u2 = {}",
                        s.u1, s.u2
                    )));
                }
            }
            InitialData::DamBreak(d) => {
                if !(d.h_left > 0.0 && d.h_right > 0.0 && d.h_left.is_finite() && d.h_right.is_finite()) {
                    return Err(Error::param("dam break depths must be positive"));
                }
            }
            InitialData::Sine { mean, amplitude } => {
                if !(mean - amplitude.abs() > 0.0 && mean.is_finite() && amplitude.is_finite()) {
                    return Err(Error::param("sine data must stay positive (mean > |amplitude|)"));
                }
            }
        }
        Ok(())
    }

    pub fn grid(&self, n: usize) -> Result<Grid1D> {
        Grid1D::new(self.domain.0, self.domain.1, n, self.boundary)
    }

    pub fn components(&self) -> usize {
        self.law.components()
    }

    /// Initial data at `x`.
    pub fn initial_value(&self, x: f64) -> Vec<f64> {
        match self.initial {
            InitialData::DoubleRiemann(s) => {
                vec![if x > s.x_left && x < s.x_right { s.u1 } else { s.u2 }]
            }
            InitialData::DamBreak(d) => {
                vec![if x <= d.x_jump { d.h_left } else { d.h_right }, 0.0]
            }
            InitialData::Sine { mean, amplitude } => {
                let (a, b) = self.domain;
                vec![mean + amplitude * (2.0 * std::f64::consts::PI * (x - a) / (b - a)).sin()]
            }
        }
    }

    /// Initial data sampled at cell centers, component-major.
    pub fn initial_state(&self, grid: &Grid1D) -> Vec<f64> {
        let (m, n) = (self.components(), grid.len());
        let mut state = vec![0.0; m * n];
        for i in 0..n {
            for (c, v) in self.initial_value(grid.center(i)).into_iter().enumerate() {
                state[c * n + i] = v;
            }
        }
        state
    }

    /// Exact solution while it is known in closed form, `None` afterwards.
    pub fn exact(&self, x: f64, t: f64) -> Option<Vec<f64>> {
        match self.initial {
            InitialData::DoubleRiemann(s) => {
                let exact = ScalarDoubleRiemann::new(self.law, s, self.domain, self.boundary).ok()?;
                exact.value(x, t).ok().map(|v| vec![v])
            }
            InitialData::DamBreak(d) => {
                let exact = DamBreakSolution::new(d).ok()?;
                if t < 0.0 {
                    return None;
                }
                let (h, hu) = exact.value(x, t);
                Some(vec![h, hu])
            }
            InitialData::Sine { mean, amplitude } => {
                smooth_burgers(mean, amplitude, self.domain, x, t).map(|v| vec![v])
            }
        }
    }

    /// Exact shock position at time `t`, if the solution has one.
    pub fn exact_shock_location(&self, t: f64) -> Option<f64> {
        match self.initial {
            InitialData::DoubleRiemann(s) => {
                let exact = ScalarDoubleRiemann::new(self.law, s, self.domain, self.boundary).ok()?;
                exact.valid_at(t).then(|| exact.shock_position(t))
            }
            InitialData::DamBreak(d) => DamBreakSolution::new(d).ok().map(|e| d.x_jump + e.shock_speed * t),
            InitialData::Sine { .. } => None,
        }
    }

    /// Search window for the numerical shock that excludes the rarefaction.
    pub fn shock_window(&self, t: f64) -> Option<(f64, f64)> {
        let b = self.domain.1;
        match self.initial {
            InitialData::DoubleRiemann(s) => {
                let exact = ScalarDoubleRiemann::new(self.law, s, self.domain, self.boundary).ok()?;
                if !exact.valid_at(t) {
                    return None;
                }
                let head = s.x_left + exact.head_speed * t;
                Some((0.5 * (head + exact.shock_position(t)), b))
            }
            InitialData::DamBreak(d) => {
                let e = DamBreakSolution::new(d).ok()?;
                let tail = d.x_jump + (e.u_mid - e.c_mid) * t;
                Some((0.5 * (tail + d.x_jump + e.shock_speed * t), b))
            }
            InitialData::Sine { .. } => None,
        }
    }
}

/// Closed-form solution of the scalar double Riemann problem before the
/// rarefaction head reaches the shock.
#[derive(Debug, Clone, Copy)]
pub struct ScalarDoubleRiemann {
    law: ConservationLaw,
    setup: RiemannSetup,
    domain: (f64, f64),
    boundary: Boundary,
    pub shock_speed: f64,
    pub tail_speed: f64,
    pub head_speed: f64,
}

impl ScalarDoubleRiemann {
    pub fn new(law: ConservationLaw, setup: RiemannSetup, domain: (f64, f64), boundary: Boundary) -> Result<Self> {
        if law.components() != 1 {
            return Err(Error::param("double Riemann solution needs a scalar law"));
        }
        let RiemannSetup { u1, u2, .. } = setup;
        if !(u1 > u2 && u2 >= 0.0) {
            return Err(Error::param("double Riemann solution needs u1 > u2 >= 0"));
        }
        // the fan is a single rarefaction only if f' increases on [u2, u1]
        let samples = 256;
        let mut prev = law.flux_derivative(u2);
        for k in 1..=samples {
            let u = u2 + (u1 - u2) * k as f64 / samples as f64;
            let d = law.flux_derivative(u);
            if d < prev - 1e-12 * prev.abs().max(1.0) {
                return Err(Error::param("flux is not convex between the Riemann states"));
            }
            prev = d;
        }
        let shock_speed = (law.flux_scalar(u1) - law.flux_scalar(u2)) / (u1 - u2);
        Ok(Self {
            law,
            setup,
            domain,
            boundary,
            shock_speed,
            tail_speed: law.flux_derivative(u2),
            head_speed: law.flux_derivative(u1),
        })
    }

    /// Time at which the rarefaction head catches the shock, or the wrapped
    /// shock reaches the rarefaction tail.
    pub fn interaction_time(&self) -> f64 {
        let s = &self.setup;
        let catch_up = if self.head_speed > self.shock_speed {
            (s.x_right - s.x_left) / (self.head_speed - self.shock_speed)
        } else {
            f64::INFINITY
        };
        let wrap = match self.boundary {
            Boundary::Periodic if self.shock_speed > self.tail_speed => {
                let gap = (self.domain.1 - self.domain.0) - (s.x_right - s.x_left);
                gap / (self.shock_speed - self.tail_speed)
            }
            _ => f64::INFINITY,
        };
        catch_up.min(wrap)
    }

    pub fn valid_at(&self, t: f64) -> bool {
        t >= 0.0 && t < self.interaction_time()
    }

    /// Shock position, reduced into the domain for periodic problems.
    pub fn shock_position(&self, t: f64) -> f64 {
        let x = self.setup.x_right + self.shock_speed * t;
        match self.boundary {
            Boundary::Periodic => {
                let (a, b) = self.domain;
                a + (x - a).rem_euclid(b - a)
            }
            Boundary::Outflow => x,
        }
    }

    pub fn value(&self, x: f64, t: f64) -> Result<f64> {
        let RiemannSetup { u1, u2, x_left, x_right } = self.setup;
        if t < 0.0 {
            return Err(Error::param(format!("negative time {t}")));
        }
        if !self.valid_at(t) {
            return Err(Error::param(format!("waves interact before t = {t}")));
        }
        let width = self.domain.1 - self.domain.0;
        // coordinate measured from x_left, unwrapped for periodic domains
        let z = match self.boundary {
            Boundary::Periodic => x_left + (x - x_left).rem_euclid(width),
            Boundary::Outflow => x,
        };
        if t == 0.0 {
            return Ok(if z > x_left && z < x_right { u1 } else { u2 });
        }
        let shock = x_right + self.shock_speed * t;
        let tail = x_left + self.tail_speed * t;
        let head = x_left + self.head_speed * t;
        Ok(if z < tail || z >= shock {
            u2
        } else if z < head {
            self.invert_speed((z - x_left) / t)
        } else {
            u1
        })
    }

    fn invert_speed(&self, speed: f64) -> f64 {
        let (mut lo, mut hi) = (self.setup.u2, self.setup.u1);
        if let ConservationLaw::Burgers = self.law {
            return speed.clamp(lo, hi);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.law.flux_derivative(mid) < speed {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi.abs() {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Exact Burgers solution for the double Riemann problem on `[-1, 1]` with
/// jumps at `-0.5` and `0.5`, inner state `u1` and outer state `u2`.
pub fn exact_burgers_double_rp(u1: f64, u2: f64, t: f64, x: f64) -> Result<f64> {
    if !(u1 > u2 && u2 > 0.0) {
        return Err(Error::param("expected u1 > u2 > 0"));
    }
    let setup = RiemannSetup { u1, u2, x_left: -0.5, x_right: 0.5 };
    ScalarDoubleRiemann::new(ConservationLaw::Burgers, setup, (-1.0, 1.0), Boundary::Periodic)?.value(x, t)
}

/// Wet-bed dam break: left rarefaction, right shock.
#[derive(Debug, Clone, Copy)]
pub struct DamBreakSolution {
    pub setup: DamBreak,
    pub h_mid: f64,
    pub u_mid: f64,
    pub c_mid: f64,
    pub shock_speed: f64,
}

impl DamBreakSolution {
    pub fn new(setup: DamBreak) -> Result<Self> {
        let DamBreak { h_left, h_right, g, .. } = setup;
        if !(h_left > h_right && h_right > 0.0) {
            return Err(Error::param("dam break needs h_left > h_right > 0"));
        }
        let c_left = (g * h_left).sqrt();
        // velocity behind the rarefaction minus velocity behind the shock
        let mismatch = |h: f64| {
            let u_rare = 2.0 * (c_left - (g * h).sqrt());
            let u_shock = (h - h_right) * (0.5 * g * (1.0 / h + 1.0 / h_right)).sqrt();
            u_rare - u_shock
        };
        let (mut lo, mut hi) = (h_right, h_left);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mismatch(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let h_mid = 0.5 * (lo + hi);
        let u_mid = 2.0 * (c_left - (g * h_mid).sqrt());
        Ok(Self {
            setup,
            h_mid,
            u_mid,
            c_mid: (g * h_mid).sqrt(),
            shock_speed: h_mid * u_mid / (h_mid - h_right),
        })
    }

    /// `(h, hu)` at `(x, t)`.
    pub fn value(&self, x: f64, t: f64) -> (f64, f64) {
        let DamBreak { h_left, h_right, x_jump, g } = self.setup;
        if t <= 0.0 {
            return if x <= x_jump { (h_left, 0.0) } else { (h_right, 0.0) };
        }
        let c_left = (g * h_left).sqrt();
        let xi = (x - x_jump) / t;
        if xi <= -c_left {
            (h_left, 0.0)
        } else if xi <= self.u_mid - self.c_mid {
            let c = (2.0 * c_left - xi) / 3.0;
            let u = 2.0 * (c_left + xi) / 3.0;
            let h = c * c / g;
            (h, h * u)
        } else if xi < self.shock_speed {
            (self.h_mid, self.h_mid * self.u_mid)
        } else {
            (h_right, 0.0)
        }
    }
}

/// Characteristics solution of Burgers with sine data, valid before breaking.
fn smooth_burgers(mean: f64, amplitude: f64, domain: (f64, f64), x: f64, t: f64) -> Option<f64> {
    let (a, b) = domain;
    let k = 2.0 * std::f64::consts::PI / (b - a);
    let u0 = |xi: f64| mean + amplitude * (k * (xi - a)).sin();
    if t < 0.0 || t * k * amplitude.abs() >= 1.0 {
        return None;
    }
    // foot of the characteristic: xi + u0(xi) t = x, increasing in xi
    let (umin, umax) = (mean - amplitude.abs(), mean + amplitude.abs());
    let (mut lo, mut hi) = (x - umax * t, x - umin * t);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid + u0(mid) * t < x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(u0(0.5 * (lo + hi)))
}
