use crate::error::{Error, Result};

/// Water depth below which velocities are computed from this value instead.
pub const DEPTH_FLOOR: f64 = 1e-14;

const BL_SAMPLES: usize = 64;

/// Physical flux of a 1-D conservation law `u_t + f(u)_x = 0`.
///
/// States are passed as slices of length [`ConservationLaw::components`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConservationLaw {
    Burgers,
    /// `f(u) = u^2 / (u^2 + a(1 - u^2))`, or `u^2 / (u^2 + a(1 - u)^2)` when `standard`.
    BuckleyLeverett { a: f64, standard: bool },
    /// Unknowns `(h, hu)`.
    ShallowWater { g: f64 },
}

impl ConservationLaw {
    pub fn burgers() -> Self {
        ConservationLaw::Burgers
    }

    pub fn buckley_leverett(a: f64) -> Result<Self> {
        Self::buckley_leverett_variant(a, false)
    }

    pub fn buckley_leverett_variant(a: f64, standard: bool) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::param(format!("Buckley-Leverett mobility ratio must be positive, got {a}")));
        }
        Ok(ConservationLaw::BuckleyLeverett { a, standard })
    }

    pub fn shallow_water(g: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::param(format!("gravity must be positive, got {g}")));
        }
        Ok(ConservationLaw::ShallowWater { g })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConservationLaw::Burgers => "burgers",
            ConservationLaw::BuckleyLeverett { .. } => "buckley",
            ConservationLaw::ShallowWater { .. } => "shallow_water",
        }
    }

    pub fn components(&self) -> usize {
        match self {
            ConservationLaw::ShallowWater { .. } => 2,
            _ => 1,
        }
    }

    /// Components that must stay positive and receive Patankar weights.
    pub fn positive_components(&self) -> &'static [usize] {
        &[0]
    }

    pub fn flux(&self, u: &[f64], out: &mut [f64]) {
        match *self {
            ConservationLaw::Burgers => out[0] = 0.5 * u[0] * u[0],
            ConservationLaw::BuckleyLeverett { a, standard } => out[0] = bl_flux(a, standard, u[0]),
            ConservationLaw::ShallowWater { g } => {
                let (h, hu) = (u[0], u[1]);
                let vel = hu / h.max(DEPTH_FLOOR);
                out[0] = hu;
                out[1] = hu * vel + 0.5 * g * h * h;
            }
        }
    }

    /// Scalar flux. Panics for systems.
    pub fn flux_scalar(&self, u: f64) -> f64 {
        assert_eq!(self.components(), 1, "flux_scalar on a system");
        let mut out = [0.0];
        self.flux(&[u], &mut out);
        out[0]
    }

    /// Derivative of a scalar flux.
    pub fn flux_derivative(&self, u: f64) -> f64 {
        match *self {
            ConservationLaw::Burgers => u,
            ConservationLaw::BuckleyLeverett { a, standard } => bl_derivative(a, standard, u),
            ConservationLaw::ShallowWater { .. } => panic!("flux_derivative on a system"),
        }
    }

    /// Upper bound on the spectral radius of the flux Jacobian at `u`.
    pub fn wave_speed(&self, u: &[f64]) -> f64 {
        match *self {
            ConservationLaw::Burgers => u[0].abs(),
            ConservationLaw::BuckleyLeverett { a, standard } => {
                // max |f'| over [0, u]
                let top = u[0].abs();
                (0..=BL_SAMPLES)
                    .map(|k| bl_derivative(a, standard, top * k as f64 / BL_SAMPLES as f64).abs())
                    .fold(0.0, f64::max)
            }
            ConservationLaw::ShallowWater { g } => {
                let h = u[0].max(DEPTH_FLOOR);
                (u[1] / h).abs() + (g * u[0].max(0.0)).sqrt()
            }
        }
    }
}

fn bl_flux(a: f64, standard: bool, u: f64) -> f64 {
    let u2 = u * u;
    let w = if standard { (1.0 - u) * (1.0 - u) } else { 1.0 - u2 };
    let den = u2 + a * w;
    if den == 0.0 {
        0.0
    } else {
        u2 / den
    }
}

fn bl_derivative(a: f64, standard: bool, u: f64) -> f64 {
    let u2 = u * u;
    if standard {
        let w = (1.0 - u) * (1.0 - u);
        let den = u2 + a * w;
        if den == 0.0 {
            return 0.0;
        }
        2.0 * a * u * (1.0 - u) / (den * den)
    } else {
        let den = u2 + a * (1.0 - u2);
        if den == 0.0 {
            return 0.0;
        }
        2.0 * a * u / (den * den)
    }
}
