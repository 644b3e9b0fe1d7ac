//! Grids, conservation laws, initial data with exact solutions, and CFL step selection.

mod grid;
mod law;
mod setup;

pub use grid::{Boundary, Grid1D};
pub use law::{ConservationLaw, DEPTH_FLOOR};
pub use setup::{
    exact_burgers_double_rp, DamBreak, DamBreakSolution, InitialData, Problem, ProblemId, ProblemParams,
    RiemannSetup, ScalarDoubleRiemann,
};

use crate::error::{Error, Result};

/// Largest wave speed over the cells of a component-major state.
pub fn max_wave_speed(law: &ConservationLaw, grid: &Grid1D, state: &[f64]) -> f64 {
    let (m, n) = (law.components(), grid.len());
    let mut cell = vec![0.0; m];
    let mut speed: f64 = 0.0;
    for i in 0..n {
        for c in 0..m {
            cell[c] = state[c * n + i];
        }
        speed = speed.max(law.wave_speed(&cell));
    }
    speed
}

/// `cfl * dx / max wave speed`, clamped to `remaining`. Falls back to
/// `dx` when every wave speed vanishes.
pub fn select_timestep(
    cfl: f64,
    law: &ConservationLaw,
    grid: &Grid1D,
    state: &[f64],
    remaining: f64,
) -> Result<f64> {
    if !(cfl > 0.0 && cfl.is_finite()) {
        return Err(Error::param(format!("cfl must be positive, got {cfl}")));
    }
    if !(remaining > 0.0) {
        return Err(Error::param(format!("no time left to integrate ({remaining})")));
    }
    let speed = max_wave_speed(law, grid, state);
    if !speed.is_finite() {
        return Err(Error::NonFinite("wave speed"));
    }
    let dt = if speed > 0.0 { cfl * grid.dx() / speed } else { grid.dx() };
    Ok(dt.min(remaining))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid1D {
        Grid1D::new(-1.0, 1.0, 100, Boundary::Periodic).unwrap()
    }

    #[test]
    fn timestep_formula() {
        let law = ConservationLaw::burgers();
        let mut u = vec![0.5; 100];
        u[10] = 2.0;
        let dt = select_timestep(1.0, &law, &grid(), &u, 10.0).unwrap();
        assert!((dt - 0.01).abs() < 1e-15);
        let dt = select_timestep(2.0, &law, &grid(), &u, 10.0).unwrap();
        assert!((dt - 0.02).abs() < 1e-15);
        let dt = select_timestep(1.0, &law, &grid(), &u, 0.005).unwrap();
        assert_eq!(dt, 0.005);
    }

    #[test]
    fn zero_speed_falls_back_to_dx() {
        let law = ConservationLaw::burgers();
        let dt = select_timestep(0.5, &law, &grid(), &[0.0; 100], 1.0).unwrap();
        assert_eq!(dt, grid().dx());
    }

    #[test]
    fn rejects_bad_cfl() {
        let law = ConservationLaw::burgers();
        assert!(select_timestep(0.0, &law, &grid(), &[1.0; 100], 1.0).is_err());
        assert!(select_timestep(-1.0, &law, &grid(), &[1.0; 100], 1.0).is_err());
    }
}
