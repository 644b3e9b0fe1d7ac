#![allow(dead_code)]

use patankar::pds::{rhs_from_pds, ProductionDestructionSystem};
use patankar::problems::{Boundary, ConservationLaw, Grid1D};
use patankar::space::{NumericalFlux, Semidiscretization};

/// Classical fourth-order Runge-Kutta on the PDS right-hand side with a fixed step.
pub fn rk4<P: ProductionDestructionSystem + ?Sized>(pds: &P, u0: &[f64], t_end: f64, dt: f64) -> Vec<f64> {
    let steps = (t_end / dt).round() as usize;
    let h = t_end / steps as f64;
    let axpy = |u: &[f64], k: &[f64], s: f64| -> Vec<f64> { u.iter().zip(k).map(|(a, b)| a + s * b).collect() };
    let f = |u: &[f64]| rhs_from_pds(pds, u).expect("rhs");
    let mut u = u0.to_vec();
    for _ in 0..steps {
        let k1 = f(&u);
        let k2 = f(&axpy(&u, &k1, 0.5 * h));
        let k3 = f(&axpy(&u, &k2, 0.5 * h));
        let k4 = f(&axpy(&u, &k3, h));
        for i in 0..u.len() {
            u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    u
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Upwind Burgers on a periodic `[-1, 1]` grid.
pub fn burgers_upwind(n: usize) -> Semidiscretization {
    let grid = Grid1D::new(-1.0, 1.0, n, Boundary::Periodic).unwrap();
    Semidiscretization::new(NumericalFlux::upwind(ConservationLaw::burgers()).unwrap(), grid).unwrap()
}

/// Rusanov Buckley-Leverett on a periodic `[-1, 1]` grid.
pub fn buckley_rusanov(n: usize) -> Semidiscretization {
    let grid = Grid1D::new(-1.0, 1.0, n, Boundary::Periodic).unwrap();
    let law = ConservationLaw::buckley_leverett(0.5).unwrap();
    Semidiscretization::new(NumericalFlux::rusanov(law).unwrap(), grid).unwrap()
}
