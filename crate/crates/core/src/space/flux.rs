use serde::{Deserialize, Serialize};

use super::weno::{positivity_limiter, weno_reconstruct, window_len};
use crate::error::{Error, Result};
use crate::problems::{ConservationLaw, Grid1D, DEPTH_FLOOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FluxId {
    #[serde(rename = "upwind")]
    Upwind,
    #[serde(rename = "rusanov")]
    Rusanov,
    #[serde(rename = "weno2")]
    Weno2,
    #[serde(rename = "weno3")]
    Weno3,
    #[serde(rename = "weno5")]
    Weno5,
}

impl FluxId {
    pub const ALL: [FluxId; 5] = [FluxId::Upwind, FluxId::Rusanov, FluxId::Weno2, FluxId::Weno3, FluxId::Weno5];

    pub fn as_str(&self) -> &'static str {
        match self {
            FluxId::Upwind => "upwind",
            FluxId::Rusanov => "rusanov",
            FluxId::Weno2 => "weno2",
            FluxId::Weno3 => "weno3",
            FluxId::Weno5 => "weno5",
        }
    }

    /// Reconstruction order, 1 for first-order fluxes.
    pub fn order(&self) -> usize {
        match self {
            FluxId::Upwind | FluxId::Rusanov => 1,
            FluxId::Weno2 => 2,
            FluxId::Weno3 => 3,
            FluxId::Weno5 => 5,
        }
    }
}

impl std::fmt::Display for FluxId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FluxId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        FluxId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown flux '{s}'")))
    }
}

/// Interface flux `g_{i+1/2}` built from the cells around the interface.
///
/// Reconstructed schemes evaluate the Rusanov flux on the face values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericalFlux {
    id: FluxId,
    law: ConservationLaw,
    floor: f64,
}

impl NumericalFlux {
    pub fn new(id: FluxId, law: ConservationLaw) -> Result<Self> {
        if id == FluxId::Upwind && law.components() != 1 {
            return Err(Error::param("upwind flux needs a scalar law"));
        }
        let floor = match law {
            ConservationLaw::ShallowWater { .. } => DEPTH_FLOOR,
            _ => 0.0,
        };
        Ok(Self { id, law, floor })
    }

    /// `g_{i+1/2} = f(U_i)`, for laws with `f' >= 0` on the admissible states.
    pub fn upwind(law: ConservationLaw) -> Result<Self> {
        Self::new(FluxId::Upwind, law)
    }

    pub fn rusanov(law: ConservationLaw) -> Result<Self> {
        Self::new(FluxId::Rusanov, law)
    }

    pub fn id(&self) -> FluxId {
        self.id
    }

    pub fn law(&self) -> &ConservationLaw {
        &self.law
    }

    /// Floor enforced on reconstructed values of positive components.
    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// Cells used left and right of the interface, counting the two adjacent ones.
    pub fn stencil(&self) -> (usize, usize) {
        match self.id {
            FluxId::Upwind => (1, 0),
            FluxId::Rusanov => (1, 1),
            FluxId::Weno2 | FluxId::Weno3 => (2, 2),
            FluxId::Weno5 => (3, 3),
        }
    }

    /// Flux from left and right face states.
    pub fn from_faces(&self, left: &[f64], right: &[f64], out: &mut [f64]) {
        let m = self.law.components();
        if self.id == FluxId::Upwind {
            self.law.flux(left, out);
            return;
        }
        let mut fl = [0.0; 2];
        let mut fr = [0.0; 2];
        self.law.flux(left, &mut fl[..m]);
        self.law.flux(right, &mut fr[..m]);
        let alpha = self.law.wave_speed(left).max(self.law.wave_speed(right));
        for c in 0..m {
            out[c] = 0.5 * (fl[c] + fr[c]) - 0.5 * alpha * (right[c] - left[c]);
        }
    }

    /// Flux from a window of cell states, `stencil().0` cells left of the
    /// interface and `stencil().1` right of it. Cells are `[component]` slices.
    pub fn eval_window(&self, cells: &[Vec<f64>]) -> Result<Vec<f64>> {
        let (p, q) = self.stencil();
        if cells.len() != p + q {
            return Err(Error::param(format!("flux stencil needs {} cells, got {}", p + q, cells.len())));
        }
        let m = self.law.components();
        let mut left = cells[p - 1].clone();
        let mut right = if q > 0 { cells[p].clone() } else { left.clone() };
        if self.id.order() > 1 {
            let len = window_len(self.id.order()).unwrap();
            let half = len / 2;
            for c in 0..m {
                let lw: Vec<f64> = cells[p - 1 - half..p - 1 + half + 1].iter().map(|s| s[c]).collect();
                let rw: Vec<f64> = cells[p - half..p + half + 1].iter().map(|s| s[c]).collect();
                let mut lf = weno_reconstruct(self.id.order(), &lw)?;
                let mut rf = weno_reconstruct(self.id.order(), &rw)?;
                if self.law.positive_components().contains(&c) {
                    self.limit(lw[half], &mut lf)?;
                    self.limit(rw[half], &mut rf)?;
                }
                left[c] = lf.1;
                right[c] = rf.0;
            }
        }
        let mut out = vec![0.0; m];
        self.from_faces(&left, &right, &mut out);
        Ok(out)
    }

    fn limit(&self, average: f64, faces: &mut (f64, f64)) -> Result<()> {
        let mut v = [faces.0, faces.1];
        positivity_limiter(average, &mut v, self.floor)?;
        *faces = (v[0], v[1]);
        Ok(())
    }

    /// Face values `(left face, right face)` of every cell, component-major.
    pub fn face_values(&self, grid: &Grid1D, state: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let (m, n) = (self.law.components(), grid.len());
        let mut left = state.to_vec();
        let mut right = state.to_vec();
        let order = self.id.order();
        if order == 1 {
            return Ok((left, right));
        }
        let len = window_len(order).unwrap();
        let half = (len / 2) as isize;
        let mut window = vec![0.0; len];
        for c in 0..m {
            let comp = &state[c * n..(c + 1) * n];
            let positive = self.law.positive_components().contains(&c);
            for i in 0..n {
                for (k, w) in window.iter_mut().enumerate() {
                    *w = comp[grid.wrap(i as isize + k as isize - half)];
                }
                let mut faces = weno_reconstruct(order, &window)?;
                if positive {
                    self.limit(comp[i], &mut faces).map_err(|_| Error::InvalidState { index: c * n + i, value: comp[i] })?;
                }
                left[c * n + i] = faces.0;
                right[c * n + i] = faces.1;
            }
        }
        Ok((left, right))
    }

    /// Fluxes at all `n + 1` interfaces; entry `c * (n + 1) + k` is the
    /// flux of component `c` through the left face of cell `k`. For periodic
    /// grids the first and last interface coincide.
    pub fn interface_fluxes(&self, grid: &Grid1D, state: &[f64], out: &mut [f64]) -> Result<()> {
        let (m, n) = (self.law.components(), grid.len());
        assert_eq!(state.len(), m * n);
        assert_eq!(out.len(), m * (n + 1));
        let (left_faces, right_faces) = self.face_values(grid, state)?;
        let mut l = [0.0; 2];
        let mut r = [0.0; 2];
        let mut g = [0.0; 2];
        for k in 0..=n {
            let il = grid.wrap(k as isize - 1);
            let ir = grid.wrap(k as isize);
            for c in 0..m {
                l[c] = right_faces[c * n + il];
                r[c] = left_faces[c * n + ir];
            }
            // outflow ghosts copy the boundary cell values
            if !grid.is_periodic() && k == 0 {
                l[..m].copy_from_slice(&r[..m]);
            }
            if !grid.is_periodic() && k == n {
                r[..m].copy_from_slice(&l[..m]);
            }
            self.from_faces(&l[..m], &r[..m], &mut g[..m]);
            for c in 0..m {
                if !g[c].is_finite() {
                    return Err(Error::NonFinite("interface flux"));
                }
                out[c * (n + 1) + k] = g[c];
            }
        }
        Ok(())
    }
}
