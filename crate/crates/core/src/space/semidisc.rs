use super::flux::NumericalFlux;
use super::split::split_interface_flux;
use crate::error::{Error, Result};
use crate::pds::{PdValues, ProductionDestructionSystem, Sparsity};
use crate::problems::{ConservationLaw, Grid1D};

/// Finite-volume semidiscretization written as a production-destruction system.
///
/// The first component is split by interface flux sign into neighbour
/// exchanges scaled by `1/dx`. Other components enter as explicit sources.
/// Outflow boundaries turn the boundary fluxes into external sources
/// (inflow) and sinks (outflow).
#[derive(Debug, Clone)]
pub struct Semidiscretization {
    law: ConservationLaw,
    flux: NumericalFlux,
    grid: Grid1D,
    sparsity: Sparsity,
    /// entry index of `(i, i + 1)` and `(i + 1, i)` for the interface right of cell `i`
    interface_entries: Vec<Option<(usize, usize)>>,
}

impl Semidiscretization {
    pub fn new(flux: NumericalFlux, grid: Grid1D) -> Result<Self> {
        let law = *flux.law();
        if law.positive_components() != [0] {
            return Err(Error::param("only the first component can be Patankar weighted"));
        }
        let (m, n) = (law.components(), grid.len());
        let sparsity = Sparsity::tridiagonal(n, m * n, grid.is_periodic());
        let find = |i: usize, j: usize| sparsity.entries().iter().position(|&e| e == (i, j));
        let interface_entries = (0..n)
            .map(|i| {
                let j = if i + 1 < n { i + 1 } else if grid.is_periodic() { 0 } else { return None };
                Some((find(i, j).unwrap(), find(j, i).unwrap()))
            })
            .collect();
        Ok(Self { law, flux, grid, sparsity, interface_entries })
    }

    pub fn law(&self) -> &ConservationLaw {
        &self.law
    }

    pub fn flux(&self) -> &NumericalFlux {
        &self.flux
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// Entry indices `(i -> i+1, i+1 -> i)` of the interface right of cell `i`.
    pub fn interface_entries(&self, i: usize) -> Option<(usize, usize)> {
        self.interface_entries[i]
    }

    /// All `n + 1` interface fluxes of every component (see
    /// [`NumericalFlux::interface_fluxes`]).
    pub fn interface_fluxes(&self, state: &[f64]) -> Result<Vec<f64>> {
        let (m, n) = (self.law.components(), self.grid.len());
        self.check_state(state)?;
        let mut out = vec![0.0; m * (n + 1)];
        self.flux.interface_fluxes(&self.grid, state, &mut out)?;
        Ok(out)
    }

    fn check_state(&self, state: &[f64]) -> Result<()> {
        let (m, n) = (self.law.components(), self.grid.len());
        if state.len() != m * n {
            return Err(Error::param(format!("state has {} entries, expected {}", state.len(), m * n)));
        }
        if let Some(index) = state.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidState { index, value: state[index] });
        }
        if let ConservationLaw::ShallowWater { .. } = self.law {
            if let Some(index) = state[..n].iter().position(|&h| h <= 0.0) {
                return Err(Error::InvalidState { index, value: state[index] });
            }
        }
        Ok(())
    }
}

/// Production-destruction terms of the semidiscretization at `state`.
pub fn assemble_semidiscretization(semi: &Semidiscretization, state: &[f64]) -> Result<PdValues> {
    let mut values = semi.sparsity().values();
    semi.evaluate(state, &mut values)?;
    Ok(values)
}

impl ProductionDestructionSystem for Semidiscretization {
    fn sparsity(&self) -> &Sparsity {
        &self.sparsity
    }

    fn evaluate(&self, u: &[f64], out: &mut PdValues) -> Result<()> {
        let (m, n) = (self.law.components(), self.grid.len());
        let g = self.interface_fluxes(u)?;
        let inv_dx = 1.0 / self.grid.dx();
        out.clear();
        for i in 0..n {
            if let Some((right, left)) = self.interface_entries[i] {
                let (p, d) = split_interface_flux(g[i + 1])?;
                // d: cell i loses to i + 1; p: cell i gains from i + 1
                out.dest[right] = d * inv_dx;
                out.prod[left] = d * inv_dx;
                out.prod[right] = p * inv_dx;
                out.dest[left] = p * inv_dx;
            }
        }
        if !self.grid.is_periodic() {
            let (p, d) = split_interface_flux(g[0])?;
            out.source[0] = d * inv_dx;
            out.sink[0] = p * inv_dx;
            let (p, d) = split_interface_flux(g[n])?;
            out.sink[n - 1] = d * inv_dx;
            out.source[n - 1] = p * inv_dx;
        }
        for c in 1..m {
            let gc = &g[c * (n + 1)..(c + 1) * (n + 1)];
            for i in 0..n {
                out.source[c * n + i] = -(gc[i + 1] - gc[i]) * inv_dx;
            }
        }
        Ok(())
    }

    fn is_conservative(&self) -> bool {
        self.grid.is_periodic()
    }
}
