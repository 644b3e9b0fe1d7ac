//! Numerical fluxes, reconstructions and the flux-sign production-destruction splitting.

mod flux;
mod semidisc;
mod split;
mod weno;

pub use flux::{FluxId, NumericalFlux};
pub use semidisc::{assemble_semidiscretization, Semidiscretization};
pub use split::{modified_flux, split_interface_flux};
pub use weno::{positivity_limiter, weno_reconstruct, window_len, WENO_EPS};
