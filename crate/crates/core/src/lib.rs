//! Modified Patankar (MP) time integration for one-dimensional conservation laws.
//!
//! The interface fluxes of a finite-volume scheme are split by sign into a
//! conservative production-destruction system (PDS). MP integrators weight the
//! production and destruction terms with ratios of new to old values, which
//! turns each stage into a linear system with a positive solution for any
//! step size. The diagnostics module measures total variation in space and
//! time, the deviation of the MP weights from one, and the residual of the
//! discrete weak form.

pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod integrators;
pub mod pds;
pub mod problems;
pub mod space;

pub use error::{Error, Result};
