//! Smooth solutions of the 1D compressible Euler equations in Lagrangian
//! coordinates, evolved in Riemann-variable form up to gradient blowup, with
//! the analytic bounds and blowup-time certificates that control them.

pub mod analysis_bounds;
pub mod characteristics;
pub mod error;
pub mod evolution;
pub mod fields_init;
pub mod gas_thermo;
pub mod interp;

pub use error::{Error, Result};
