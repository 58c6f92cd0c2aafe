//! Characteristic analysis and a 1D finite-volume simulator for the hyperbolic
//! (relaxed) compressible Navier-Stokes family:
//!
//! * `E4`: density, velocity, temperature and a relaxing viscous stress,
//! * `E5`: `E4` plus a relaxing heat flux,
//! * `E3`: the isothermal variant (density, velocity, stress),
//! * `L5`: the heat-conducting model written in Lagrangian (mass) coordinates.
//!
//! [`models`] holds the constitutive laws and quasilinear matrix forms,
//! [`modes`] the closed-form characteristic speeds, eigenvectors and genuine
//! nonlinearity coefficients together with numeric oracles for each of them,
//! and [`sim`] integrates the Eulerian systems on a periodic grid and detects
//! finite-time gradient blowup.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod linalg;
mod math;
pub mod models;
pub mod modes;
pub mod sim;

pub use error::{Error, Result};
pub use models::{FluidParams, QuasilinearSystem, SystemKind};
