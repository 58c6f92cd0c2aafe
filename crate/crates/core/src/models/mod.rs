//! Fluid parameters, ideal-gas constitutive laws, state vectors and the
//! quasilinear forms `A0(V) V_t + A1(V) V_x = G(V)` of the four system variants.
//!
//! Primitive variables are the canonical state everywhere in this crate.
//! Conserved vectors only appear at the finite-volume boundary
//! ([`law::to_conserved`] / [`law::to_primitive`]).

mod eos;
pub mod law;
mod state;
mod system;

pub use eos::{eos, eos_lagrangian, Eos, EosLagrangian};
pub use law::{Cell, MAX_VARS};
pub use state::{StateE3, StateE4, StateE5, StateL5};
pub use system::{build_system, QuasilinearSystem};

use alloc::format;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// Which balance-law system a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    /// Eulerian, no heat conduction: `(rho, u, theta, sigma)`.
    E4,
    /// Eulerian with heat conduction: `(rho, u, theta, sigma, q)`.
    E5,
    /// Eulerian isothermal: `(rho, u, sigma)`.
    E3,
    /// Lagrangian with heat conduction: `(tau, u, theta, sigma, q)`.
    L5,
}

impl SystemKind {
    pub const fn dim(self) -> usize {
        match self {
            SystemKind::E3 => 3,
            SystemKind::E4 => 4,
            SystemKind::E5 | SystemKind::L5 => 5,
        }
    }

    pub const fn is_eulerian(self) -> bool {
        !matches!(self, SystemKind::L5)
    }

    pub const fn has_heat_flux(self) -> bool {
        matches!(self, SystemKind::E5 | SystemKind::L5)
    }

    /// Whether the system carries an energy balance (all but the isothermal one).
    pub const fn has_energy(self) -> bool {
        !matches!(self, SystemKind::E3)
    }

    /// Names of the primitive components, in state-vector order.
    pub const fn component_names(self) -> &'static [&'static str] {
        match self {
            SystemKind::E3 => &["rho", "u", "sigma"],
            SystemKind::E4 => &["rho", "u", "theta", "sigma"],
            SystemKind::E5 => &["rho", "u", "theta", "sigma", "q"],
            SystemKind::L5 => &["tau", "u", "theta", "sigma", "q"],
        }
    }

    /// Index of the stress component.
    pub const fn sigma_index(self) -> usize {
        match self {
            SystemKind::E3 => 2,
            _ => 3,
        }
    }

    /// Index of the velocity component.
    pub const fn velocity_index(self) -> usize {
        1
    }

    pub const fn name(self) -> &'static str {
        match self {
            SystemKind::E3 => "e3",
            SystemKind::E4 => "e4",
            SystemKind::E5 => "e5",
            SystemKind::L5 => "l5",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "e3" => Ok(SystemKind::E3),
            "e4" => Ok(SystemKind::E4),
            "e5" => Ok(SystemKind::E5),
            "l5" => Ok(SystemKind::L5),
            other => Err(Error::config(format!(
                "unknown system kind `{other}` (expected e3, e4, e5 or l5)"
            ))),
        }
    }
}

/// Gas constants and relaxation coefficients.
///
/// `p = R theta rho`, `e = c theta`. The stress relaxes with viscosity `eta`
/// and retardation `eps`; the heat flux (5-field systems only) with
/// conductivity `chi` and retardation `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidParams {
    pub r: f64,
    pub c: f64,
    pub eta: f64,
    pub eps: f64,
    pub delta: Option<f64>,
    pub chi: Option<f64>,
}

impl FluidParams {
    pub fn new(r: f64, c: f64, eta: f64, eps: f64) -> Result<Self> {
        let params = FluidParams {
            r,
            c,
            eta,
            eps,
            delta: None,
            chi: None,
        };
        params.validate_base()?;
        Ok(params)
    }

    pub fn with_heat_conduction(mut self, delta: f64, chi: f64) -> Result<Self> {
        positive("delta", delta)?;
        positive("chi", chi)?;
        self.delta = Some(delta);
        self.chi = Some(chi);
        Ok(self)
    }

    fn validate_base(&self) -> Result<()> {
        positive("R", self.r)?;
        positive("c", self.c)?;
        positive("eta", self.eta)?;
        positive("eps", self.eps)
    }

    /// Checks every invariant required by `kind`.
    pub fn validate(&self, kind: SystemKind) -> Result<()> {
        self.validate_base()?;
        if kind.has_heat_flux() {
            self.delta()?;
            self.chi()?;
        }
        Ok(())
    }

    pub fn delta(&self) -> Result<f64> {
        match self.delta {
            Some(d) => positive("delta", d).map(|_| d),
            None => Err(Error::config(
                "heat-conducting system requires `delta` (heat-flux retardation)",
            )),
        }
    }

    pub fn chi(&self) -> Result<f64> {
        match self.chi {
            Some(x) => positive("chi", x).map(|_| x),
            None => Err(Error::config(
                "heat-conducting system requires `chi` (heat conductivity)",
            )),
        }
    }
}

pub(crate) fn positive(what: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_reject_nonpositive() {
        assert!(FluidParams::new(1.0, 1.5, 1.0, 1.0).is_ok());
        assert_eq!(
            FluidParams::new(0.0, 1.5, 1.0, 1.0),
            Err(Error::Domain {
                what: "R",
                value: 0.0
            })
        );
        assert!(FluidParams::new(1.0, 1.5, -1.0, 1.0).is_err());
        assert!(FluidParams::new(1.0, 1.5, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn heat_conduction_required_for_five_field_kinds() {
        let p = FluidParams::new(1.0, 1.5, 1.0, 1.0).unwrap();
        assert!(p.validate(SystemKind::E4).is_ok());
        assert!(matches!(p.validate(SystemKind::E5), Err(Error::Config(_))));
        assert!(matches!(p.validate(SystemKind::L5), Err(Error::Config(_))));
        let p = p.with_heat_conduction(1.0, 2.0).unwrap();
        assert!(p.validate(SystemKind::E5).is_ok());
    }

    #[test]
    fn kind_round_trips_through_str() {
        for kind in [SystemKind::E3, SystemKind::E4, SystemKind::E5, SystemKind::L5] {
            assert_eq!(kind.name().parse::<SystemKind>().unwrap(), kind);
            assert_eq!(kind.component_names().len(), kind.dim());
        }
        assert!("e6".parse::<SystemKind>().is_err());
    }
}
