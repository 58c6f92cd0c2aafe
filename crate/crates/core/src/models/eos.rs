use super::{positive, FluidParams};
use crate::Result;

/// Ideal-gas pressure and internal energy with their partial derivatives,
/// in Eulerian variables `(rho, theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eos {
    pub p: f64,
    pub e: f64,
    pub p_rho: f64,
    pub p_theta: f64,
    pub e_theta: f64,
}

/// Same as [`Eos`] in Lagrangian variables `(tau, theta)` with `tau = 1/rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EosLagrangian {
    pub p: f64,
    pub e: f64,
    pub p_tau: f64,
    pub p_theta: f64,
    pub e_tau: f64,
    pub e_theta: f64,
}

pub fn eos(params: &FluidParams, rho: f64, theta: f64) -> Result<Eos> {
    positive("rho", rho)?;
    positive("theta", theta)?;
    let r = params.r;
    Ok(Eos {
        p: r * theta * rho,
        e: params.c * theta,
        p_rho: r * theta,
        p_theta: r * rho,
        e_theta: params.c,
    })
}

pub fn eos_lagrangian(params: &FluidParams, tau: f64, theta: f64) -> Result<EosLagrangian> {
    positive("tau", tau)?;
    positive("theta", theta)?;
    let r = params.r;
    Ok(EosLagrangian {
        p: r * theta / tau,
        e: params.c * theta,
        p_tau: -r * theta / (tau * tau),
        p_theta: r / tau,
        e_tau: 0.0,
        e_theta: params.c,
    })
}

impl EosLagrangian {
    /// `p + e_tau - theta p_theta`, which vanishes for the ideal gas.
    pub fn thermodynamic_defect(&self, theta: f64) -> f64 {
        self.p + self.e_tau - theta * self.p_theta
    }
}
