//! Closed-form modes of the Eulerian systems without heat conduction.

use alloc::vec;
use alloc::vec::Vec;

use super::{Branch, ModeLabel, ModeReport};
use crate::math::sqrt;
use crate::models::{eos, FluidParams, StateE3, StateE4};
use crate::{Error, Result};

/// Squared relative speed `mu^2` of the nontrivial `E4` modes at any stress.
pub fn mu_sq_e4(params: &FluidParams, v: &StateE4) -> Result<f64> {
    v.validate()?;
    let StateE4 {
        rho, theta, sigma, ..
    } = *v;
    let FluidParams { r, c, eps, .. } = *params;
    let mu2 = r * theta
        + theta / (eps * rho * rho)
        + (r * r * rho * rho * theta + 2.0 * r * rho * sigma + sigma * sigma / theta) / (rho * rho * c);
    if mu2 > 0.0 && mu2.is_finite() {
        Ok(mu2)
    } else {
        Err(Error::internal(alloc::format!(
            "mu^2 = {mu2} is not positive at an admissible state"
        )))
    }
}

/// Equilibrium form of `mu^2`: `p_rho + theta p_theta^2 / (rho^2 e_theta) + theta / (eps rho^2)`.
pub fn mu_sq_e4_equilibrium(params: &FluidParams, rho: f64, theta: f64) -> Result<f64> {
    let g = eos(params, rho, theta)?;
    Ok(g.p_rho + theta * g.p_theta * g.p_theta / (rho * rho * g.e_theta) + theta / (params.eps * rho * rho))
}

fn contact(lambda: f64, mu: Option<f64>) -> ModeReport {
    ModeReport {
        label: ModeLabel::Contact,
        lambda,
        mu,
        r: Vec::new(),
        gnl: Some(0.0),
    }
}

fn speed_only(label: ModeLabel, lambda: f64, mu: f64) -> ModeReport {
    ModeReport {
        label,
        lambda,
        mu: Some(mu),
        r: Vec::new(),
        gnl: None,
    }
}

/// Speeds of `E4` in ascending order: `u - |mu|`, the double contact `u`, `u + |mu|`.
pub fn speeds_e4(params: &FluidParams, v: &StateE4) -> Result<Vec<ModeReport>> {
    let m = sqrt(mu_sq_e4(params, v)?);
    let u = v.u;
    Ok(vec![
        speed_only(ModeLabel::FastMinus, u - m, m),
        contact(u, Some(0.0)),
        contact(u, Some(0.0)),
        speed_only(ModeLabel::FastPlus, u + m, -m),
    ])
}

/// Speeds of the isothermal system: `mu^2 = R + 1/(eps rho^2)`, independent of the stress.
pub fn speeds_e3(params: &FluidParams, v: &StateE3) -> Result<Vec<ModeReport>> {
    v.validate()?;
    let m = sqrt(params.r + 1.0 / (params.eps * v.rho * v.rho));
    Ok(vec![
        speed_only(ModeLabel::FastMinus, v.u - m, m),
        contact(v.u, Some(0.0)),
        speed_only(ModeLabel::FastPlus, v.u + m, -m),
    ])
}

fn require_equilibrium(v: &StateE4) -> Result<()> {
    v.validate()?;
    if v.sigma != 0.0 {
        return Err(Error::precondition(alloc::format!(
            "equilibrium required (sigma = 0), got sigma = {}",
            v.sigma
        )));
    }
    Ok(())
}

/// `mu = u - lambda` for the selected branch: `Plus` is `lambda = u + |mu|`.
fn branch_mu(params: &FluidParams, v: &StateE4, branch: Branch) -> Result<f64> {
    Ok(-branch.sign() * sqrt(mu_sq_e4(params, v)?))
}

/// Nontrivial `E4` mode at equilibrium with eigenvector
/// `(eps rho^2/theta, -eps rho mu/theta, eps p_theta/e_theta, 1)`.
pub fn eigvec_e4_equilibrium(params: &FluidParams, v: &StateE4, branch: Branch) -> Result<ModeReport> {
    require_equilibrium(v)?;
    let mu = branch_mu(params, v, branch)?;
    let g = eos(params, v.rho, v.theta)?;
    let StateE4 { rho, theta, u, .. } = *v;
    let eps = params.eps;
    let r = vec![
        eps * rho * rho / theta,
        -eps * rho * mu / theta,
        eps * g.p_theta / g.e_theta,
        1.0,
    ];
    Ok(ModeReport {
        label: ModeLabel::of(super::Family::Fast, branch),
        lambda: u - mu,
        mu: Some(mu),
        r,
        gnl: Some(gnl_e4(params, v, branch)?),
    })
}

/// Pieces of the `E4` genuine-nonlinearity computation at equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct E4Chain {
    pub mu: f64,
    /// `r . grad lambda`.
    pub gnl: f64,
    /// `-2 mu (r . grad lambda)`, which does not depend on the branch.
    pub weighted: f64,
    /// `-2/rho + 2 eps (rho/theta) mu^2`; `weighted` exceeds it and it is positive.
    pub lower_bound: f64,
}

/// Genuine-nonlinearity coefficient assembled from the closed-form partials
/// of `mu^2` at `sigma = 0`.
pub fn gnl_e4_chain(params: &FluidParams, v: &StateE4, branch: Branch) -> Result<E4Chain> {
    require_equilibrium(v)?;
    let mu = branch_mu(params, v, branch)?;
    let FluidParams { r, c, eps, .. } = *params;
    let StateE4 { rho, theta, .. } = *v;

    let dmu2_drho = -2.0 * theta / (eps * rho * rho * rho);
    let dmu2_dtheta = r + r * r / c + 1.0 / (eps * rho * rho);
    let dmu2_dsigma = 2.0 * r / (rho * c);
    let dlambda_du = 1.0;

    let (r_rho, r_u, r_theta, r_sigma) = (
        eps * rho * rho / theta,
        -eps * rho * mu / theta,
        eps * r * rho / c,
        1.0,
    );
    let weighted = dmu2_drho * r_rho - 2.0 * mu * dlambda_du * r_u + dmu2_dtheta * r_theta + dmu2_dsigma * r_sigma;
    Ok(E4Chain {
        mu,
        gnl: weighted / (-2.0 * mu),
        weighted,
        lower_bound: -2.0 / rho + 2.0 * eps * (rho / theta) * mu * mu,
    })
}

pub fn gnl_e4(params: &FluidParams, v: &StateE4, branch: Branch) -> Result<f64> {
    gnl_e4_chain(params, v, branch).map(|c| c.gnl)
}
