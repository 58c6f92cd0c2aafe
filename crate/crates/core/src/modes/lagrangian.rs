//! Equilibrium analysis of the heat-conducting model in Lagrangian coordinates.
//!
//! At `sigma = q = 0` the pencil determinant factors as
//! `det M0(lambda) = -(eps/theta) lambda pi0(lambda^2)` with
//!
//! ```text
//! pi0(X) = e_theta (delta/theta^2) X (X - l2s) - (X - l1s)
//! l1s = -p_tau + theta/eps,   l2s = l1s + theta p_theta^2 / e_theta
//! ```
//!
//! so the nontrivial speeds are `+-lambda_-`, `+-lambda_+` with
//! `0 < lambda_-^2 < l1s < l2s < lambda_+^2`.
//!
//! The nonlinearity coefficient `N = r . grad Pi` (with `Pi = det M` and `r`
//! the kernel vector below) decomposes as
//!
//! ```text
//! N = a_tau lambda (lambda^2 - l_tau) + a_theta lambda^3 (lambda^2 - l1s)(lambda^2 - l_theta)
//!   + a_sigma lambda^3 + a_q lambda (lambda^2 - l1s)^2
//! ```
//!
//! with all coefficients positive. [`NonlinearityCoefficients::exact`] holds
//! the coefficients of this identity. The reduced variant with `a_sigma = 0`,
//! `a_tau ~ theta^-4` and `l_theta = theta^2/(delta c) + 2 theta/eps` is kept
//! as [`NonlinearityCoefficients::reduced`]; it does not equal `r . grad Pi`
//! and is reported only for comparison. The small-`tau`
//! threshold of [`find_tau_threshold`] is defined with the reduced `l_tau`,
//! `l_theta`.

use alloc::vec;
use alloc::vec::Vec;

use super::{Branch, Family};
use crate::math::{abs, sqrt};
use crate::models::{eos_lagrangian, FluidParams};
use crate::{Error, Result};

/// Coefficients of the nonlinearity decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearityCoefficients {
    pub alpha_tau: f64,
    pub alpha_theta: f64,
    pub alpha_sigma: f64,
    pub alpha_q: f64,
    pub lam_tau_sq: f64,
    pub lam_theta_sq: f64,
}

impl NonlinearityCoefficients {
    /// Coefficients for which the decomposition equals `r . grad Pi` identically in `lambda`.
    pub fn exact(params: &FluidParams, tau: f64, theta: f64) -> Result<Self> {
        let (r, c, eps) = (params.r, params.c, params.eps);
        let delta = params.delta()?;
        let t3 = theta * theta * theta;
        Ok(NonlinearityCoefficients {
            alpha_tau: 2.0 * eps * eps * delta * r * (r + c) / (tau * tau * tau * t3),
            alpha_theta: 3.0 * eps * eps * delta * c * tau / (r * t3 * theta * theta),
            alpha_sigma: 2.0 * eps * delta * r / (tau * t3),
            alpha_q: 2.0 * eps * eps * tau / (r * t3),
            lam_tau_sq: theta * theta / (delta * (r + c)),
            lam_theta_sq: 2.0 * r * (r + c) * theta / (3.0 * c * tau * tau)
                + 2.0 * theta / (3.0 * eps)
                + theta * theta / (3.0 * delta * c),
        })
    }

    /// The reduced variant (see the module docs).
    pub fn reduced(params: &FluidParams, tau: f64, theta: f64) -> Result<Self> {
        let (r, c, eps) = (params.r, params.c, params.eps);
        let delta = params.delta()?;
        let t3 = theta * theta * theta;
        Ok(NonlinearityCoefficients {
            alpha_tau: 2.0 * eps * eps * delta * r * (r + c) / (tau * tau * tau * t3 * theta),
            alpha_theta: eps * eps * delta * c * tau / (r * theta),
            alpha_sigma: 0.0,
            alpha_q: 2.0 * eps * eps * tau / (r * t3),
            lam_tau_sq: theta * theta / (delta * (r + c)),
            lam_theta_sq: theta * theta / (delta * c) + 2.0 * theta / eps,
        })
    }

    /// Evaluates the decomposition at speed `lambda` given `lambda_*^2`.
    pub fn evaluate(&self, lam_star_sq: f64, lambda: f64) -> f64 {
        let l2 = lambda * lambda;
        let l3 = l2 * lambda;
        let d = l2 - lam_star_sq;
        self.alpha_tau * lambda * (l2 - self.lam_tau_sq)
            + self.alpha_theta * l3 * d * (l2 - self.lam_theta_sq)
            + self.alpha_sigma * l3
            + self.alpha_q * lambda * d * d
    }
}

/// Equilibrium characteristic data of the Lagrangian 5-field system at `(tau, theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pi0Report {
    pub tau: f64,
    pub theta: f64,
    pub lam_star_sq: f64,
    pub lam_2star_sq: f64,
    /// `theta^2 / (delta (R + c))`.
    pub lam_tau_sq: f64,
    /// `theta^2 / (delta c) + 2 theta / eps` (threshold form).
    pub lam_theta_sq: f64,
    /// `(lambda_-^2, lambda_+^2)`.
    pub roots: (f64, f64),
    /// `(alpha_tau, alpha_theta, alpha_q)` of the reduced form.
    pub alphas: (f64, f64, f64),
    pub coefficients: NonlinearityCoefficients,
    /// `r . grad Pi` at `lambda = +lambda_+` and `lambda = +lambda_-`.
    pub n_fast: f64,
    pub n_slow: f64,
    /// The reduced form at the same speeds.
    pub n_fast_reduced: f64,
    pub n_slow_reduced: f64,
    /// Quadratic coefficients `[c0, c1, c2]` of `pi0(X) = c0 + c1 X + c2 X^2`.
    pub pi0: [f64; 3],
}

impl Pi0Report {
    pub fn pi0_at(&self, x: f64) -> f64 {
        (self.pi0[2] * x + self.pi0[1]) * x + self.pi0[0]
    }

    /// `0 < lambda_-^2 < lambda_*^2 < lambda_**^2 < lambda_+^2`.
    pub fn ordering_holds(&self) -> bool {
        let (lo, hi) = self.roots;
        0.0 < lo && lo < self.lam_star_sq && self.lam_star_sq < self.lam_2star_sq && self.lam_2star_sq < hi
    }

    /// The sign list `pi0(0) > 0, pi0(l1s) < 0, pi0(l2s) < 0, pi0(inf) > 0`.
    pub fn sign_pattern_holds(&self) -> bool {
        self.pi0_at(0.0) > 0.0
            && self.pi0_at(self.lam_star_sq) < 0.0
            && self.pi0_at(self.lam_2star_sq) < 0.0
            && self.pi0[2] > 0.0
    }

    pub fn root(&self, family: Family) -> f64 {
        match family {
            Family::Fast => self.roots.1,
            Family::Slow => self.roots.0,
        }
    }

    pub fn speed(&self, family: Family, branch: Branch) -> f64 {
        branch.sign() * sqrt(self.root(family))
    }

    /// All five Lagrangian speeds in ascending order.
    pub fn speeds(&self) -> [f64; 5] {
        let (fast, slow) = (sqrt(self.roots.1), sqrt(self.roots.0));
        [-fast, -slow, 0.0, slow, fast]
    }
}

pub fn pi0_report(params: &FluidParams, tau: f64, theta: f64) -> Result<Pi0Report> {
    let g = eos_lagrangian(params, tau, theta)?;
    let delta = params.delta()?;
    let lam_star_sq = -g.p_tau + theta / params.eps;
    let lam_2star_sq = lam_star_sq + theta * g.p_theta * g.p_theta / g.e_theta;

    let a = g.e_theta * delta / (theta * theta);
    let b = -a * lam_2star_sq - 1.0;
    let c0 = lam_star_sq;
    let disc = b * b - 4.0 * a * c0;
    if !(disc > 0.0) {
        return Err(Error::internal(alloc::format!(
            "pi0 discriminant {disc} is not positive at tau = {tau}, theta = {theta}"
        )));
    }
    // b < 0, so this avoids cancellation in the small root.
    let qq = -0.5 * (b - sqrt(disc));
    let (x1, x2) = (c0 / qq, qq / a);
    let roots = (x1.min(x2), x1.max(x2));

    let coefficients = NonlinearityCoefficients::exact(params, tau, theta)?;
    let reduced = NonlinearityCoefficients::reduced(params, tau, theta)?;
    let (fast, slow) = (sqrt(roots.1), sqrt(roots.0));
    Ok(Pi0Report {
        tau,
        theta,
        lam_star_sq,
        lam_2star_sq,
        lam_tau_sq: reduced.lam_tau_sq,
        lam_theta_sq: reduced.lam_theta_sq,
        roots,
        alphas: (reduced.alpha_tau, reduced.alpha_theta, reduced.alpha_q),
        coefficients,
        n_fast: coefficients.evaluate(lam_star_sq, fast),
        n_slow: coefficients.evaluate(lam_star_sq, slow),
        n_fast_reduced: reduced.evaluate(lam_star_sq, fast),
        n_slow_reduced: reduced.evaluate(lam_star_sq, slow),
        pi0: [c0, b, a],
    })
}

/// Kernel vector of `M0(lambda)`:
/// `(-eps/theta, eps lambda/theta, eps (lambda^2 - l1s)/(theta p_theta), 1,
///   eps theta (lambda^2 - l1s) / (delta p_theta lambda))`.
pub fn eigvec_l5_equilibrium(params: &FluidParams, tau: f64, theta: f64, lambda: f64) -> Result<Vec<f64>> {
    if lambda == 0.0 {
        return Err(Error::precondition(
            "lambda = 0 is the contact mode; its kernel is not given by this formula",
        ));
    }
    let report = pi0_report(params, tau, theta)?;
    let x = lambda * lambda;
    let scale = report.pi0[0].max(report.pi0[2] * x * x).max(1.0);
    if abs(report.pi0_at(x)) > 1e-8 * scale {
        return Err(Error::precondition(alloc::format!(
            "lambda^2 = {x} is not a root of pi0 (pi0 = {})",
            report.pi0_at(x)
        )));
    }
    let g = eos_lagrangian(params, tau, theta)?;
    let (eps, delta) = (params.eps, params.delta()?);
    let d = x - report.lam_star_sq;
    Ok(vec![
        -eps / theta,
        eps * lambda / theta,
        eps * d / (theta * g.p_theta),
        1.0,
        eps * theta * d / (delta * g.p_theta * lambda),
    ])
}

/// `N = r . grad Pi` for the selected mode at equilibrium, from the exact decomposition.
pub fn gnl_l5(params: &FluidParams, tau: f64, theta: f64, family: Family, branch: Branch) -> Result<f64> {
    let report = pi0_report(params, tau, theta)?;
    let lambda = report.speed(family, branch);
    Ok(report.coefficients.evaluate(report.lam_star_sq, lambda))
}

/// The reduced decomposition at the same mode (comparison only).
pub fn nonlinearity_reduced_form(
    params: &FluidParams,
    tau: f64,
    theta: f64,
    family: Family,
    branch: Branch,
) -> Result<f64> {
    let report = pi0_report(params, tau, theta)?;
    let lambda = report.speed(family, branch);
    Ok(NonlinearityCoefficients::reduced(params, tau, theta)?.evaluate(report.lam_star_sq, lambda))
}

/// `r . grad lambda` of the selected mode, by implicit differentiation of
/// `Pi(V, lambda(V)) = 0`: `-N / (d Pi / d lambda)`.
pub fn speed_derivative_l5(params: &FluidParams, tau: f64, theta: f64, family: Family, branch: Branch) -> Result<f64> {
    let report = pi0_report(params, tau, theta)?;
    let lambda = report.speed(family, branch);
    let x = lambda * lambda;
    let dpi0 = 2.0 * report.pi0[2] * x + report.pi0[1];
    // d/dlambda [-(eps/theta) lambda pi0(lambda^2)] at a root of pi0.
    let dpi_dlambda = -(params.eps / theta) * 2.0 * x * dpi0;
    let n = report.coefficients.evaluate(report.lam_star_sq, lambda);
    Ok(-n / dpi_dlambda)
}

fn threshold_speeds(params: &FluidParams, theta: f64) -> Result<f64> {
    let r = NonlinearityCoefficients::reduced(params, 1.0, theta)?;
    Ok(r.lam_tau_sq.max(r.lam_theta_sq))
}

fn threshold_predicate(params: &FluidParams, theta: f64, tau: f64) -> Result<bool> {
    let lam_star_sq = params.r * theta / (tau * tau) + theta / params.eps;
    Ok(threshold_speeds(params, theta)? < lam_star_sq)
}

/// Largest `tau` with `max(l_tau, l_theta) < lambda_*^2(tau)`; infinite when
/// the condition holds for every `tau`.
pub fn find_tau_threshold(params: &FluidParams, theta: f64) -> Result<f64> {
    crate::models::positive("theta", theta)?;
    let bound = threshold_speeds(params, theta)?;
    let denom = bound - theta / params.eps;
    if denom > 0.0 {
        Ok(sqrt(params.r * theta / denom))
    } else {
        Ok(f64::INFINITY)
    }
}

/// Bisection on the threshold predicate, to absolute tolerance `tol` in `tau`.
pub fn tau_threshold_bisect(params: &FluidParams, theta: f64, tol: f64) -> Result<f64> {
    crate::models::positive("theta", theta)?;
    let mut hi = 1.0;
    while threshold_predicate(params, theta, hi)? {
        hi *= 2.0;
        if hi > 1e150 {
            return Ok(f64::INFINITY);
        }
    }
    let mut lo = hi / 2.0;
    while !threshold_predicate(params, theta, lo)? {
        hi = lo;
        lo /= 2.0;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if threshold_predicate(params, theta, mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
