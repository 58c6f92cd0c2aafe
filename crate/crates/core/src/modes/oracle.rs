//! Finite-difference oracles for the closed-form speeds and nonlinearity
//! coefficients. None of these share code with the closed forms beyond the
//! assembly of `A0` and `A1`.

use alloc::vec::Vec;

use super::generic::{eigen_residual, track_eigenvalue};
use crate::linalg;
use crate::math::abs;
use crate::models::{build_system, FluidParams, QuasilinearSystem, SystemKind};
use crate::Result;

/// Relative step used by the oracles: `h = 1e-5 (1 + |V|_inf)`.
pub const FD_STEP: f64 = 1e-5;

/// Central difference of `f` at 0 with one Richardson halving.
pub fn richardson<F>(mut f: F, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut central = |h: f64| -> Result<f64> { Ok((f(h)? - f(-h)?) / (2.0 * h)) };
    let d1 = central(h)?;
    let d2 = central(0.5 * h)?;
    Ok((4.0 * d2 - d1) / 3.0)
}

fn step_along(v: &[f64], r: &[f64]) -> f64 {
    let vmax = v.iter().fold(0.0f64, |m, x| m.max(abs(*x)));
    let rmax = r.iter().fold(0.0f64, |m, x| m.max(abs(*x)));
    FD_STEP * (1.0 + vmax) / rmax.max(1e-300)
}

fn shifted(v: &[f64], r: &[f64], s: f64) -> Vec<f64> {
    v.iter().zip(r).map(|(a, b)| a + s * b).collect()
}

/// `r . grad lambda` by differentiating the eigenvalue nearest `lambda`
/// along `V + s r`.
pub fn fd_gnl(sys: &QuasilinearSystem, v: &[f64], lambda: f64, r: &[f64]) -> Result<f64> {
    let h = step_along(v, r);
    richardson(|s| track_eigenvalue(sys, &shifted(v, r, s), lambda), h)
}

/// `r . grad det(A1 - lambda A0)` with `lambda` held fixed, for the
/// Lagrangian model at `(tau, u, theta, 0, 0)`.
pub fn fd_nonlinearity_l5(params: &FluidParams, v: &[f64], lambda: f64, r: &[f64]) -> Result<f64> {
    let sys = build_system(SystemKind::L5, params)?;
    let h = step_along(v, r);
    richardson(
        |s| Ok(linalg::determinant(&sys.pencil(&shifted(v, r, s), lambda)?)),
        h,
    )
}

/// Residual of a claimed eigenpair; see [`eigen_residual`].
pub fn residual(sys: &QuasilinearSystem, v: &[f64], lambda: f64, r: &[f64]) -> Result<f64> {
    eigen_residual(sys, v, lambda, r)
}

/// Collinearity of `r` with the smallest right singular vector of the pencil.
pub fn nullspace_alignment(sys: &QuasilinearSystem, v: &[f64], lambda: f64, r: &[f64]) -> Result<f64> {
    let m = sys.pencil(v, lambda)?;
    let null = linalg::null_vectors(&m, 1);
    Ok(linalg::collinearity(null[0].as_slice(), r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::StateE4;
    use crate::modes::{eigvec_e4_equilibrium, eigvec_l5_equilibrium, pi0_report, Branch, Family};

    fn params() -> FluidParams {
        FluidParams::new(1.0, 1.5, 1.0, 1.0)
            .unwrap()
            .with_heat_conduction(1.0, 1.0)
            .unwrap()
    }

    #[test]
    fn richardson_on_polynomial() {
        let d = richardson(|x| Ok(x * x * x + 2.0 * x + 1.0), 0.1).unwrap();
        assert!((d - 2.0).abs() < 1e-12);
    }

    #[test]
    fn e4_closed_form_matches_tracking() {
        let p = params();
        let sys = build_system(SystemKind::E4, &p).unwrap();
        let v = StateE4::new(1.0, 0.0, 1.0, 0.0).unwrap();
        for branch in [Branch::Plus, Branch::Minus] {
            let mode = eigvec_e4_equilibrium(&p, &v, branch).unwrap();
            let fd = fd_gnl(&sys, &v.to_array(), mode.lambda, &mode.r).unwrap();
            let gnl = mode.gnl.unwrap();
            assert!((fd - gnl).abs() <= 1e-7 * gnl.abs(), "{fd} vs {gnl}");
            assert!(residual(&sys, &v.to_array(), mode.lambda, &mode.r).unwrap() < 1e-12);
            assert!(nullspace_alignment(&sys, &v.to_array(), mode.lambda, &mode.r).unwrap() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn l5_exact_decomposition_matches_determinant() {
        let p = params();
        for &tau in &[1.0, 0.5, 2.0] {
            let report = pi0_report(&p, tau, 1.0).unwrap();
            for family in [Family::Fast, Family::Slow] {
                let lambda = report.speed(family, Branch::Plus);
                let r = eigvec_l5_equilibrium(&p, tau, 1.0, lambda).unwrap();
                let v = [tau, 0.0, 1.0, 0.0, 0.0];
                let fd = fd_nonlinearity_l5(&p, &v, lambda, &r).unwrap();
                let n = report.coefficients.evaluate(report.lam_star_sq, lambda);
                assert!((fd - n).abs() <= 1e-6 * n.abs(), "tau {tau} {family:?}: {fd} vs {n}");
            }
        }
    }
}
