//! Numeric eigen-decomposition of the pencil `(A1, A0)` for any kind and state.

use alloc::vec::Vec;

use nalgebra::DVector;

use crate::linalg;
use crate::math::abs;
use crate::models::QuasilinearSystem;
use crate::{Error, Result};

/// Tolerance on the imaginary part of a characteristic speed, relative to `max(1, |lambda|)`.
pub const IMAG_TOL: f64 = 1e-9;

/// Eigenvalues closer than this (relative) are treated as one repeated eigenvalue.
const CLUSTER_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub lambda: f64,
    pub r: Vec<f64>,
}

/// Scales `r` so that its stress component is 1; falls back to unit length
/// with a positive largest entry when the stress component vanishes.
pub(crate) fn normalize(r: &mut [f64], sigma_index: usize) {
    let norm = crate::math::norm2(r);
    if abs(r[sigma_index]) > 1e-10 * norm {
        let s = r[sigma_index];
        r.iter_mut().for_each(|x| *x /= s);
    } else {
        let big = r
            .iter()
            .copied()
            .fold(0.0f64, |m, x| if abs(x) > abs(m) { x } else { m });
        let s = if big < 0.0 { -norm } else { norm };
        r.iter_mut().for_each(|x| *x /= s);
    }
}

/// Real eigenvalues of the pencil in ascending order; fails with
/// [`Error::HyperbolicityLoss`] if any imaginary part exceeds [`IMAG_TOL`].
pub fn real_speeds(sys: &QuasilinearSystem, v: &[f64]) -> Result<Vec<f64>> {
    let a0 = sys.a0(v)?;
    let a1 = sys.a1(v)?;
    let eig = linalg::generalized_eigenvalues(&a1, &a0)?;
    if eig
        .iter()
        .any(|&(re, im)| abs(im) > IMAG_TOL * f64::max(1.0, abs(re)))
    {
        return Err(Error::HyperbolicityLoss {
            state: v.to_vec(),
            spectrum: eig,
        });
    }
    Ok(eig.into_iter().map(|(re, _)| re).collect())
}

/// Complete eigen-decomposition: ascending speeds with eigenvectors from the
/// null space of `A1 - lambda A0`. Repeated speeds receive as many
/// independent vectors as their multiplicity.
pub fn speeds_generic(sys: &QuasilinearSystem, v: &[f64]) -> Result<Vec<Eigenpair>> {
    let speeds = real_speeds(sys, v)?;
    let scale = speeds.iter().fold(1.0f64, |m, &x| m.max(abs(x)));
    let sigma_index = sys.kind().sigma_index();

    let mut out = Vec::with_capacity(speeds.len());
    let mut i = 0;
    while i < speeds.len() {
        let mut j = i + 1;
        while j < speeds.len() && speeds[j] - speeds[i] <= CLUSTER_TOL * scale {
            j += 1;
        }
        let k = j - i;
        let mean = speeds[i..j].iter().sum::<f64>() / k as f64;
        let pencil = sys.pencil(v, mean)?;
        let vectors: Vec<DVector<f64>> = linalg::null_vectors(&pencil, k);
        for (lambda, vec) in speeds[i..j].iter().zip(vectors) {
            let mut r: Vec<f64> = vec.iter().copied().collect();
            normalize(&mut r, sigma_index);
            out.push(Eigenpair { lambda: *lambda, r });
        }
        i = j;
    }
    Ok(out)
}

/// Eigenvalue at `v` nearest to `target` (nearest-match continuation).
pub fn track_eigenvalue(sys: &QuasilinearSystem, v: &[f64], target: f64) -> Result<f64> {
    let speeds = real_speeds(sys, v)?;
    speeds
        .into_iter()
        .min_by(|a, b| abs(a - target).total_cmp(&abs(b - target)))
        .ok_or_else(|| Error::internal("empty spectrum"))
}

/// `||(A1 - lambda A0) r|| / ||r||`.
pub fn eigen_residual(sys: &QuasilinearSystem, v: &[f64], lambda: f64, r: &[f64]) -> Result<f64> {
    let m = sys.pencil(v, lambda)?;
    let rv = DVector::from_column_slice(r);
    Ok((m * &rv).norm() / rv.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_system, FluidParams, SystemKind};

    fn params() -> FluidParams {
        FluidParams::new(1.0, 1.5, 1.0, 1.0)
            .unwrap()
            .with_heat_conduction(1.0, 1.0)
            .unwrap()
    }

    #[test]
    fn isothermal_spectrum() {
        let sys = build_system(SystemKind::E3, &params()).unwrap();
        let pairs = speeds_generic(&sys, &[1.0, 0.0, 0.0]).unwrap();
        let s2 = 2f64.sqrt();
        assert!((pairs[0].lambda + s2).abs() < 1e-12);
        assert!(pairs[1].lambda.abs() < 1e-12);
        assert!((pairs[2].lambda - s2).abs() < 1e-12);
        for p in &pairs {
            assert!(eigen_residual(&sys, &[1.0, 0.0, 0.0], p.lambda, &p.r).unwrap() < 1e-12);
        }
    }

    #[test]
    fn e4_double_contact_has_two_vectors() {
        let sys = build_system(SystemKind::E4, &params()).unwrap();
        let v = [1.2, 0.3, 0.8, 0.2];
        let pairs = speeds_generic(&sys, &v).unwrap();
        assert_eq!(pairs.len(), 4);
        let (a, b) = (&pairs[1], &pairs[2]);
        assert!((a.lambda - 0.3).abs() < 1e-9 && (b.lambda - 0.3).abs() < 1e-9);
        assert!(linalg::collinearity(&a.r, &b.r) < 1.0 - 1e-6);
        for p in &pairs {
            assert!(eigen_residual(&sys, &v, p.lambda, &p.r).unwrap() < 1e-9);
        }
    }

    #[test]
    fn nontrivial_vectors_have_unit_stress() {
        let sys = build_system(SystemKind::E5, &params()).unwrap();
        let pairs = speeds_generic(&sys, &[2.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        for p in pairs.iter().filter(|p| p.lambda.abs() > 1e-6) {
            assert!((p.r[3] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn tracking_picks_nearest() {
        let sys = build_system(SystemKind::E3, &params()).unwrap();
        let got = track_eigenvalue(&sys, &[1.0, 0.0, 0.0], 1.3).unwrap();
        assert!((got - 2f64.sqrt()).abs() < 1e-12);
    }
}
