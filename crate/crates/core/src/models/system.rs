use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::law::{Cell, Law, MAX_VARS};
use super::{FluidParams, SystemKind};
use crate::{linalg, Error, Result};

/// `A0(V) V_t + A1(V) V_x = G(V)` in primitive variables for one system kind.
///
/// The pencil `A1 - lambda A0` carries the characteristic speeds. For `E4`
/// its determinant equals the closed-form `det M(V, mu)` with `mu = u - lambda`
/// exactly, since `M` is obtained from the pencil by adding multiples of rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasilinearSystem {
    law: Law,
    params: FluidParams,
}

pub fn build_system(kind: SystemKind, params: &FluidParams) -> Result<QuasilinearSystem> {
    QuasilinearSystem::new(kind, params)
}

impl QuasilinearSystem {
    pub fn new(kind: SystemKind, params: &FluidParams) -> Result<Self> {
        Ok(QuasilinearSystem {
            law: Law::new(kind, params)?,
            params: *params,
        })
    }

    pub fn kind(&self) -> SystemKind {
        self.law.kind()
    }

    pub fn dim(&self) -> usize {
        self.law.dim()
    }

    pub fn params(&self) -> &FluidParams {
        &self.params
    }

    pub fn law(&self) -> &Law {
        &self.law
    }

    /// Rows holding a bare derivative (`u_x`, `theta_x`) that is not part of the flux.
    pub fn nonconservative_rows(&self) -> Vec<usize> {
        self.law
            .nonconservative_terms()
            .iter()
            .map(|&(row, _)| row)
            .collect()
    }

    fn cell(&self, v: &[f64]) -> Result<Cell> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::precondition(format!(
                "{} state has {n} components, got {}",
                self.kind(),
                v.len()
            )));
        }
        let mut cell = [0.0; MAX_VARS];
        cell[..n].copy_from_slice(v);
        self.law
            .admissible(&cell)
            .map_err(|(what, value)| Error::Domain { what, value })?;
        Ok(cell)
    }

    pub fn check_state(&self, v: &[f64]) -> Result<()> {
        self.cell(v).map(|_| ())
    }

    pub fn a0(&self, v: &[f64]) -> Result<DMatrix<f64>> {
        let s = self.cell(v)?;
        let FluidParams { c, eps, .. } = self.params;
        let m = match self.kind() {
            SystemKind::E3 => {
                let [rho, u, sigma, ..] = s;
                DMatrix::from_row_slice(
                    3,
                    3,
                    &[
                        1.0, 0.0, 0.0, //
                        u, rho, 0.0, //
                        eps * sigma, 0.0, eps * rho,
                    ],
                )
            }
            SystemKind::E4 | SystemKind::E5 => {
                let [rho, u, theta, sigma, q] = s;
                let t2 = theta * theta;
                let mut m = DMatrix::zeros(self.dim(), self.dim());
                m[(0, 0)] = 1.0;
                m[(1, 0)] = u;
                m[(1, 1)] = rho;
                m[(2, 0)] = c * theta + 0.5 * u * u;
                m[(2, 1)] = rho * u;
                m[(2, 2)] = rho * c;
                m[(3, 0)] = eps * sigma / theta;
                m[(3, 2)] = -eps * rho * sigma / t2;
                m[(3, 3)] = eps * rho / theta;
                if self.kind() == SystemKind::E5 {
                    let delta = self.params.delta()?;
                    m[(4, 0)] = delta * q / t2;
                    m[(4, 2)] = -2.0 * delta * rho * q / (t2 * theta);
                    m[(4, 4)] = delta * rho / t2;
                }
                m
            }
            SystemKind::L5 => {
                let [_, u, theta, sigma, q] = s;
                let delta = self.params.delta()?;
                let t2 = theta * theta;
                DMatrix::from_row_slice(
                    5,
                    5,
                    &[
                        1.0, 0.0, 0.0, 0.0, 0.0, //
                        0.0, 1.0, 0.0, 0.0, 0.0, //
                        0.0, u, c, 0.0, 0.0, //
                        0.0, 0.0, -eps * sigma / t2, eps / theta, 0.0, //
                        0.0, 0.0, -2.0 * delta * q / (t2 * theta), 0.0, delta / t2,
                    ],
                )
            }
        };
        Ok(m)
    }

    pub fn a1(&self, v: &[f64]) -> Result<DMatrix<f64>> {
        let s = self.cell(v)?;
        let FluidParams { r, c, eps, .. } = self.params;
        let m = match self.kind() {
            SystemKind::E3 => {
                let [rho, u, sigma, ..] = s;
                DMatrix::from_row_slice(
                    3,
                    3,
                    &[
                        u, rho, 0.0, //
                        u * u + r, 2.0 * rho * u, 1.0, //
                        eps * u * sigma, eps * rho * sigma + 1.0, eps * rho * u,
                    ],
                )
            }
            SystemKind::E4 | SystemKind::E5 => {
                let [rho, u, theta, sigma, q] = s;
                let t2 = theta * theta;
                let p = r * rho * theta;
                let energy = rho * (c * theta + 0.5 * u * u);
                let mut m = DMatrix::zeros(self.dim(), self.dim());
                m[(0, 0)] = u;
                m[(0, 1)] = rho;
                m[(1, 0)] = u * u + r * theta;
                m[(1, 1)] = 2.0 * rho * u;
                m[(1, 2)] = r * rho;
                m[(1, 3)] = 1.0;
                m[(2, 0)] = (c * theta + 0.5 * u * u + r * theta) * u;
                m[(2, 1)] = energy + p + sigma + rho * u * u;
                m[(2, 2)] = (rho * c + r * rho) * u;
                m[(2, 3)] = u;
                m[(3, 0)] = eps * u * sigma / theta;
                m[(3, 1)] = eps * rho * sigma / theta + 1.0;
                m[(3, 2)] = -eps * rho * u * sigma / t2;
                m[(3, 3)] = eps * rho * u / theta;
                if self.kind() == SystemKind::E5 {
                    let delta = self.params.delta()?;
                    m[(2, 4)] = 1.0;
                    m[(4, 0)] = delta * u * q / t2;
                    m[(4, 1)] = delta * rho * q / t2;
                    m[(4, 2)] = -2.0 * delta * rho * u * q / (t2 * theta) + 1.0;
                    m[(4, 4)] = delta * rho * u / t2;
                }
                m
            }
            SystemKind::L5 => {
                let [tau, u, theta, sigma, _] = s;
                let p = r * theta / tau;
                let p_tau = -r * theta / (tau * tau);
                let p_theta = r / tau;
                DMatrix::from_row_slice(
                    5,
                    5,
                    &[
                        0.0, -1.0, 0.0, 0.0, 0.0, //
                        p_tau, 0.0, p_theta, 1.0, 0.0, //
                        u * p_tau, p + sigma, u * p_theta, u, 1.0, //
                        0.0, 1.0, 0.0, 0.0, 0.0, //
                        0.0, 0.0, 1.0, 0.0, 0.0,
                    ],
                )
            }
        };
        Ok(m)
    }

    /// `A1(V) - lambda A0(V)`.
    pub fn pencil(&self, v: &[f64], lambda: f64) -> Result<DMatrix<f64>> {
        Ok(self.a1(v)? - self.a0(v)? * lambda)
    }

    pub fn source(&self, v: &[f64]) -> Result<Vec<f64>> {
        let s = self.cell(v)?;
        Ok(self.law.source(&s)[..self.dim()].to_vec())
    }

    /// Primitive to evolved (conserved) vector.
    pub fn to_conserved(&self, v: &[f64]) -> Result<Vec<f64>> {
        let s = self.cell(v)?;
        Ok(self.law.to_conserved(&s)[..self.dim()].to_vec())
    }

    /// Evolved vector back to primitives; fails on `rho <= 0` / `theta <= 0`.
    pub fn to_primitive(&self, w: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if w.len() != n {
            return Err(Error::precondition(format!(
                "{} conserved vector has {n} components, got {}",
                self.kind(),
                w.len()
            )));
        }
        let mut cell = [0.0; MAX_VARS];
        cell[..n].copy_from_slice(w);
        self.law
            .to_primitive(&cell)
            .map(|v| v[..n].to_vec())
            .map_err(|(what, value)| Error::Reconstruction {
                cell: 0,
                what,
                value,
            })
    }

    /// 2-norm condition number of `A0(V)`; errors when `A0` is numerically singular.
    pub fn a0_condition(&self, v: &[f64]) -> Result<f64> {
        let cond = linalg::condition_number(&self.a0(v)?);
        if cond.is_finite() && cond < 1e14 {
            Ok(cond)
        } else {
            Err(Error::Singular("A0 is not invertible at this state"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn heat_params() -> FluidParams {
        FluidParams::new(1.3, 0.8, 2.0, 0.6)
            .unwrap()
            .with_heat_conduction(1.7, 0.9)
            .unwrap()
    }

    fn sample_state(kind: SystemKind) -> Vec<f64> {
        match kind {
            SystemKind::E3 => vec![1.4, 0.3, -0.2],
            SystemKind::E4 => vec![1.4, 0.3, 0.9, -0.2],
            SystemKind::E5 => vec![1.4, 0.3, 0.9, -0.2, 0.15],
            SystemKind::L5 => vec![0.7, 0.3, 0.9, -0.2, 0.15],
        }
    }

    /// Central-difference Jacobian of a cell map.
    fn jacobian(n: usize, v: &[f64], f: impl Fn(&Cell) -> Cell) -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(n, n);
        for j in 0..n {
            let h = 1e-6 * (1.0 + v[j].abs());
            let mut plus = [0.0; MAX_VARS];
            let mut minus = [0.0; MAX_VARS];
            plus[..n].copy_from_slice(v);
            minus[..n].copy_from_slice(v);
            plus[j] += h;
            minus[j] -= h;
            let (fp, fm) = (f(&plus), f(&minus));
            for i in 0..n {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        jac
    }

    #[test]
    fn matrices_are_jacobians_of_the_law() {
        let params = heat_params();
        for kind in [SystemKind::E3, SystemKind::E4, SystemKind::E5, SystemKind::L5] {
            let sys = build_system(kind, &params).unwrap();
            let v = sample_state(kind);
            let n = sys.dim();
            let law = *sys.law();
            let a0 = jacobian(n, &v, |c| law.to_conserved(c));
            let mut a1 = jacobian(n, &v, |c| law.flux(c));
            for &(row, var) in law.nonconservative_terms() {
                a1[(row, var)] += 1.0;
            }
            let d0 = (&a0 - sys.a0(&v).unwrap()).amax();
            let d1 = (&a1 - sys.a1(&v).unwrap()).amax();
            assert!(d0 < 1e-8, "{kind}: A0 mismatch {d0}");
            assert!(d1 < 1e-8, "{kind}: A1 mismatch {d1}");
        }
    }

    #[test]
    fn l5_source_zero_at_equilibrium() {
        let sys = build_system(SystemKind::L5, &heat_params()).unwrap();
        assert_eq!(
            sys.source(&[0.8, -0.4, 1.1, 0.0, 0.0]).unwrap(),
            vec![0.0; 5]
        );
    }

    #[test]
    fn e5_requires_heat_parameters() {
        let p = FluidParams::new(1.0, 1.5, 1.0, 1.0).unwrap();
        assert!(matches!(
            build_system(SystemKind::E5, &p),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn e4_pencil_singular_at_contact_speed() {
        let p = FluidParams::new(1.0, 1.5, 1.0, 1.0).unwrap();
        let sys = build_system(SystemKind::E4, &p).unwrap();
        let d = linalg::determinant(&sys.pencil(&[1.0, 0.0, 1.0, 0.0], 0.0).unwrap());
        assert!(d.abs() < 1e-14, "{d}");
    }

    #[test]
    fn reconstruction_error_names_the_component() {
        let p = FluidParams::new(1.0, 1.5, 1.0, 1.0).unwrap();
        let sys = build_system(SystemKind::E4, &p).unwrap();
        assert!(matches!(
            sys.to_primitive(&[1.0, 3.0, 1.0, 0.0]),
            Err(Error::Reconstruction { what: "theta", .. })
        ));
        assert!(matches!(
            sys.to_conserved(&[1.0, 0.0, -1.0, 0.0]),
            Err(Error::Domain { what: "theta", .. })
        ));
    }
}
