//! Pointwise kernels of the balance laws on fixed-size cell vectors.
//!
//! Every system is written as
//!
//! ```text
//! U(V)_t + F(V)_x + sum_k e_row(k) * (V_var(k))_x = G(V)
//! ```
//!
//! where `F` is the conservative flux and the second term collects the bare
//! derivatives (`u_x` in the stress equation, `theta_x` in the heat-flux
//! equation) listed by [`Law::nonconservative_terms`]. Vectors are padded to
//! [`MAX_VARS`]; only the first `dim()` entries are meaningful.

use super::{FluidParams, SystemKind};
use crate::math::{abs, sqrt};
use crate::Result;

pub const MAX_VARS: usize = 5;

/// One state vector (primitive or conserved), padded with zeros.
pub type Cell = [f64; MAX_VARS];

/// `(row, primitive index)`: row `row` carries `+ d/dx V[index]`.
pub type NonconservativeTerm = (usize, usize);

/// Parameter-resolved kernel for one system kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Law {
    kind: SystemKind,
    r: f64,
    c: f64,
    eta: f64,
    eps: f64,
    delta: f64,
    chi: f64,
}

impl Law {
    pub fn new(kind: SystemKind, params: &FluidParams) -> Result<Self> {
        params.validate(kind)?;
        let (delta, chi) = if kind.has_heat_flux() {
            (params.delta()?, params.chi()?)
        } else {
            (f64::NAN, f64::NAN)
        };
        Ok(Law {
            kind,
            r: params.r,
            c: params.c,
            eta: params.eta,
            eps: params.eps,
            delta,
            chi,
        })
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    pub fn nonconservative_terms(&self) -> &'static [NonconservativeTerm] {
        match self.kind {
            SystemKind::E3 => &[(2, 1)],
            SystemKind::E4 => &[(3, 1)],
            SystemKind::E5 | SystemKind::L5 => &[(3, 1), (4, 2)],
        }
    }

    /// `Err((name, value))` names the first component outside the domain.
    pub fn admissible(&self, v: &Cell) -> core::result::Result<(), (&'static str, f64)> {
        let check = |what, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err((what, x))
            }
        };
        match self.kind {
            SystemKind::E3 => check("rho", v[0]),
            SystemKind::E4 | SystemKind::E5 => {
                check("rho", v[0])?;
                check("theta", v[2])
            }
            SystemKind::L5 => {
                check("tau", v[0])?;
                check("theta", v[2])
            }
        }?;
        match v[..self.dim()].iter().find(|x| !x.is_finite()) {
            Some(&x) => Err(("state", x)),
            None => Ok(()),
        }
    }

    pub fn to_conserved(&self, v: &Cell) -> Cell {
        let (c, eps, delta) = (self.c, self.eps, self.delta);
        match self.kind {
            SystemKind::E3 => {
                let [rho, u, sigma, ..] = *v;
                [rho, rho * u, eps * rho * sigma, 0.0, 0.0]
            }
            SystemKind::E4 => {
                let [rho, u, theta, sigma, _] = *v;
                [
                    rho,
                    rho * u,
                    rho * (c * theta + 0.5 * u * u),
                    eps * rho * sigma / theta,
                    0.0,
                ]
            }
            SystemKind::E5 => {
                let [rho, u, theta, sigma, q] = *v;
                [
                    rho,
                    rho * u,
                    rho * (c * theta + 0.5 * u * u),
                    eps * rho * sigma / theta,
                    delta * rho * q / (theta * theta),
                ]
            }
            SystemKind::L5 => {
                let [tau, u, theta, sigma, q] = *v;
                [
                    tau,
                    u,
                    c * theta + 0.5 * u * u,
                    eps * sigma / theta,
                    delta * q / (theta * theta),
                ]
            }
        }
    }

    pub fn to_primitive(&self, w: &Cell) -> core::result::Result<Cell, (&'static str, f64)> {
        let (c, eps, delta) = (self.c, self.eps, self.delta);
        let positive = |what, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(x)
            } else {
                Err((what, x))
            }
        };
        let v = match self.kind {
            SystemKind::E3 => {
                let rho = positive("rho", w[0])?;
                [rho, w[1] / rho, w[2] / (eps * rho), 0.0, 0.0]
            }
            SystemKind::E4 | SystemKind::E5 => {
                let rho = positive("rho", w[0])?;
                let u = w[1] / rho;
                let theta = positive("theta", (w[2] / rho - 0.5 * u * u) / c)?;
                let sigma = w[3] * theta / (eps * rho);
                let q = if self.kind == SystemKind::E5 {
                    w[4] * theta * theta / (delta * rho)
                } else {
                    0.0
                };
                [rho, u, theta, sigma, q]
            }
            SystemKind::L5 => {
                let tau = positive("tau", w[0])?;
                let u = w[1];
                let theta = positive("theta", (w[2] - 0.5 * u * u) / c)?;
                [tau, u, theta, w[3] * theta / eps, w[4] * theta * theta / delta]
            }
        };
        match v[..self.dim()].iter().find(|x| !x.is_finite()) {
            Some(&x) => Err(("state", x)),
            None => Ok(v),
        }
    }

    /// Conservative flux `F(V)`; the bare derivative terms are not included.
    pub fn flux(&self, v: &Cell) -> Cell {
        let (r, c, eps, delta) = (self.r, self.c, self.eps, self.delta);
        match self.kind {
            SystemKind::E3 => {
                let [rho, u, sigma, ..] = *v;
                [
                    rho * u,
                    rho * u * u + r * rho + sigma,
                    eps * rho * u * sigma,
                    0.0,
                    0.0,
                ]
            }
            SystemKind::E4 | SystemKind::E5 => {
                let [rho, u, theta, sigma, q] = *v;
                let p = r * rho * theta;
                let energy = rho * (c * theta + 0.5 * u * u);
                let heat = if self.kind == SystemKind::E5 { q } else { 0.0 };
                [
                    rho * u,
                    rho * u * u + p + sigma,
                    (energy + p + sigma) * u + heat,
                    eps * rho * u * sigma / theta,
                    if self.kind == SystemKind::E5 {
                        delta * rho * u * q / (theta * theta)
                    } else {
                        0.0
                    },
                ]
            }
            SystemKind::L5 => {
                let [tau, u, theta, sigma, q] = *v;
                let p = r * theta / tau;
                [-u, p + sigma, (p + sigma) * u + q, 0.0, 0.0]
            }
        }
    }

    /// Relaxation source `G(V)`; zero exactly at equilibrium.
    pub fn source(&self, v: &Cell) -> Cell {
        let (eta, chi) = (self.eta, self.chi);
        match self.kind {
            SystemKind::E3 => [0.0, 0.0, -v[2] / eta, 0.0, 0.0],
            SystemKind::E4 => [0.0, 0.0, 0.0, -v[3] / eta, 0.0],
            SystemKind::E5 => [0.0, 0.0, 0.0, -v[3] / eta, -v[4] / chi],
            SystemKind::L5 => {
                let tau = v[0];
                [0.0, 0.0, 0.0, -tau * v[3] / eta, -tau * v[4] / chi]
            }
        }
    }

    /// Shortest relaxation time of the source at `v`.
    pub fn relaxation_time(&self, v: &Cell) -> f64 {
        match self.kind {
            SystemKind::E3 => self.eps * v[0] * self.eta,
            SystemKind::E4 => self.eps * v[0] * self.eta / v[2],
            SystemKind::E5 => {
                let (rho, theta) = (v[0], v[2]);
                f64::min(
                    self.eps * rho * self.eta / theta,
                    self.delta * rho * self.chi / (theta * theta),
                )
            }
            SystemKind::L5 => {
                let (tau, theta) = (v[0], v[2]);
                f64::min(
                    self.eps * self.eta / (theta * tau),
                    self.delta * self.chi / (theta * theta * tau),
                )
            }
        }
    }

    /// Smallest and largest characteristic speed at `v` (contact speed included).
    ///
    /// Exact for `E3`/`E4`. For the heat-conducting kinds the nontrivial
    /// Lagrangian speeds are the roots of a quartic, located by Newton's
    /// method from a root bound; the Eulerian speeds follow from
    /// `lambda = u + tau * lambda_L`. If Newton does not settle the root bound
    /// itself is returned, which over-estimates the speed.
    pub fn speed_bounds(&self, v: &Cell) -> (f64, f64) {
        match self.kind {
            SystemKind::E3 => {
                let [rho, u, ..] = *v;
                let mu = sqrt(self.r + 1.0 / (self.eps * rho * rho));
                (u - mu, u + mu)
            }
            SystemKind::E4 => {
                let [rho, u, theta, sigma, _] = *v;
                let mu = sqrt(self.e4_mu_sq(rho, theta, sigma));
                (u - mu, u + mu)
            }
            SystemKind::E5 => {
                let [rho, u, theta, sigma, q] = *v;
                let tau = 1.0 / rho;
                let (lo, hi) = self.lagrangian_speed_bounds(tau, theta, sigma, q);
                (u + tau * lo, u + tau * hi)
            }
            SystemKind::L5 => {
                let [tau, _, theta, sigma, q] = *v;
                self.lagrangian_speed_bounds(tau, theta, sigma, q)
            }
        }
    }

    /// Spectral radius of the pencil at `v`.
    pub fn max_speed(&self, v: &Cell) -> f64 {
        let (lo, hi) = self.speed_bounds(v);
        f64::max(abs(lo), abs(hi))
    }

    /// Squared relative speed of the nontrivial `E4` modes, valid for any stress.
    pub(crate) fn e4_mu_sq(&self, rho: f64, theta: f64, sigma: f64) -> f64 {
        let (r, c, eps) = (self.r, self.c, self.eps);
        let rr = r * rho * theta + sigma;
        r * theta + theta / (eps * rho * rho) + rr * rr / (theta * rho * rho * c)
    }

    /// Coefficients `[a0, a1, a2, a3, a4]` of the quartic whose roots are the
    /// nontrivial Lagrangian speeds (the pencil determinant divided by `-lambda/theta^3`).
    pub(crate) fn lagrangian_quartic(&self, tau: f64, theta: f64, sigma: f64, q: f64) -> [f64; 5] {
        let (r, c, eps, delta) = (self.r, self.c, self.eps, self.delta);
        let tau2 = tau * tau;
        let a4 = c * delta * eps;
        let a3 = -2.0 * delta * eps * q / theta;
        let a2 = -(r * r * delta * eps * theta / tau2
            + r * c * delta * eps * theta / tau2
            + 2.0 * r * delta * eps * sigma / tau
            + c * delta * theta
            + delta * eps * sigma * sigma / theta
            + eps * theta * theta);
        let a1 = 2.0 * r * delta * eps * q / tau2 + 2.0 * delta * q;
        let theta3 = theta * theta * theta;
        let a0 = r * eps * theta3 / tau2 + theta3;
        [a0, a1, a2, a3, a4]
    }

    fn lagrangian_speed_bounds(&self, tau: f64, theta: f64, sigma: f64, q: f64) -> (f64, f64) {
        let a = self.lagrangian_quartic(tau, theta, sigma, q);
        let bound = fujiwara_bound(&a);
        let (lo_start, hi_start) = samuelson_interval(&a)
            .map(|(l, h)| (l.max(-bound), h.min(bound)))
            .unwrap_or((-bound, bound));
        let hi = newton_outer_root(&a, hi_start).unwrap_or(bound);
        let lo = newton_outer_root(&a, lo_start).unwrap_or(-bound);
        (f64::min(lo, 0.0), f64::max(hi, 0.0))
    }
}

/// Upper bound on the modulus of every root of `sum a[i] x^i`.
fn fujiwara_bound(a: &[f64; 5]) -> f64 {
    let lead = a[4];
    let t3 = abs(a[3] / lead);
    let t2 = sqrt(abs(a[2] / lead));
    let t1 = libm::cbrt(abs(a[1] / lead));
    let t0 = sqrt(sqrt(abs(a[0] / (2.0 * lead))));
    2.0 * t3.max(t2).max(t1).max(t0)
}

/// Interval holding every root of a quartic whose roots are all real:
/// mean `+-` `sqrt(3)` standard deviations, both read off the top coefficients.
fn samuelson_interval(a: &[f64; 5]) -> Option<(f64, f64)> {
    let mean = -a[3] / (4.0 * a[4]);
    let var = (a[3] * a[3] / (a[4] * a[4]) - 2.0 * a[2] / a[4]) / 4.0 - mean * mean;
    if !(var >= 0.0) {
        return None;
    }
    // Tiny widening so roundoff cannot put the start inside the outer root.
    let half = sqrt(3.0 * var) * (1.0 + 1e-12) + 1e-300;
    Some((mean - half, mean + half))
}

/// Newton iteration from outside the root set. With all roots real the
/// iterates move monotonically to the outermost root on the starting side.
fn newton_outer_root(a: &[f64; 5], start: f64) -> Option<f64> {
    let inward = -start.signum();
    let mut x = start;
    for _ in 0..200 {
        let p = (((a[4] * x + a[3]) * x + a[2]) * x + a[1]) * x + a[0];
        let dp = ((4.0 * a[4] * x + 3.0 * a[3]) * x + 2.0 * a[2]) * x + a[1];
        if dp == 0.0 || !dp.is_finite() {
            return None;
        }
        let step = p / dp;
        let next = x - step;
        let tol = 1e-14 * abs(next).max(1e-300);
        if abs(step) <= tol {
            return Some(next);
        }
        // Moving outward means the outer roots are complex.
        if (next - x) * inward < 0.0 {
            return None;
        }
        x = next;
    }
    None
}
