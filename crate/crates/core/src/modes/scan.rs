//! Sign scans of the nonlinearity coefficient over a `(tau, theta)` grid.

use alloc::vec::Vec;

use super::lagrangian::{pi0_report, NonlinearityCoefficients};
use super::{Branch, Family};
use crate::models::FluidParams;
use crate::Result;

/// Crossings are refined until the bracket is narrower than this (relative to `tau`).
pub const CROSSING_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub tau: f64,
    pub theta: f64,
    pub lambda: f64,
    pub n_exact: f64,
    pub n_reduced: f64,
    /// Sign of `n_exact`: -1, 0 or 1.
    pub sign: i8,
}

/// A sign change of `N` between two neighbouring `tau` values at fixed `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub theta: f64,
    pub tau: f64,
    /// True when the crossing is of the reduced form rather than the exact one.
    pub reduced: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DegeneracyReport {
    pub points: Vec<ScanPoint>,
    pub crossings: Vec<Crossing>,
}

impl DegeneracyReport {
    pub fn exact_crossings(&self) -> impl Iterator<Item = &Crossing> {
        self.crossings.iter().filter(|c| !c.reduced)
    }
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

fn evaluate(params: &FluidParams, tau: f64, theta: f64, family: Family, branch: Branch) -> Result<ScanPoint> {
    let report = pi0_report(params, tau, theta)?;
    let lambda = report.speed(family, branch);
    let reduced = NonlinearityCoefficients::reduced(params, tau, theta)?;
    let n_exact = report.coefficients.evaluate(report.lam_star_sq, lambda);
    Ok(ScanPoint {
        tau,
        theta,
        lambda,
        n_exact,
        n_reduced: reduced.evaluate(report.lam_star_sq, lambda),
        sign: sign(n_exact),
    })
}

fn refine<F>(mut f: F, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let s_lo = sign(f(lo)?);
    while hi - lo > CROSSING_TOL * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if sign(f(mid)?) == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Evaluates `N` for the selected mode on every grid point (theta-major, then
/// tau in the given order) and bisects each sign change between consecutive
/// `tau` values. An empty grid yields an empty report.
pub fn degeneracy_scan(
    params: &FluidParams,
    taus: &[f64],
    thetas: &[f64],
    family: Family,
    branch: Branch,
) -> Result<DegeneracyReport> {
    params.delta()?;
    let mut out = DegeneracyReport::default();
    for &theta in thetas {
        let row: Vec<ScanPoint> = taus
            .iter()
            .map(|&tau| evaluate(params, tau, theta, family, branch))
            .collect::<Result<_>>()?;
        for pair in row.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let (lo, hi) = if a.tau < b.tau { (a.tau, b.tau) } else { (b.tau, a.tau) };
            if sign(a.n_exact) * sign(b.n_exact) < 0 {
                let tau = refine(|t| Ok(evaluate(params, t, theta, family, branch)?.n_exact), lo, hi)?;
                out.crossings.push(Crossing { theta, tau, reduced: false });
            }
            if sign(a.n_reduced) * sign(b.n_reduced) < 0 {
                let tau = refine(|t| Ok(evaluate(params, t, theta, family, branch)?.n_reduced), lo, hi)?;
                out.crossings.push(Crossing { theta, tau, reduced: true });
            }
        }
        out.points.extend(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> FluidParams {
        FluidParams::new(1.0, 1.5, 1.0, 1.0)
            .unwrap()
            .with_heat_conduction(1.0, 1.0)
            .unwrap()
    }

    #[test]
    fn empty_grid() {
        let r = degeneracy_scan(&params(), &[], &[1.0], Family::Fast, Branch::Plus).unwrap();
        assert!(r.points.is_empty() && r.crossings.is_empty());
        let r = degeneracy_scan(&params(), &[1.0], &[], Family::Fast, Branch::Plus).unwrap();
        assert_eq!(r, DegeneracyReport::default());
    }

    #[test]
    fn fast_plus_positive_on_small_tau() {
        let taus: Vec<f64> = (1..=20).map(|i| 0.05 * i as f64).collect();
        let r = degeneracy_scan(&params(), &taus, &[0.5, 1.0, 2.0], Family::Fast, Branch::Plus).unwrap();
        assert_eq!(r.points.len(), 60);
        assert!(r.points.iter().all(|p| p.sign == 1));
        assert_eq!(r.exact_crossings().count(), 0);
    }

    #[test]
    fn minus_branch_flips_sign() {
        let plus = degeneracy_scan(&params(), &[0.7], &[1.0], Family::Slow, Branch::Plus).unwrap();
        let minus = degeneracy_scan(&params(), &[0.7], &[1.0], Family::Slow, Branch::Minus).unwrap();
        assert_eq!(plus.points[0].n_exact, -minus.points[0].n_exact);
    }

    #[test]
    fn requires_heat_conduction() {
        let p = FluidParams::new(1.0, 1.5, 1.0, 1.0).unwrap();
        assert!(degeneracy_scan(&p, &[1.0], &[1.0], Family::Fast, Branch::Plus).is_err());
    }
}
