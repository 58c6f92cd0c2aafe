//! `ruggeri scan`: sign of the Lagrangian nonlinearity coefficient over a
//! `(tau, theta)` grid, or the small-`tau` threshold per temperature.

use rayon::prelude::*;
use ruggeri_core::models::FluidParams;
use ruggeri_core::modes::{
    degeneracy_scan, find_tau_threshold, pi0_report, tau_threshold_bisect, Crossing, ModeLabel,
};

use crate::config::Config;
use crate::csv::{num, Table};
use crate::error::{CliError, Result};
use crate::setup;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum What {
    Sign,
    Threshold,
}

impl std::str::FromStr for What {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sign" => Ok(What::Sign),
            "threshold" => Ok(What::Threshold),
            other => Err(format!("unknown scan `{other}` (expected sign or threshold)")),
        }
    }
}

/// `n` evenly spaced points on `[lo, hi]`; a single point is `lo`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Either an explicit list `<name>s` or a range `<name>_min`, `<name>_max`, `<name>_points`.
fn axis(cfg: &mut Config, name: &str, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    let list = cfg.list("scan", &format!("{name}s"))?;
    let lo = cfg.get_or("scan", &format!("{name}_min"), lo)?;
    let hi = cfg.get_or("scan", &format!("{name}_max"), hi)?;
    let n = cfg.get_or("scan", &format!("{name}_points"), n)?;
    let values = list.unwrap_or_else(|| linspace(lo, hi, n));
    if values.is_empty() {
        return Err(CliError::config(format!("scan axis `{name}` is empty")));
    }
    if let Some(x) = values.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(CliError::config(format!("scan axis `{name}` has non-positive value {x}")));
    }
    Ok(values)
}

#[derive(Debug)]
pub struct ScanOutput {
    pub table: Table,
    pub crossings: Vec<Crossing>,
}

fn sign_scan(p: &FluidParams, taus: &[f64], thetas: &[f64], label: ModeLabel) -> Result<ScanOutput> {
    let (family, branch) = setup::mode(label)?;
    let mut table = Table::new(&[
        "tau",
        "theta",
        "lambda_fast",
        "lambda_slow",
        "n_fast_plus",
        "n_fast_minus",
        "n_slow_plus",
        "n_slow_minus",
        "n_selected",
        "n_reduced_selected",
        "sign",
    ]);
    // One task per temperature; collect keeps the theta-major order.
    let rows = thetas
        .par_iter()
        .map(|&theta| -> Result<_> {
            let report = degeneracy_scan(p, taus, &[theta], family, branch)?;
            let mut lines = Vec::with_capacity(taus.len());
            for pt in &report.points {
                let rep = pi0_report(p, pt.tau, pt.theta)?;
                let (fast, slow) = (rep.roots.1.sqrt(), rep.roots.0.sqrt());
                let n = |l: f64| rep.coefficients.evaluate(rep.lam_star_sq, l);
                let mut f: Vec<String> = [pt.tau, pt.theta, fast, slow, n(fast), n(-fast), n(slow), n(-slow)]
                    .map(num)
                    .to_vec();
                f.extend([num(pt.n_exact), num(pt.n_reduced), pt.sign.to_string()]);
                lines.push(f);
            }
            Ok((lines, report.crossings))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut crossings = Vec::new();
    for (lines, c) in rows {
        for l in lines {
            table.row(&l);
        }
        crossings.extend(c);
    }
    Ok(ScanOutput { table, crossings })
}

fn threshold_scan(p: &FluidParams, thetas: &[f64], tol: f64) -> Result<ScanOutput> {
    let mut table = Table::new(&["theta", "tau_max_closed", "tau_max_bisect", "abs_diff"]);
    let rows = thetas
        .par_iter()
        .map(|&theta| -> Result<[f64; 4]> {
            let closed = find_tau_threshold(p, theta)?;
            let bisect = tau_threshold_bisect(p, theta, tol)?;
            let diff = if closed == bisect { 0.0 } else { (closed - bisect).abs() };
            Ok([theta, closed, bisect, diff])
        })
        .collect::<Result<Vec<_>>>()?;
    for r in rows {
        table.numbers(&r);
    }
    Ok(ScanOutput {
        table,
        crossings: Vec::new(),
    })
}

pub fn scan(cfg: &mut Config) -> Result<ScanOutput> {
    let (kind, p) = setup::system(cfg)?;
    if !kind.has_heat_flux() {
        return Err(CliError::config(format!(
            "scans need a heat-conducting system (l5 or e5), got {kind}"
        )));
    }
    let what: What = cfg.get_or("scan", "what", What::Sign)?;
    let thetas = axis(cfg, "theta", 1.0, 1.0, 1)?;
    match what {
        What::Sign => {
            let taus = axis(cfg, "tau", 0.1, 1.0, 10)?;
            let label = cfg.get_or("scan", "mode", ModeLabel::FastPlus)?;
            sign_scan(&p, &taus, &thetas, label)
        }
        What::Threshold => {
            let tol = cfg.get_or("scan", "bisect_tol", 1e-12)?;
            if !(tol > 0.0) {
                return Err(CliError::config("scan.bisect_tol must be positive"));
            }
            threshold_scan(&p, &thetas, tol)
        }
    }
}
