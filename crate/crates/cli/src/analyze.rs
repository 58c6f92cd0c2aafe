//! `ruggeri analyze`: per-mode characteristic data at one state, every
//! closed form checked against its numeric oracle.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use ruggeri_core::models::{build_system, FluidParams, StateE3, StateE4, SystemKind};
use ruggeri_core::modes::oracle::{fd_gnl, fd_nonlinearity_l5, residual};
use ruggeri_core::modes::{
    eigvec_e4_equilibrium, eigvec_l5_equilibrium, find_tau_threshold, pi0_report, speed_derivative_l5,
    speeds_e3, speeds_e4, speeds_generic, tau_threshold_bisect, Branch, Family, ModeLabel, Pi0Report,
};
use ruggeri_core::QuasilinearSystem;

use crate::csv::{num, Table};
use crate::error::{CliError, Result};
use crate::setup;

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// System: e3, e4, e5 or l5.
    #[arg(long)]
    kind: SystemKind,
    #[arg(long = "R")]
    r: f64,
    #[arg(long)]
    c: f64,
    #[arg(long)]
    eps: f64,
    /// Viscosity; it does not enter the characteristic analysis.
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Heat-flux retardation (e5, l5).
    #[arg(long)]
    delta: Option<f64>,
    /// Heat conductivity; it does not enter the characteristic analysis.
    #[arg(long)]
    chi: Option<f64>,
    /// Density (Eulerian kinds).
    #[arg(long)]
    rho: Option<f64>,
    /// Specific volume (l5).
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    u: f64,
    /// Temperature (all kinds but e3).
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long, default_value_t = 0.0)]
    q: f64,
    /// Relative tolerance between closed-form and numeric speeds.
    #[arg(long, default_value_t = 1e-9)]
    speed_tol: f64,
    /// Bound on `|(A1 - lambda A0) r| / |r|`.
    #[arg(long, default_value_t = 1e-9)]
    residual_tol: f64,
    /// Relative tolerance of `r . grad lambda` against the finite-difference oracle.
    #[arg(long, default_value_t = 1e-5)]
    gnl_tol: f64,
    /// Relative tolerance of `N` against the determinant finite-difference oracle.
    #[arg(long, default_value_t = 1e-4)]
    n_tol: f64,
    /// Also write the table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug)]
struct Row {
    label: ModeLabel,
    lambda: f64,
    lambda_generic: f64,
    closed_speed: bool,
    mu: Option<f64>,
    r: Vec<f64>,
    gnl: Option<f64>,
    gnl_fd: f64,
    residual: f64,
    /// `(N, N reduced, N from the determinant oracle)` for the Lagrangian model.
    n: Option<(f64, f64, f64)>,
    failures: Vec<String>,
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn missing(flag: &str, kind: SystemKind) -> CliError {
    CliError::Usage(format!("--{flag} is required for --kind {kind}"))
}

fn state(a: &AnalyzeArgs) -> Result<Vec<f64>> {
    let theta = || a.theta.ok_or_else(|| missing("theta", a.kind));
    let rho = || a.rho.ok_or_else(|| missing("rho", a.kind));
    Ok(match a.kind {
        SystemKind::E3 => vec![rho()?, a.u, a.sigma],
        SystemKind::E4 => vec![rho()?, a.u, theta()?, a.sigma],
        SystemKind::E5 => vec![rho()?, a.u, theta()?, a.sigma, a.q],
        SystemKind::L5 => vec![a.tau.ok_or_else(|| missing("tau", a.kind))?, a.u, theta()?, a.sigma, a.q],
    })
}

fn params(a: &AnalyzeArgs) -> Result<FluidParams> {
    if a.kind.has_heat_flux() && a.delta.is_none() {
        return Err(missing("delta", a.kind));
    }
    // chi only scales the source, so a placeholder is harmless here.
    let heat = match a.delta {
        Some(d) => (Some(d), Some(a.chi.unwrap_or(1.0))),
        None => (None, a.chi),
    };
    setup::params(a.kind, a.r, a.c, a.eta, a.eps, heat)
}

fn equilibrium(kind: SystemKind, v: &[f64]) -> bool {
    v[kind.sigma_index()] == 0.0 && (!kind.has_heat_flux() || v[4] == 0.0)
}

/// Closed-form speeds in ascending order, where one exists for this state.
fn closed_speeds(kind: SystemKind, p: &FluidParams, v: &[f64], pi0: Option<&Pi0Report>) -> Result<Option<Vec<f64>>> {
    Ok(match kind {
        SystemKind::E3 => Some(speeds_e3(p, &StateE3::from_slice(v)?)?.iter().map(|m| m.lambda).collect()),
        SystemKind::E4 => Some(speeds_e4(p, &StateE4::from_slice(v)?)?.iter().map(|m| m.lambda).collect()),
        SystemKind::E5 => pi0.map(|r| r.speeds().iter().map(|s| v[1] + s / v[0]).collect()),
        SystemKind::L5 => pi0.map(|r| r.speeds().to_vec()),
    })
}

fn family_branch(label: ModeLabel) -> Option<(Family, Branch)> {
    setup::mode(label).ok()
}

fn build_rows(a: &AnalyzeArgs, p: &FluidParams, sys: &QuasilinearSystem, v: &[f64]) -> Result<(Vec<Row>, Option<Pi0Report>)> {
    let kind = a.kind;
    let eq = equilibrium(kind, v);
    let pi0 = match kind {
        SystemKind::E5 if eq => Some(pi0_report(p, 1.0 / v[0], v[2])?),
        SystemKind::L5 if eq => Some(pi0_report(p, v[0], v[2])?),
        _ => None,
    };
    let generic = speeds_generic(sys, v)?;
    let closed = closed_speeds(kind, p, v, pi0.as_ref())?;
    let labels = ModeLabel::ascending(kind);

    let mut rows = Vec::with_capacity(generic.len());
    for (i, pair) in generic.iter().enumerate() {
        let label = labels[i];
        let lambda = closed.as_ref().map_or(pair.lambda, |c| c[i]);
        let mut r = pair.r.clone();
        let mut gnl = (label == ModeLabel::Contact).then_some(0.0);
        let mut n = None;
        match (kind, family_branch(label)) {
            (SystemKind::E4, Some((_, branch))) if eq => {
                let m = eigvec_e4_equilibrium(p, &StateE4::from_slice(v)?, branch)?;
                r = m.r;
                gnl = m.gnl;
            }
            (SystemKind::L5, Some((family, branch))) if eq => {
                let rep = pi0.as_ref().expect("equilibrium report");
                r = eigvec_l5_equilibrium(p, v[0], v[2], lambda)?;
                gnl = Some(speed_derivative_l5(p, v[0], v[2], family, branch)?);
                let exact = rep.coefficients.evaluate(rep.lam_star_sq, lambda);
                let reduced = ruggeri_core::modes::nonlinearity_reduced_form(p, v[0], v[2], family, branch)?;
                n = Some((exact, reduced, fd_nonlinearity_l5(p, v, lambda, &r)?));
            }
            _ => {}
        }

        let mut row = Row {
            label,
            lambda,
            lambda_generic: pair.lambda,
            closed_speed: closed.is_some(),
            mu: kind.is_eulerian().then(|| v[1] - lambda),
            gnl_fd: fd_gnl(sys, v, lambda, &r)?,
            residual: residual(sys, v, lambda, &r)?,
            r,
            gnl,
            n,
            failures: Vec::new(),
        };
        check(a, &mut row);
        rows.push(row);
    }
    Ok((rows, pi0))
}

fn check(a: &AnalyzeArgs, row: &mut Row) {
    let err = (row.lambda - row.lambda_generic).abs() / row.lambda.abs().max(1.0);
    if row.closed_speed && err > a.speed_tol {
        row.failures.push(format!("speed {err:.1e}"));
    }
    if !(row.residual <= a.residual_tol) {
        row.failures.push(format!("residual {:.1e}", row.residual));
    }
    if let Some(g) = row.gnl {
        let err = if g == 0.0 { row.gnl_fd.abs() } else { relative(g, row.gnl_fd) };
        if !(err <= a.gnl_tol) {
            row.failures.push(format!("gnl {err:.1e}"));
        }
    }
    if let Some((exact, _, fd)) = row.n {
        let err = relative(exact, fd);
        if !(err <= a.n_tol) {
            row.failures.push(format!("N {err:.1e}"));
        }
    }
}

/// Four decimals, or a bare integer when the value is one.
fn short(x: f64) -> String {
    if (x - x.round()).abs() < 1e-12 {
        format!("{}", x.round() as i64)
    } else {
        format!("{x:.4}")
    }
}

pub fn ordering_line(rep: &Pi0Report) -> String {
    let (lo, hi) = rep.roots;
    format!(
        "ordering: 0 < {} < {} < {} < {} {}",
        short(lo),
        short(rep.lam_star_sq),
        short(rep.lam_2star_sq),
        short(hi),
        if rep.ordering_holds() { "OK" } else { "VIOLATED" }
    )
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"))
}

fn render(kind: SystemKind, rows: &[Row]) -> String {
    let names = kind.component_names().join(", ");
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<8} {:>12} {:>12} {:>12} {:>12} {:>9}  {:<44} {}",
        "mode", "lambda", "mu", "gnl", "gnl_fd", "residual", format!("r = ({names})"), "check"
    );
    for row in rows {
        let r: Vec<String> = row.r.iter().map(|x| format!("{x:.6}")).collect();
        let verdict = if row.failures.is_empty() {
            "ok".to_string()
        } else {
            format!("FAIL {}", row.failures.join("; "))
        };
        let _ = writeln!(
            out,
            "{:<8} {:>12.6} {:>12} {:>12} {:>12.6} {:>9.1e}  {:<44} {}",
            row.label.as_str(),
            row.lambda,
            opt(row.mu),
            opt(row.gnl),
            row.gnl_fd,
            row.residual,
            format!("({})", r.join(", ")),
            verdict
        );
        if let Some((exact, reduced, fd)) = row.n {
            let _ = writeln!(out, "{:<8} N = {exact:.6e}  N_fd = {fd:.6e}  N_reduced = {reduced:.6e}", "");
        }
    }
    out
}

fn csv(kind: SystemKind, rows: &[Row]) -> Table {
    let mut header = vec!["mode".to_string(), "lambda".into(), "lambda_generic".into(), "mu".into()];
    header.extend(kind.component_names().iter().map(|n| format!("r_{n}")));
    header.extend(["gnl", "gnl_fd", "residual", "n", "n_reduced", "n_fd", "ok"].map(String::from));
    let mut t = Table::new(&header);
    let nan = f64::NAN;
    for row in rows {
        let mut f = vec![
            row.label.as_str().to_string(),
            num(row.lambda),
            num(row.lambda_generic),
            num(row.mu.unwrap_or(nan)),
        ];
        f.extend(row.r.iter().map(|x| num(*x)));
        let (n, nr, nfd) = row.n.unwrap_or((nan, nan, nan));
        f.extend([row.gnl.unwrap_or(nan), row.gnl_fd, row.residual, n, nr, nfd].map(num));
        f.push(row.failures.is_empty().to_string());
        t.row(&f);
    }
    t
}

pub fn run(a: &AnalyzeArgs) -> Result<()> {
    let p = params(a)?;
    let v = state(a)?;
    let sys = build_system(a.kind, &p)?;
    sys.check_state(&v)?;
    let (rows, pi0) = build_rows(a, &p, &sys, &v)?;

    let mut report = format!("{} at ({}) = ({})\n", a.kind, a.kind.component_names().join(", "), {
        let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        s.join(", ")
    });
    report.push_str(&render(a.kind, &rows));
    if let (SystemKind::L5, Some(rep)) = (a.kind, pi0.as_ref()) {
        report.push_str(&ordering_line(rep));
        report.push('\n');
        let closed = find_tau_threshold(&p, rep.theta)?;
        let bisect = tau_threshold_bisect(&p, rep.theta, 1e-12)?;
        let _ = writeln!(report, "tau_max_closed={}, tau_max_bisect={}", num(closed), num(bisect));
    }
    print!("{report}");
    if let Some(path) = &a.csv {
        csv(a.kind, &rows).save(path)?;
    }

    let failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.failures.is_empty())
        .map(|r| format!("{} ({})", r.label, r.failures.join("; ")))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Oracle(failed.join(", ")))
    }
}
