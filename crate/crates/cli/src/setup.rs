//! Mapping configuration sections onto core types.

use ruggeri_core::models::{FluidParams, SystemKind};
use ruggeri_core::modes::{Branch, Family, ModeLabel};
use ruggeri_core::sim::{Grid1D, RunConfig};

use crate::config::Config;
use crate::error::{CliError, Result};

pub fn mode(label: ModeLabel) -> Result<(Family, Branch)> {
    Ok(match label {
        ModeLabel::FastPlus => (Family::Fast, Branch::Plus),
        ModeLabel::FastMinus => (Family::Fast, Branch::Minus),
        ModeLabel::SlowPlus => (Family::Slow, Branch::Plus),
        ModeLabel::SlowMinus => (Family::Slow, Branch::Minus),
        ModeLabel::Contact => return Err(CliError::config("the contact mode cannot be selected here")),
    })
}

pub fn params(kind: SystemKind, r: f64, c: f64, eta: f64, eps: f64, heat: (Option<f64>, Option<f64>)) -> Result<FluidParams> {
    let mut p = FluidParams::new(r, c, eta, eps)?;
    match heat {
        (Some(delta), Some(chi)) => p = p.with_heat_conduction(delta, chi)?,
        (None, None) => {}
        _ => return Err(CliError::config("delta and chi must be given together")),
    }
    p.validate(kind)?;
    Ok(p)
}

/// `[system]`: kind and parameters. Only these have no defaults.
pub fn system(cfg: &mut Config) -> Result<(SystemKind, FluidParams)> {
    let kind: SystemKind = cfg.require("system", "kind")?;
    let p = params(
        kind,
        cfg.require("system", "R")?,
        cfg.require("system", "c")?,
        cfg.require("system", "eta")?,
        cfg.require("system", "eps")?,
        (cfg.get("system", "delta")?, cfg.get("system", "chi")?),
    )?;
    Ok((kind, p))
}

/// A full simulation setup from `[system]`, `[reference]`, `[perturbation]`,
/// `[run]` and `[grid]`. Defaults are those of [`RunConfig::new`].
pub fn run_config(cfg: &mut Config) -> Result<RunConfig> {
    let (kind, params) = system(cfg)?;
    if !kind.is_eulerian() {
        return Err(CliError::config(
            "only the Eulerian systems can be simulated; the Lagrangian form is analysis-only",
        ));
    }
    let mut reference = vec![cfg.get_or("reference", "rho", 1.0)?, cfg.get_or("reference", "u", 0.0)?];
    if kind.has_energy() {
        reference.push(cfg.get_or("reference", "theta", 1.0)?);
    }
    reference.push(0.0);
    if kind.has_heat_flux() {
        reference.push(0.0);
    }

    let mut rc = RunConfig::new(kind, params, reference)?;
    rc.ball_radius = cfg.get_or("run", "ball_radius", rc.ball_radius)?;
    rc.amplitude = cfg.get_or("perturbation", "amplitude", rc.amplitude)?;
    rc.width = cfg.get_or("perturbation", "width", rc.width)?;
    rc.center = cfg.get("perturbation", "center")?;
    let label = cfg.get_or("perturbation", "mode", ModeLabel::of(rc.family, rc.branch))?;
    (rc.family, rc.branch) = mode(label)?;
    rc.cfl = cfg.get_or("run", "cfl", rc.cfl)?;
    rc.t_end = cfg.get_or("run", "t_end", rc.t_end)?;
    rc.blowup_slope_factor = cfg.get_or("run", "blowup_slope_factor", rc.blowup_slope_factor)?;
    rc.output_stride = cfg.get_or("run", "output_stride", rc.output_stride)?;
    rc.max_snapshots = cfg.get_or("run", "max_snapshots", rc.max_snapshots)?;
    rc.freeze_source = cfg.get_or("run", "freeze_source", rc.freeze_source)?;
    rc.grid = Grid1D::new(
        cfg.get_or("grid", "n_cells", rc.grid.n_cells())?,
        cfg.get_or("grid", "x_min", rc.grid.x_min())?,
        cfg.get_or("grid", "x_max", rc.grid.x_max())?,
    )?;
    rc.validate()?;
    Ok(rc)
}
