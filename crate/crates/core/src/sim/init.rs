use alloc::format;
use alloc::vec::Vec;

use super::{FieldSet, RunConfig};
use crate::math::{exp, max_abs};
use crate::models::{build_system, law::Law, Cell, StateE4, SystemKind};
use crate::modes::{eigvec_e4_equilibrium, speeds_generic, ModeLabel};
use crate::{Error, Result};

/// Smooth compactly supported bump `exp(1 - 1/(1 - xi^2))` on `|xi| < 1`, with peak 1.
pub fn bump(xi: f64) -> f64 {
    let s = 1.0 - xi * xi;
    if s <= 0.0 {
        0.0
    } else {
        exp(1.0 - 1.0 / s)
    }
}

/// Right eigenvector of the selected mode at the reference state, scaled so
/// that its stress component is 1.
pub fn seed_eigenvector(cfg: &RunConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if cfg.kind == SystemKind::E4 {
        let v = StateE4::from_slice(&cfg.reference)?;
        return Ok(eigvec_e4_equilibrium(&cfg.params, &v, cfg.branch)?.r);
    }
    let sys = build_system(cfg.kind, &cfg.params)?;
    let pairs = speeds_generic(&sys, &cfg.reference)?;
    let want = ModeLabel::of(cfg.family, cfg.branch);
    let idx = ModeLabel::ascending(cfg.kind)
        .iter()
        .position(|&l| l == want)
        .ok_or_else(|| Error::config(format!("{} has no {want} mode", cfg.kind)))?;
    // Stress-normalized like the closed form, so both seeds agree exactly in sign.
    Ok(pairs[idx].r.clone())
}

/// `V_0(x) = V_* + a w((x - x_c)/s) r(V_*)`; errors when `a |r|_inf > k`.
pub fn initial_data(cfg: &RunConfig) -> Result<FieldSet> {
    let r = seed_eigenvector(cfg)?;
    let dist = cfg.amplitude * max_abs(&r);
    if dist > cfg.ball_radius {
        return Err(Error::config(format!(
            "perturbation exceeds ball radius: a |r|_inf = {dist} > k = {}",
            cfg.ball_radius
        )));
    }
    let law = Law::new(cfg.kind, &cfg.params)?;
    let grid = cfg.grid;
    let reference = cfg.reference_cell();
    let center = cfg.center();
    let len = grid.length();
    let mut primitive = Vec::with_capacity(grid.n_cells());
    let mut conserved = Vec::with_capacity(grid.n_cells());
    for i in 0..grid.n_cells() {
        // Nearest periodic image of the center.
        let mut d = grid.x(i) - center;
        d -= len * libm::round(d / len);
        let w = cfg.amplitude * bump(d / cfg.width);
        let mut v: Cell = reference;
        for (k, rk) in r.iter().enumerate() {
            v[k] += w * rk;
        }
        law.admissible(&v)
            .map_err(|(what, value)| Error::Domain { what, value })?;
        primitive.push(v);
        conserved.push(law.to_conserved(&v));
    }
    Ok(FieldSet {
        t: 0.0,
        conserved,
        primitive,
    })
}
