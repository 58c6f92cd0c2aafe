//! `ruggeri sweep`: the same run at increasing amplitudes, in parallel.

use rayon::prelude::*;
use ruggeri_core::sim::{bracket, check_sweep, run, RunConfig, RunResult};

use crate::config::Config;
use crate::csv::{num, Table};
use crate::error::Result;
use crate::setup;

pub const DEFAULT_AMPLITUDES: [f64; 5] = [0.01, 0.02, 0.05, 0.1, 0.2];

#[derive(Debug)]
pub struct SweepOutput {
    pub table: Table,
    pub bracket: Option<(f64, f64)>,
    pub monotone: bool,
    /// The bracket on the refined grid, when requested.
    pub refined: Option<(Option<(f64, f64)>, bool)>,
}

fn runs(template: &RunConfig, amplitudes: &[f64]) -> Result<Vec<RunResult>> {
    let out = amplitudes
        .par_iter()
        .map(|&a| {
            let mut cfg = template.clone();
            cfg.amplitude = a;
            run(&cfg)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(out)
}

pub fn sweep(cfg: &mut Config) -> Result<SweepOutput> {
    let template = setup::run_config(cfg)?;
    let amplitudes = cfg
        .list("sweep", "amplitudes")?
        .unwrap_or_else(|| DEFAULT_AMPLITUDES.to_vec());
    let refine = cfg.get_or("sweep", "refine", false)?;
    check_sweep(&template, &amplitudes)?;

    let coarse = runs(&template, &amplitudes)?;
    let fine = if refine {
        let mut t = template.clone();
        t.grid = t.grid.refined();
        Some(runs(&t, &amplitudes)?)
    } else {
        None
    };

    let mut header = vec!["amplitude", "n_cells", "status", "t_blowup_estimate", "slope_growth", "max_ball_dist"];
    if fine.is_some() {
        header.extend(["status_refined", "t_blowup_estimate_refined"]);
    }
    let mut table = Table::new(&header);
    for (i, (a, r)) in amplitudes.iter().zip(&coarse).enumerate() {
        let mut row = vec![
            num(*a),
            r.n_cells.to_string(),
            r.status.as_str().to_string(),
            num(r.t_blowup_estimate.unwrap_or(f64::NAN)),
            num(r.slope_growth()),
            num(r.max_ball_dist),
        ];
        if let Some(f) = &fine {
            row.push(f[i].status.as_str().to_string());
            row.push(num(f[i].t_blowup_estimate.unwrap_or(f64::NAN)));
        }
        table.row(&row);
    }

    let statuses = |rs: &[RunResult]| rs.iter().map(|r| r.status).collect::<Vec<_>>();
    let (b, monotone) = bracket(&amplitudes, &statuses(&coarse));
    Ok(SweepOutput {
        table,
        bracket: b,
        monotone,
        refined: fine.map(|f| bracket(&amplitudes, &statuses(&f))),
    })
}
