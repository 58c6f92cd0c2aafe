//! `ruggeri simulate`: one run, written as CSV series, snapshots and a summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ruggeri_core::sim::{run, RunConfig, RunResult};

use crate::csv::{num, write_file, Table};
use crate::error::{CliError, Result};

pub const SERIES_HEADER: [&str; 7] = ["t", "max_slope_u", "max_slope_all", "mass", "momentum", "energy", "ball_dist"];

pub fn series_table(res: &RunResult) -> Table {
    let mut t = Table::new(&SERIES_HEADER);
    for r in &res.series {
        t.numbers(&[r.t, r.max_slope_u, r.max_slope_all, r.mass, r.momentum, r.energy, r.ball_dist]);
    }
    t
}

pub fn summary_text(res: &RunResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "status={}", res.status.as_str());
    let _ = writeln!(s, "t_blowup_estimate={}", res.t_blowup_estimate.map_or("none".to_string(), num));
    let _ = writeln!(s, "max_ball_dist={}", num(res.max_ball_dist));
    let _ = writeln!(s, "n_cells={}", res.n_cells);
    let _ = writeln!(s, "t_end_reached={}", num(res.t_end_reached));
    s
}

/// File name of the snapshot at time `t`; nine decimals keep names distinct
/// and sortable for any sensible output cadence.
pub fn snapshot_name(t: f64) -> String {
    format!("snapshot_{t:.9}.csv")
}

pub fn write_outputs(cfg: &RunConfig, res: &RunResult, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    series_table(res).save(&dir.join("series.csv"))?;
    let names = cfg.kind.component_names();
    let mut header = vec!["x"];
    header.extend_from_slice(names);
    for snap in &res.snapshots {
        let mut t = Table::new(&header);
        for (i, v) in snap.primitive.iter().enumerate() {
            let mut row = vec![cfg.grid.x(i)];
            row.extend_from_slice(&v[..names.len()]);
            t.numbers(&row);
        }
        t.save(&dir.join(snapshot_name(snap.t)))?;
    }
    write_file(&dir.join("summary"), summary_text(res).as_bytes())
}

pub fn simulate(cfg: &RunConfig, dir: &PathBuf) -> Result<RunResult> {
    let res = run(cfg)?;
    write_outputs(cfg, &res, dir)?;
    Ok(res)
}
