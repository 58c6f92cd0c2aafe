use alloc::format;
use alloc::vec::Vec;

use super::{initial_data, seed_eigenvector, FieldSet, Grid1D, RunConfig, Stepper};
use crate::math::{abs, max_abs};
use crate::models::{law::Law, Cell};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunStatus {
    BlowupDetected,
    SmoothUntilTEnd,
    AdmissibilityViolation { cell: usize, t: f64 },
    BallExit,
}

impl RunStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunStatus::BlowupDetected => "blowup_detected",
            RunStatus::SmoothUntilTEnd => "smooth_until_t_end",
            RunStatus::AdmissibilityViolation { .. } => "admissibility_violation",
            RunStatus::BallExit => "ball_exit",
        }
    }
}

impl core::fmt::Display for RunStatus {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRecord {
    pub t: f64,
    pub max_slope_u: f64,
    pub max_slope_all: f64,
    pub mass: f64,
    pub momentum: f64,
    /// `NaN` for the isothermal system, which has no energy balance.
    pub energy: f64,
    pub ball_dist: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub primitive: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub status: RunStatus,
    pub t_blowup_estimate: Option<f64>,
    /// Every `output_stride`-th step plus the first and the last state.
    pub series: Vec<SeriesRecord>,
    /// Largest relative drift of mass, momentum and energy over the run
    /// (energy `NaN` for the isothermal system).
    pub conservation_drift: [f64; 3],
    pub max_ball_dist: f64,
    pub snapshots: Vec<Snapshot>,
    pub n_cells: usize,
    pub t_end_reached: f64,
    pub steps: usize,
    /// Initial `max |u_x|`.
    pub initial_slope_u: f64,
    /// Peak `max |u_x|` over the run.
    pub peak_slope_u: f64,
}

impl RunResult {
    pub fn slope_growth(&self) -> f64 {
        self.peak_slope_u / self.initial_slope_u
    }
}

/// Largest one-sided difference quotient `|V_{i+1} - V_i| / dx` of
/// component `k` on the periodic grid.
fn max_slope(prim: &[Cell], k: usize, dx: f64) -> f64 {
    let n = prim.len();
    (0..n).fold(0.0f64, |m, i| m.max(abs(prim[(i + 1) % n][k] - prim[i][k])))
        / dx
}

fn ball_dist(prim: &[Cell], reference: &Cell, dim: usize) -> f64 {
    prim.iter().fold(0.0f64, |m, v| {
        (0..dim).fold(m, |m, k| m.max(abs(v[k] - reference[k])))
    })
}

/// Totals of the conservative rows and their absolute-value norms (the
/// scale used for relative drift).
fn totals(law: &Law, fields: &FieldSet, dx: f64) -> ([f64; 3], [f64; 3]) {
    let rows = if law.kind().has_energy() { 3 } else { 2 };
    let mut sum = [0.0; 3];
    let mut scale = [0.0; 3];
    for u in &fields.conserved {
        for k in 0..rows {
            sum[k] += u[k] * dx;
            scale[k] += abs(u[k]) * dx;
        }
    }
    if rows == 2 {
        sum[2] = f64::NAN;
        scale[2] = f64::NAN;
    }
    (sum, scale)
}

/// Least-squares line through `(t, y)`; returns `(intercept, slope)`.
fn linear_fit(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = points.len() as f64;
    if points.len() < 4 {
        return None;
    }
    let mt = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let stt = points.iter().map(|p| (p.0 - mt) * (p.0 - mt)).sum::<f64>();
    let sty = points.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum::<f64>();
    if stt == 0.0 {
        return None;
    }
    let b = sty / stt;
    Some((my - b * mt, b))
}

/// Zero of the linear fit of `1 / slope` over the last quarter of `history`
/// when its trend is negative.
pub(crate) fn blowup_time(history: &[(f64, f64)]) -> Option<f64> {
    let tail = &history[history.len() - history.len() / 4..];
    let recip: Vec<(f64, f64)> = tail.iter().map(|&(t, s)| (t, 1.0 / s)).collect();
    let (a, b) = linear_fit(&recip)?;
    if b < 0.0 {
        Some(-a / b)
    } else {
        None
    }
}

struct Recorder<'a> {
    cfg: &'a RunConfig,
    law: Law,
    reference: Cell,
    initial: [f64; 3],
    scale: [f64; 3],
    drift: [f64; 3],
    max_ball: f64,
    series: Vec<SeriesRecord>,
    snapshots: Vec<Snapshot>,
    next_snapshot: usize,
}

impl Recorder<'_> {
    fn snapshot_time(&self, j: usize) -> f64 {
        self.cfg.t_end * j as f64 / (self.cfg.max_snapshots - 1) as f64
    }

    fn observe(&mut self, fields: &FieldSet, slope_u: f64, dist: f64, record: bool) {
        let dx = self.cfg.grid.dx();
        let (sum, _) = totals(&self.law, fields, dx);
        for k in 0..3 {
            let diff = abs(sum[k] - self.initial[k]);
            // A quantity that starts identically zero is measured absolutely.
            let d = if self.scale[k] > 0.0 { diff / self.scale[k] } else { diff };
            if d > self.drift[k] || d.is_nan() {
                self.drift[k] = d;
            }
        }
        self.max_ball = self.max_ball.max(dist);
        if record {
            let dim = self.law.dim();
            let all = (0..dim).fold(0.0f64, |m, k| m.max(max_slope(&fields.primitive, k, dx)));
            self.series.push(SeriesRecord {
                t: fields.t,
                max_slope_u: slope_u,
                max_slope_all: all,
                mass: sum[0],
                momentum: sum[1],
                energy: sum[2],
                ball_dist: dist,
            });
        }
        // The last slot is reserved for the final state.
        if self.next_snapshot < self.cfg.max_snapshots - 1 && fields.t >= self.snapshot_time(self.next_snapshot) {
            self.snapshots.push(Snapshot {
                t: fields.t,
                primitive: fields.primitive.clone(),
            });
            while self.next_snapshot < self.cfg.max_snapshots - 1
                && self.snapshot_time(self.next_snapshot) <= fields.t
            {
                self.next_snapshot += 1;
            }
        }
    }
}

/// Advances until `t_end`, blowup detection, ball exit or an inadmissible state.
pub fn run(cfg: &RunConfig) -> Result<RunResult> {
    let mut fields = initial_data(cfg)?;
    let law = Law::new(cfg.kind, &cfg.params)?;
    let grid: Grid1D = cfg.grid;
    let dx = grid.dx();
    let dim = law.dim();
    let reference = cfg.reference_cell();
    let mut stepper = Stepper::new(law, grid).with_frozen_source(cfg.freeze_source);

    let (initial, scale) = totals(&law, &fields, dx);
    let mut rec = Recorder {
        cfg,
        law,
        reference,
        initial,
        scale,
        drift: [0.0, 0.0, if law.kind().has_energy() { 0.0 } else { f64::NAN }],
        max_ball: 0.0,
        series: Vec::new(),
        snapshots: Vec::new(),
        next_snapshot: 0,
    };

    let s0 = max_slope(&fields.primitive, 1, dx);
    let d0 = ball_dist(&fields.primitive, &rec.reference, dim);
    rec.observe(&fields, s0, d0, true);
    let mut history: Vec<(f64, f64)> = alloc::vec![(0.0, s0)];
    let mut peak = s0;
    let mut steps = 0usize;
    let mut t_blowup = None;

    let status = loop {
        if fields.t >= cfg.t_end {
            break RunStatus::SmoothUntilTEnd;
        }
        let dt = stepper.stable_dt(&fields, cfg.cfl).min(cfg.t_end - fields.t);
        if let Err(e) = stepper.step(&mut fields, dt) {
            match e {
                Error::Reconstruction { cell, .. } => {
                    break RunStatus::AdmissibilityViolation { cell, t: fields.t + dt };
                }
                other => return Err(other),
            }
        }
        steps += 1;
        let slope = max_slope(&fields.primitive, 1, dx);
        let dist = ball_dist(&fields.primitive, &rec.reference, dim);
        history.push((fields.t, slope));
        peak = peak.max(slope);
        rec.observe(&fields, slope, dist, steps % cfg.output_stride == 0);

        if dist > cfg.ball_radius {
            break RunStatus::BallExit;
        }
        if s0 > 0.0 && slope >= cfg.blowup_slope_factor * s0 {
            if let Some(tb) = blowup_time(&history) {
                t_blowup = Some(tb);
                break RunStatus::BlowupDetected;
            }
        }
    };

    if rec.series.last().map(|r| r.t) != Some(fields.t) {
        let slope = max_slope(&fields.primitive, 1, dx);
        let dist = ball_dist(&fields.primitive, &rec.reference, dim);
        rec.observe(&fields, slope, dist, true);
    }
    rec.snapshots.push(Snapshot {
        t: fields.t,
        primitive: fields.primitive.clone(),
    });
    if rec.snapshots.len() >= 2 && rec.snapshots[rec.snapshots.len() - 2].t == fields.t {
        rec.snapshots.pop();
    }

    Ok(RunResult {
        status,
        t_blowup_estimate: t_blowup,
        series: rec.series,
        conservation_drift: rec.drift,
        max_ball_dist: rec.max_ball,
        snapshots: rec.snapshots,
        n_cells: grid.n_cells(),
        t_end_reached: fields.t,
        steps,
        initial_slope_u: s0,
        peak_slope_u: peak,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub amplitudes: Vec<f64>,
    pub statuses: Vec<RunStatus>,
    /// `(largest smooth, smallest non-smooth)` amplitude when the statuses switch once.
    pub bracket: Option<(f64, f64)>,
    pub monotone: bool,
}

/// Bracket of the switch from smooth to non-smooth runs, if the statuses
/// switch exactly once. Returns `(bracket, monotone)`.
pub fn bracket(amplitudes: &[f64], statuses: &[RunStatus]) -> (Option<(f64, f64)>, bool) {
    let smooth: Vec<bool> = statuses
        .iter()
        .map(|s| *s == RunStatus::SmoothUntilTEnd)
        .collect();
    let switch = smooth.iter().position(|s| !s).unwrap_or(smooth.len());
    let monotone = smooth[switch..].iter().all(|s| !s);
    if monotone && switch > 0 && switch < smooth.len() {
        (Some((amplitudes[switch - 1], amplitudes[switch])), true)
    } else {
        (None, monotone)
    }
}

/// Rejects unsorted amplitudes and any that would leave the ball at `t = 0`.
pub fn check_sweep(template: &RunConfig, amplitudes: &[f64]) -> Result<()> {
    let r = seed_eigenvector(template)?;
    let limit = template.ball_radius / max_abs(&r);
    if amplitudes.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::precondition("amplitudes must be sorted ascending"));
    }
    if let Some(&a) = amplitudes.iter().find(|&&a| !(a >= 0.0 && a <= limit)) {
        return Err(Error::precondition(format!(
            "amplitude {a} outside [0, k/|r|_inf] = [0, {limit}]"
        )));
    }
    Ok(())
}

/// Runs the template once per amplitude (sequentially) and locates the
/// smooth/blowup boundary.
pub fn amplitude_sweep(template: &RunConfig, amplitudes: &[f64]) -> Result<SweepReport> {
    check_sweep(template, amplitudes)?;
    let statuses = amplitudes
        .iter()
        .map(|&a| {
            let mut cfg = template.clone();
            cfg.amplitude = a;
            run(&cfg).map(|r| r.status)
        })
        .collect::<Result<Vec<_>>>()?;
    let (bracket, monotone) = bracket(amplitudes, &statuses);
    Ok(SweepReport {
        amplitudes: amplitudes.to_vec(),
        statuses,
        bracket,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn fit_recovers_line() {
        let h: Vec<(f64, f64)> = (0..40).map(|i| (i as f64 * 0.1, 1.0 / (5.0 - i as f64 * 0.1))).collect();
        let tb = blowup_time(&h).unwrap();
        assert!((tb - 5.0).abs() < 1e-10);
        let flat: Vec<(f64, f64)> = (0..40).map(|i| (i as f64, 2.0)).collect();
        assert_eq!(blowup_time(&flat), None);
    }

    #[test]
    fn bracket_cases() {
        use RunStatus::*;
        let a = [0.1, 0.2, 0.3];
        assert_eq!(bracket(&a, &[SmoothUntilTEnd; 3]), (None, true));
        assert_eq!(
            bracket(&a, &[SmoothUntilTEnd, BlowupDetected, BlowupDetected]),
            (Some((0.1, 0.2)), true)
        );
        assert_eq!(bracket(&a, &[BlowupDetected, SmoothUntilTEnd, BlowupDetected]), (None, false));
        assert_eq!(bracket(&[0.1], &[BlowupDetected]), (None, true));
    }

    #[test]
    fn slope_is_one_sided() {
        let mut prim = vec![[0.0; 5]; 4];
        prim[2][1] = 1.0;
        assert_eq!(max_slope(&prim, 1, 0.5), 2.0);
    }
}
