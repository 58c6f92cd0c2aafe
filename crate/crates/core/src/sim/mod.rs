//! Finite-volume integration of the Eulerian systems on a periodic grid, with
//! detection of finite-time gradient blowup.
//!
//! The scheme is MUSCL (minmod-limited primitive slopes) with a Rusanov flux,
//! centered differences for the bare `u_x` / `theta_x` products, an explicit
//! relaxation source and a two-stage SSP Runge-Kutta step. Runs stop when
//! blowup is detected; nothing past breakdown is trusted.

mod init;
mod run;
mod scheme;

pub use init::{bump, initial_data, seed_eigenvector};
pub use run::{amplitude_sweep, bracket, check_sweep, run, RunResult, RunStatus, SeriesRecord, Snapshot, SweepReport};
pub use scheme::{step, Stepper};

use alloc::format;
use alloc::vec::Vec;

use crate::models::{Cell, FluidParams, SystemKind};
use crate::modes::{Branch, Family};
use crate::{Error, Result};

/// Uniform periodic grid on `[x_min, x_max)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n_cells: usize,
    x_min: f64,
    x_max: f64,
}

impl Grid1D {
    pub const MIN_CELLS: usize = 16;

    pub fn new(n_cells: usize, x_min: f64, x_max: f64) -> Result<Self> {
        if n_cells < Self::MIN_CELLS {
            return Err(Error::config(format!(
                "n_cells = {n_cells} is below the minimum of {}",
                Self::MIN_CELLS
            )));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::config(format!("empty domain [{x_min}, {x_max})")));
        }
        Ok(Grid1D { n_cells, x_min, x_max })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n_cells as f64
    }

    /// Cell center `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    /// Same domain with twice as many cells.
    pub fn refined(&self) -> Self {
        Grid1D {
            n_cells: 2 * self.n_cells,
            ..*self
        }
    }
}

/// Cell averages at time `t`, kept both in conserved and primitive form.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSet {
    pub t: f64,
    pub conserved: Vec<Cell>,
    pub primitive: Vec<Cell>,
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub kind: SystemKind,
    pub params: FluidParams,
    /// Equilibrium `V_*` (stress and heat flux zero), `kind.dim()` entries.
    pub reference: Vec<f64>,
    /// Sup-norm radius `k` of the admissible ball around `V_*`.
    pub ball_radius: f64,
    pub amplitude: f64,
    /// Half-width `s` of the bump support.
    pub width: f64,
    /// Bump center; the middle of the domain when `None`.
    pub center: Option<f64>,
    pub family: Family,
    pub branch: Branch,
    pub cfl: f64,
    pub t_end: f64,
    pub blowup_slope_factor: f64,
    /// Steps between recorded series entries.
    pub output_stride: usize,
    pub max_snapshots: usize,
    /// Drop the relaxation source (used for the non-stiff convergence study).
    pub freeze_source: bool,
    pub grid: Grid1D,
}

impl RunConfig {
    /// Defaults for everything except the system, parameters and reference state.
    pub fn new(kind: SystemKind, params: FluidParams, reference: Vec<f64>) -> Result<Self> {
        let cfg = RunConfig {
            kind,
            params,
            reference,
            ball_radius: 0.5,
            amplitude: 0.05,
            width: 1.0,
            center: None,
            family: Family::Fast,
            branch: Branch::Plus,
            cfl: 0.4,
            t_end: 10.0,
            blowup_slope_factor: 50.0,
            output_stride: 10,
            max_snapshots: 64,
            freeze_source: false,
            grid: Grid1D::new(2048, 0.0, 2.0)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.kind.is_eulerian() {
            return Err(Error::config(
                "only the Eulerian systems can be simulated; the Lagrangian form is analysis-only",
            ));
        }
        self.params.validate(self.kind)?;
        if self.reference.len() != self.kind.dim() {
            return Err(Error::config(format!(
                "reference state has {} components, {} expects {}",
                self.reference.len(),
                self.kind,
                self.kind.dim()
            )));
        }
        let sigma = self.kind.sigma_index();
        if self.reference[sigma] != 0.0 || (self.kind.has_heat_flux() && self.reference[4] != 0.0) {
            return Err(Error::config("reference state must be an equilibrium (sigma = q = 0)"));
        }
        let check = |what: &str, x: f64, ok: bool| {
            if ok && x.is_finite() {
                Ok(())
            } else {
                Err(Error::config(format!("invalid {what} = {x}")))
            }
        };
        check("ball_radius", self.ball_radius, self.ball_radius > 0.0)?;
        check("amplitude", self.amplitude, self.amplitude >= 0.0)?;
        check("width", self.width, self.width > 0.0)?;
        check("cfl", self.cfl, self.cfl > 0.0 && self.cfl <= 1.0)?;
        check("t_end", self.t_end, self.t_end > 0.0)?;
        check("blowup_slope_factor", self.blowup_slope_factor, self.blowup_slope_factor > 1.0)?;
        if let Some(c) = self.center {
            check("center", c, c >= self.grid.x_min() && c <= self.grid.x_max())?;
        }
        if 2.0 * self.width > self.grid.length() {
            return Err(Error::config("bump support is wider than the domain"));
        }
        if self.output_stride == 0 {
            return Err(Error::config("output_stride must be at least 1"));
        }
        if self.max_snapshots < 2 {
            return Err(Error::config("max_snapshots must be at least 2"));
        }
        if self.kind != SystemKind::E5 && self.family == Family::Slow {
            return Err(Error::config(format!("{} has no slow mode", self.kind)));
        }
        Ok(())
    }

    pub fn center(&self) -> f64 {
        self.center
            .unwrap_or(0.5 * (self.grid.x_min() + self.grid.x_max()))
    }

    pub fn reference_cell(&self) -> Cell {
        let mut c = [0.0; crate::models::MAX_VARS];
        c[..self.reference.len()].copy_from_slice(&self.reference);
        c
    }
}
