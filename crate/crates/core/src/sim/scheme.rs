use alloc::vec;
use alloc::vec::Vec;

use super::{FieldSet, Grid1D};
use crate::models::law::Law;
use crate::models::{Cell, QuasilinearSystem, MAX_VARS};
use crate::{Error, Result};

fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Reusable buffers for stepping one grid.
#[derive(Debug, Clone)]
pub struct Stepper {
    law: Law,
    grid: Grid1D,
    freeze_source: bool,
    /// Interface fluxes; entry `i` is the flux through `x_{i+1/2}`.
    flux: Vec<Cell>,
    /// Spectral radius of each cell state.
    speed: Vec<f64>,
    rhs: Vec<Cell>,
    stage_u: Vec<Cell>,
    stage_v: Vec<Cell>,
}

impl Stepper {
    pub fn new(law: Law, grid: Grid1D) -> Self {
        let n = grid.n_cells();
        Stepper {
            law,
            grid,
            freeze_source: false,
            flux: vec![[0.0; MAX_VARS]; n],
            speed: vec![0.0; n],
            rhs: vec![[0.0; MAX_VARS]; n],
            stage_u: vec![[0.0; MAX_VARS]; n],
            stage_v: vec![[0.0; MAX_VARS]; n],
        }
    }

    pub fn with_frozen_source(mut self, freeze: bool) -> Self {
        self.freeze_source = freeze;
        self
    }

    pub fn law(&self) -> &Law {
        &self.law
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// Largest stable step: `cfl dx / lambda_max`, capped at half the
    /// shortest relaxation time unless the source is frozen.
    pub fn stable_dt(&self, fields: &FieldSet, cfl: f64) -> f64 {
        let mut speed = 0.0f64;
        let mut relax = f64::INFINITY;
        for v in &fields.primitive {
            speed = speed.max(self.law.max_speed(v));
            if !self.freeze_source {
                relax = relax.min(self.law.relaxation_time(v));
            }
        }
        let transport = cfl * self.grid.dx() / speed;
        transport.min(0.5 * relax)
    }

    /// Semi-discrete right-hand side `dU/dt` evaluated from primitive cell values.
    fn evaluate_rhs(&mut self, prim: &[Cell]) -> Result<()> {
        let n = prim.len();
        let dim = self.law.dim();
        let dx = self.grid.dx();
        let law = self.law;
        for (s, v) in self.speed.iter_mut().zip(prim) {
            *s = law.max_speed(v);
        }

        let slope = |i: usize, k: usize| -> f64 {
            let l = prim[(i + n - 1) % n][k];
            let c = prim[i][k];
            let r = prim[(i + 1) % n][k];
            minmod(c - l, r - c)
        };

        for i in 0..n {
            let j = (i + 1) % n;
            let mut left = prim[i];
            let mut right = prim[j];
            for k in 0..dim {
                left[k] += 0.5 * slope(i, k);
                right[k] -= 0.5 * slope(j, k);
            }
            law.admissible(&left)
                .map_err(|(what, value)| Error::Reconstruction { cell: i, what, value })?;
            law.admissible(&right)
                .map_err(|(what, value)| Error::Reconstruction { cell: j, what, value })?;
            let (fl, fr) = (law.flux(&left), law.flux(&right));
            let (ul, ur) = (law.to_conserved(&left), law.to_conserved(&right));
            // Local Lax-Friedrichs speed from the two neighbouring cells.
            let a = self.speed[i].max(self.speed[j]);
            let f = &mut self.flux[i];
            for k in 0..dim {
                f[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * a * (ur[k] - ul[k]);
            }
        }

        let terms = law.nonconservative_terms();
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let next = (i + 1) % n;
            let g = if self.freeze_source {
                [0.0; MAX_VARS]
            } else {
                law.source(&prim[i])
            };
            let out = &mut self.rhs[i];
            for k in 0..dim {
                out[k] = -(self.flux[i][k] - self.flux[prev][k]) / dx + g[k];
            }
            for &(row, var) in terms {
                out[row] -= (prim[next][var] - prim[prev][var]) / (2.0 * dx);
            }
        }
        Ok(())
    }

    fn recover(law: &Law, u: &[Cell], v: &mut [Cell]) -> Result<()> {
        for (i, (w, p)) in u.iter().zip(v.iter_mut()).enumerate() {
            *p = law
                .to_primitive(w)
                .map_err(|(what, value)| Error::Reconstruction { cell: i, what, value })?;
        }
        Ok(())
    }

    /// One SSP-RK2 step of size `dt`, in place. On error `fields` is unchanged.
    pub fn step(&mut self, fields: &mut FieldSet, dt: f64) -> Result<()> {
        let dim = self.law.dim();
        let n = fields.conserved.len();
        if n != self.grid.n_cells() {
            return Err(Error::precondition("field size does not match the grid"));
        }

        self.evaluate_rhs(&fields.primitive)?;
        for i in 0..n {
            for k in 0..dim {
                self.stage_u[i][k] = fields.conserved[i][k] + dt * self.rhs[i][k];
            }
        }
        let mut stage_v = core::mem::take(&mut self.stage_v);
        let res = Self::recover(&self.law, &self.stage_u, &mut stage_v)
            .and_then(|_| self.evaluate_rhs(&stage_v));
        self.stage_v = stage_v;
        res?;

        // Written into the stage buffer first so a failure leaves `fields` intact.
        for i in 0..n {
            for k in 0..dim {
                self.stage_u[i][k] = 0.5 * fields.conserved[i][k] + 0.5 * (self.stage_u[i][k] + dt * self.rhs[i][k]);
            }
        }
        Self::recover(&self.law, &self.stage_u, &mut self.stage_v)?;
        core::mem::swap(&mut fields.conserved, &mut self.stage_u);
        core::mem::swap(&mut fields.primitive, &mut self.stage_v);
        fields.t += dt;
        Ok(())
    }
}

/// One step on a fresh copy of `state`.
pub fn step(state: &FieldSet, sys: &QuasilinearSystem, grid: &Grid1D, dt: f64) -> Result<FieldSet> {
    let mut out = state.clone();
    Stepper::new(*sys.law(), *grid).step(&mut out, dt)?;
    Ok(out)
}
