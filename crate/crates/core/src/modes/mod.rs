//! Characteristic speeds, eigenvectors and genuine-nonlinearity coefficients.
//!
//! Closed forms live in [`eulerian`] (`E4`, `E3`) and [`lagrangian`]
//! (`L5` at equilibrium, which also fixes the `E5` speeds). [`generic`]
//! solves the pencil numerically for any kind and state, and [`oracle`]
//! builds the finite-difference checks used to validate every closed form.

pub mod eulerian;
pub mod generic;
pub mod lagrangian;
pub mod oracle;
pub mod scan;

pub use eulerian::{eigvec_e4_equilibrium, gnl_e4, gnl_e4_chain, speeds_e3, speeds_e4, E4Chain};
pub use generic::{speeds_generic, track_eigenvalue, Eigenpair};
pub use lagrangian::{
    eigvec_l5_equilibrium, find_tau_threshold, gnl_l5, nonlinearity_reduced_form, pi0_report,
    speed_derivative_l5, tau_threshold_bisect, NonlinearityCoefficients, Pi0Report,
};
pub use scan::{degeneracy_scan, Crossing, DegeneracyReport, ScanPoint};

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::models::SystemKind;
use crate::Error;

/// Sign of the selected speed: `Plus` is the right-moving member of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

/// Fast or slow pair of nontrivial speeds (the 3- and 4-field systems only have `Fast`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Fast,
    Slow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeLabel {
    FastPlus,
    FastMinus,
    SlowPlus,
    SlowMinus,
    Contact,
}

impl ModeLabel {
    pub fn of(family: Family, branch: Branch) -> Self {
        match (family, branch) {
            (Family::Fast, Branch::Plus) => ModeLabel::FastPlus,
            (Family::Fast, Branch::Minus) => ModeLabel::FastMinus,
            (Family::Slow, Branch::Plus) => ModeLabel::SlowPlus,
            (Family::Slow, Branch::Minus) => ModeLabel::SlowMinus,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModeLabel::FastPlus => "fast+",
            ModeLabel::FastMinus => "fast-",
            ModeLabel::SlowPlus => "slow+",
            ModeLabel::SlowMinus => "slow-",
            ModeLabel::Contact => "contact",
        }
    }

    /// Labels of the speeds of `kind` in ascending order near equilibrium.
    pub fn ascending(kind: SystemKind) -> &'static [ModeLabel] {
        use ModeLabel::*;
        match kind {
            SystemKind::E3 => &[FastMinus, Contact, FastPlus],
            SystemKind::E4 => &[FastMinus, Contact, Contact, FastPlus],
            SystemKind::E5 | SystemKind::L5 => &[FastMinus, SlowMinus, Contact, SlowPlus, FastPlus],
        }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "fast+" => Ok(ModeLabel::FastPlus),
            "fast-" => Ok(ModeLabel::FastMinus),
            "slow+" => Ok(ModeLabel::SlowPlus),
            "slow-" => Ok(ModeLabel::SlowMinus),
            "contact" => Ok(ModeLabel::Contact),
            other => Err(Error::config(alloc::format!(
                "unknown mode `{other}` (expected fast+, fast-, slow+, slow- or contact)"
            ))),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "fast" => Ok(Family::Fast),
            "slow" => Ok(Family::Slow),
            other => Err(Error::config(alloc::format!(
                "unknown mode family `{other}` (expected fast or slow)"
            ))),
        }
    }
}

/// One characteristic mode at a state.
///
/// `r` is empty when only speeds were requested. Eigenvectors are scaled so
/// that their stress component is 1 whenever it is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeReport {
    pub label: ModeLabel,
    pub lambda: f64,
    /// `u - lambda` (Eulerian kinds only).
    pub mu: Option<f64>,
    pub r: Vec<f64>,
    /// `r . grad lambda`; exactly zero for contact modes.
    pub gnl: Option<f64>,
}
