//! Limit-cycle ground truth: exact analysis of rigid systems and a numerical Poincaré
//! return-map scan for general fields.

pub mod integrator;
pub mod poincare;
pub mod radial;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::RootInterval;

pub use integrator::{integrate, integrate_fixed, IntegratorConfig, Tolerances, Trajectory};
pub use poincare::{find_cycles_numeric, find_cycles_numeric_with, poincare_return};
pub use radial::{detect_radial_form, exact_radial_cycles, RadialForm};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("trajectory diverged at t = {t} near ({x}, {y})")]
    Divergence { t: f64, x: f64, y: f64 },
    #[error("trajectory fell into the equilibrium at t = {t}")]
    FellIntoEquilibrium { t: f64 },
    #[error("no return to the section within t = {t_max}")]
    NoReturn { t_max: f64 },
    #[error("flow is tangent to the section at r = {0}")]
    NotTransversal(f64),
    #[error("forward: {0}; backward: {1}")]
    BothDirections(Box<DynamicsError>, Box<DynamicsError>),
    #[error("system is not of rigid radial form")]
    NotRadial,
    #[error("{0}")]
    InvalidInput(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Unstable,
    /// Attracting on one side only; arises from multiple roots.
    SemiStable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleSource {
    ExactRadial,
    NumericPoincare,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleInfo {
    pub radius: f64,
    pub representative_point: (f64, f64),
    pub period: f64,
    pub stability: Stability,
    pub source: CycleSource,
    /// Isolating interval for `r^2` (exact radial analysis only).
    pub s_interval: Option<RootInterval>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellIssue {
    pub r: f64,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitCycleReport {
    pub cycles: Vec<CycleInfo>,
    pub cycle_count: usize,
    /// Continuum of periodic orbits over the scanned annulus.
    pub center_flag: bool,
    /// Section radii actually covered by valid returns.
    pub annulus: Option<(f64, f64)>,
    pub scanned_cells: usize,
    pub invalid_cells: Vec<CellIssue>,
    pub notes: Vec<String>,
}

impl LimitCycleReport {
    pub fn radii(&self) -> Vec<f64> {
        self.cycles.iter().map(|c| c.radius).collect()
    }

    pub fn stabilities(&self) -> Vec<Stability> {
        self.cycles.iter().map(|c| c.stability).collect()
    }
}
