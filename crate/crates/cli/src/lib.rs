//! Batch commands over the charged black hole interior: horizons, coordinate
//! transforms, curvature and fluid tables, and a self-verification suite.
//!
//! Every command takes a [`RunConfig`] and returns plain data; rendering to
//! CSV or JSON lives in [`output`].

pub mod commands;
pub mod output;
pub mod verify;

use std::f64::consts::FRAC_PI_2;

use rnwarp_core::{BlackHoleParams, Tolerance};
use serde::Serialize;

pub use commands::{cmd_curvature, cmd_fluid, cmd_horizons, cmd_transform};
pub use verify::{cmd_verify, CheckResult, VerifyReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] rnwarp_core::Error),
}

impl CliError {
    /// Process exit code for this error. Verification failures are not errors
    /// and exit with 1 from the binary.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub params: BlackHoleParams,
    pub grid_points: usize,
    pub guard_fraction: f64,
    pub tol: Tolerance,
    pub format: Option<Format>,
    pub theta: f64,
}

impl RunConfig {
    pub const DEFAULT_GRID: usize = 64;
    pub const DEFAULT_GUARD: f64 = 0.05;

    /// Validated configuration. A negative charge is folded to its magnitude.
    pub fn new(mass: f64, charge: f64) -> Result<Self, CliError> {
        Ok(Self {
            params: BlackHoleParams::new(mass, charge)?,
            grid_points: Self::DEFAULT_GRID,
            guard_fraction: Self::DEFAULT_GUARD,
            tol: Tolerance::default(),
            format: None,
            theta: FRAC_PI_2,
        })
    }

    pub fn with_grid(mut self, grid_points: usize) -> Result<Self, CliError> {
        if grid_points < 2 {
            return Err(CliError::Usage(format!("--grid must be at least 2, got {grid_points}")));
        }
        self.grid_points = grid_points;
        Ok(self)
    }

    pub fn with_guard(mut self, guard_fraction: f64) -> Result<Self, CliError> {
        if !(guard_fraction > 0.0 && guard_fraction < 0.5) {
            return Err(CliError::Usage(format!(
                "--guard must lie in (0, 0.5), got {guard_fraction}"
            )));
        }
        self.guard_fraction = guard_fraction;
        Ok(self)
    }

    /// Uses `tol` as both the absolute and the relative tolerance.
    pub fn with_tol(mut self, tol: f64) -> Result<Self, CliError> {
        self.tol = Tolerance::new(tol, tol, Tolerance::default().max_iter)?;
        Ok(self)
    }

    pub fn with_theta(mut self, theta: f64) -> Result<Self, CliError> {
        if !(theta > 0.0 && theta < std::f64::consts::PI) {
            return Err(CliError::Usage(format!("--theta must lie in (0, pi), got {theta}")));
        }
        self.theta = theta;
        Ok(self)
    }

    pub fn with_format(mut self, format: Option<Format>) -> Self {
        self.format = format;
        self
    }

    pub fn mass(&self) -> f64 {
        self.params.mass()
    }

    pub fn charge(&self) -> f64 {
        self.params.charge()
    }
}
