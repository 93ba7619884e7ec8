use rayon::prelude::*;
use serde::Serialize;

use rnwarp_core::einstein_fluid;
use rnwarp_core::reissner_nordstrom as rn;

use crate::{CliError, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HorizonsOutput {
    pub r_plus: f64,
    pub r_minus: f64,
    pub extremal_margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformOutput {
    pub r: f64,
    pub mu: f64,
    pub paper_closed_form: f64,
    pub sqrt_variant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureRow {
    pub r: f64,
    pub mu: f64,
    pub f1: f64,
    pub f2: f64,
    #[serde(rename = "R_mumu")]
    pub r_mumu: f64,
    #[serde(rename = "R_nunu")]
    pub r_nunu: f64,
    #[serde(rename = "R_thth")]
    pub r_thth: f64,
    #[serde(rename = "R_phph")]
    pub r_phph: f64,
    pub scalar: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluidRow {
    pub r: f64,
    pub mu: f64,
    pub rho: f64,
    pub pressure: f64,
    pub res_mumu: f64,
    pub res_nunu: f64,
    pub res_thth: f64,
    pub res_phph: f64,
}

pub fn cmd_horizons(cfg: &RunConfig) -> HorizonsOutput {
    let h = rn::horizons(&cfg.params);
    HorizonsOutput {
        r_plus: h.r_plus,
        r_minus: h.r_minus,
        extremal_margin: cfg.params.extremal_margin(),
    }
}

/// Maps `r` to `mu` or back; exactly one of the two must be given.
pub fn cmd_transform(cfg: &RunConfig, r: Option<f64>, mu: Option<f64>) -> Result<TransformOutput, CliError> {
    let p = &cfg.params;
    let (r, mu) = match (r, mu) {
        (Some(r), None) => (r, rn::mu_of_r(p, r, cfg.tol)?),
        (None, Some(mu)) => (rn::r_of_mu(p, mu, cfg.tol)?, mu),
        _ => return Err(CliError::Usage("transform needs exactly one of --r and --mu".into())),
    };
    Ok(TransformOutput {
        r,
        mu,
        paper_closed_form: rn::mu_of_r_paper_closed_form(p, r)?,
        sqrt_variant: rn::mu_of_r_sqrt_variant(p, r)?,
    })
}

/// Closed-form Ricci components on the guarded radial grid, ascending in `r`.
pub fn cmd_curvature(cfg: &RunConfig) -> Result<Vec<CurvatureRow>, CliError> {
    let p = cfg.params;
    let grid = rn::interior_grid(&p, cfg.grid_points, cfg.guard_fraction)?;
    let rows = grid
        .par_iter()
        .map(|&r| {
            let w = rn::warp_state(&p, r)?;
            let rd = rn::ricci_closed_form(&p, r, cfg.theta)?;
            Ok(CurvatureRow {
                r,
                mu: rn::mu_of_r(&p, r, cfg.tol)?,
                f1: w.f1,
                f2: w.f2,
                r_mumu: rd.r_mumu,
                r_nunu: rd.r_nunu,
                r_thth: rd.r_thth,
                r_phph: rd.r_phph,
                scalar: rd.scalar,
            })
        })
        .collect::<rnwarp_core::Result<Vec<_>>>()?;
    Ok(rows)
}

pub fn cmd_fluid(cfg: &RunConfig) -> Result<Vec<FluidRow>, CliError> {
    let p = cfg.params;
    let grid = rn::interior_grid(&p, cfg.grid_points, cfg.guard_fraction)?;
    let rows = grid
        .par_iter()
        .map(|&r| {
            let rep = einstein_fluid::paper_fluid(&p, r, cfg.theta, cfg.tol)?;
            Ok(FluidRow {
                r,
                mu: rep.mu,
                rho: rep.rho,
                pressure: rep.pressure,
                res_mumu: rep.residuals.mumu,
                res_nunu: rep.residuals.nunu,
                res_thth: rep.residuals.thth,
                res_phph: rep.residuals.phph,
            })
        })
        .collect::<rnwarp_core::Result<Vec<_>>>()?;
    Ok(rows)
}
