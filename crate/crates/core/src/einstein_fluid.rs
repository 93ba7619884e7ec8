//! Einstein tensor and perfect-fluid source terms for the warped interior.
//!
//! The fluid balances used here are `R_mumu = 8 pi P f1^2`,
//! `R_nunu = -8 pi rho`, `R_thth = 8 pi P f2^2` and
//! `R_phph = 8 pi P f2^2 sin^2(theta)`. [`paper_fluid`] solves the second for
//! the density and the third for the pressure, then evaluates all four with
//! those values. The `mu-mu` balance does not close: its residual is
//! `Q^2 / f2^4 * (1 - f1^2)`, and it is reported as such.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::calculus::Tolerance;
use crate::error::Result;
use crate::reissner_nordstrom::{self as rn, BlackHoleParams};
use crate::warped::{self, RicciDiag, WarpState};

/// `G_ab = R_ab - R g_ab / 2` on the diagonal of the warped chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EinsteinTensorDiag {
    pub g_mumu: f64,
    pub g_nunu: f64,
    pub g_thth: f64,
    pub g_phph: f64,
}

impl EinsteinTensorDiag {
    pub fn components(&self) -> [f64; 4] {
        [self.g_mumu, self.g_nunu, self.g_thth, self.g_phph]
    }
}

/// Residuals of the four fluid balances, left side minus right side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidResiduals {
    pub mumu: f64,
    pub nunu: f64,
    pub thth: f64,
    pub phph: f64,
}

impl FluidResiduals {
    pub fn components(&self) -> [f64; 4] {
        [self.mumu, self.nunu, self.thth, self.phph]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidReport {
    pub r: f64,
    pub mu: f64,
    pub theta: f64,
    pub rho: f64,
    pub pressure: f64,
    pub residuals: FluidResiduals,
}

pub fn einstein_tensor(rd: &RicciDiag, w: &WarpState) -> EinsteinTensorDiag {
    let g = w.metric_diag(rd.theta);
    let half_r = 0.5 * rd.scalar;
    EinsteinTensorDiag {
        g_mumu: rd.r_mumu - half_r * g[0],
        g_nunu: rd.r_nunu - half_r * g[1],
        g_thth: rd.r_thth - half_r * g[2],
        g_phph: rd.r_phph - half_r * g[3],
    }
}

/// Diagonal of `rho u_a u_b + P (g_ab + u_a u_b)` with `u` the unit vector
/// along `d/dmu`: `(rho, P f1^2, P f2^2, P f2^2 sin^2(theta))`.
pub fn stress_energy_perfect_fluid(rho: f64, pressure: f64, w: &WarpState, theta: f64) -> [f64; 4] {
    let g = w.metric_diag(theta);
    // u_mu u_mu = 1 and g_mumu + u_mu u_mu = 0; the fiber directions carry only g.
    [rho, pressure * g[1], pressure * g[2], pressure * g[3]]
}

/// Density and pressure read off the `nu-nu` and `theta-theta` balances,
/// with the residuals of all four balances at radius `r`.
pub fn paper_fluid(p: &BlackHoleParams, r: f64, theta: f64, tol: Tolerance) -> Result<FluidReport> {
    let rd = rn::ricci_closed_form(p, r, theta)?;
    let w = rn::warp_state(p, r)?;
    let mu = rn::mu_of_r(p, r, tol)?;
    let q2 = p.charge() * p.charge();
    let f2_4 = w.f2.powi(4);
    let eight_pi = 8.0 * PI;

    let rho = q2 * w.f1 * w.f1 / (eight_pi * f2_4);
    let pressure = q2 / (eight_pi * f2_4);
    let sin2 = theta.sin().powi(2);

    let residuals = FluidResiduals {
        mumu: rd.r_mumu - eight_pi * pressure * w.f1 * w.f1,
        nunu: rd.r_nunu + eight_pi * rho,
        thth: rd.r_thth - eight_pi * pressure * w.f2 * w.f2,
        phph: rd.r_phph - eight_pi * pressure * w.f2 * w.f2 * sin2,
    };
    Ok(FluidReport {
        r,
        mu,
        theta,
        rho,
        pressure,
        residuals,
    })
}

/// Einstein tensor at radius `r` from the warp-formula Ricci components.
pub fn einstein_tensor_at(p: &BlackHoleParams, r: f64, theta: f64) -> Result<EinsteinTensorDiag> {
    let w = rn::warp_state(p, r)?;
    let rd = warped::ricci_from_warps(&w, theta)?;
    Ok(einstein_tensor(&rd, &w))
}
