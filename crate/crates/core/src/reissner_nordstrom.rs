//! The region between the horizons of a charged, nonextremal black hole,
//! written as a warped product in the proper-time coordinate `mu`.
//!
//! Inside the horizons `r` is timelike. Trading it for
//!
//! ```text
//! mu(r) = integral from r_minus to r of x dx / sqrt((r_plus - x)(x - r_minus))
//! ```
//!
//! gives `ds^2 = -dmu^2 + f1^2 dnu^2 + f2^2 dOmega^2` with `f1 = N(r(mu))`
//! (the lapse) and `f2 = r(mu)`. `mu` runs from 0 at the inner horizon to
//! `m * pi` at the outer one.
//!
//! `mu(r)` is evaluated by quadrature. The closed forms are kept for
//! comparison: [`mu_of_r_paper_closed_form`] applies `arccos` to the ratio
//! `(r_plus - r) / (r_plus - r_minus)` and agrees with the integral only at
//! the two horizons; [`mu_of_r_sqrt_variant`] applies it to the square root
//! of that ratio and matches the integral everywhere.

use std::cell::RefCell;
use std::collections::VecDeque;
use std::f64::consts::PI;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::calculus::{self, Abscissa, Interval, Tolerance};
use crate::error::{Error, Result};
use crate::tensor_oracle::{ricci_at, CurvaturePoint, Matrix4, MetricField};
use crate::warped::{self, RicciDiag, WarpState};

/// Mass and charge in geometrized units (`G = c = 1`), with `0 <= Q < m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlackHoleParams {
    mass: f64,
    charge: f64,
}

impl BlackHoleParams {
    /// Only `Q^2` enters the geometry, so a negative charge is replaced by `|Q|`.
    pub fn new(mass: f64, charge: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive and finite, got {mass}"
            )));
        }
        if !charge.is_finite() {
            return Err(Error::InvalidParameter(format!("charge must be finite, got {charge}")));
        }
        let charge = charge.abs();
        if charge >= mass {
            return Err(Error::Extremal { mass, charge });
        }
        Ok(Self { mass, charge })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    /// `m^2 - Q^2`, positive for every valid parameter set.
    pub fn extremal_margin(&self) -> f64 {
        // m - Q is exact near extremality; carry the rounding error of m + Q.
        let (m, q) = (self.mass, self.charge);
        let sum = m + q;
        let back = sum - m;
        let sum_err = (m - (sum - back)) + (q - back);
        let diff = m - q;
        diff.mul_add(sum, diff * sum_err)
    }

    /// Value of `mu` at the outer horizon.
    pub fn mu_max(&self) -> f64 {
        self.mass * PI
    }
}

/// Outer and inner horizon radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HorizonPair {
    pub r_plus: f64,
    pub r_minus: f64,
}

impl HorizonPair {
    pub fn width(&self) -> f64 {
        self.r_plus - self.r_minus
    }

    pub fn interior(&self) -> Interval {
        Interval::new(self.r_minus, self.r_plus).expect("horizons are ordered for nonextremal parameters")
    }

    pub fn contains_open(&self, r: f64) -> bool {
        self.r_minus < r && r < self.r_plus
    }

    /// The interior with a band of `guard_fraction * width` removed at each horizon.
    pub fn guarded(&self, guard_fraction: f64) -> Result<Interval> {
        if !(guard_fraction > 0.0 && guard_fraction < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "guard fraction must lie in (0, 0.5), got {guard_fraction}"
            )));
        }
        let band = guard_fraction * self.width();
        Interval::new(self.r_minus + band, self.r_plus - band)
    }
}

/// A point of the interior labelled by both time coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteriorPoint {
    pub r: f64,
    pub mu: f64,
}

impl InteriorPoint {
    pub fn from_r(p: &BlackHoleParams, r: f64, tol: Tolerance) -> Result<Self> {
        check_open(p, r)?;
        Ok(Self {
            r,
            mu: mu_of_r(p, r, tol)?,
        })
    }
}

pub fn horizons(p: &BlackHoleParams) -> HorizonPair {
    let r_plus = p.mass + p.extremal_margin().sqrt();
    // Q^2 / r_plus avoids the cancellation in m - sqrt(m^2 - Q^2) for small Q.
    let r_minus = p.charge * p.charge / r_plus;
    HorizonPair { r_plus, r_minus }
}

fn check_open(p: &BlackHoleParams, r: f64) -> Result<HorizonPair> {
    let h = horizons(p);
    if !h.contains_open(r) {
        return Err(Error::Domain(format!(
            "r = {r} is outside the interior ({}, {})",
            h.r_minus, h.r_plus
        )));
    }
    Ok(h)
}

fn check_closed(p: &BlackHoleParams, r: f64) -> Result<HorizonPair> {
    let h = horizons(p);
    if !(h.r_minus <= r && r <= h.r_plus) {
        return Err(Error::Domain(format!(
            "r = {r} is outside [{}, {}]",
            h.r_minus, h.r_plus
        )));
    }
    Ok(h)
}

/// `N^2 = (r_plus - r)(r - r_minus) / r^2`, positive strictly between the horizons.
pub fn lapse_squared(p: &BlackHoleParams, r: f64) -> Result<f64> {
    let h = check_open(p, r)?;
    Ok(lapse_squared_factored(&h, r))
}

fn lapse_squared_factored(h: &HorizonPair, r: f64) -> f64 {
    (h.r_plus - r) * (r - h.r_minus) / (r * r)
}

/// `mu = F(r)` by tanh-sinh quadrature of the defining integral; defined on
/// the closed interval `[r_minus, r_plus]`.
pub fn mu_of_r(p: &BlackHoleParams, r: f64, tol: Tolerance) -> Result<f64> {
    let h = check_closed(p, r)?;
    if r == h.r_minus {
        return Ok(0.0);
    }
    let above_r = h.r_plus - r;
    let iv = Interval::new(h.r_minus, r)?;
    calculus::integrate_with_endpoint_distances(|a: Abscissa| a.x / ((above_r + a.to_hi) * a.from_lo).sqrt(), iv, tol)
}

/// `2m arccos((r_plus - r)/(r_plus - r_minus)) - sqrt((r_plus - r)(r - r_minus))`.
///
/// Matches [`mu_of_r`] at both horizons only. Not used as the coordinate map.
pub fn mu_of_r_paper_closed_form(p: &BlackHoleParams, r: f64) -> Result<f64> {
    let h = check_closed(p, r)?;
    let ratio = (h.r_plus - r) / h.width();
    Ok(2.0 * p.mass * ratio.clamp(0.0, 1.0).acos() - ((h.r_plus - r) * (r - h.r_minus)).sqrt())
}

/// The closed form with `arccos` applied to the square root of the ratio,
/// which is the antiderivative of the `mu` integrand.
pub fn mu_of_r_sqrt_variant(p: &BlackHoleParams, r: f64) -> Result<f64> {
    let h = check_closed(p, r)?;
    let ratio = (h.r_plus - r) / h.width();
    Ok(2.0 * p.mass * ratio.clamp(0.0, 1.0).sqrt().acos() - ((h.r_plus - r) * (r - h.r_minus)).sqrt())
}

/// Inverse of [`mu_of_r`] by bracketed root finding over the interior.
///
/// `tol` governs the quadrature. The root itself is refined to rounding
/// level, because `dmu/dr` grows like `1 / (r_plus - r_minus)` near
/// extremality and an `r` tolerance would not bound the error in `mu`.
pub fn r_of_mu(p: &BlackHoleParams, mu: f64, tol: Tolerance) -> Result<f64> {
    if !(mu > 0.0 && mu < p.mu_max()) {
        return Err(Error::Domain(format!("mu = {mu} is outside (0, {})", p.mu_max())));
    }
    let h = horizons(p);
    let failure = RefCell::new(None);
    let residual = |r: f64| match mu_of_r(p, r, tol) {
        Ok(v) => v - mu,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    // mu this close to m*pi is indistinguishable from the outer horizon.
    if residual(h.r_plus) <= 0.0 {
        return failure.into_inner().map_or(Ok(h.r_plus), Err);
    }
    let root = calculus::find_root_bracketed(residual, h.interior(), Tolerance::machine());
    match failure.into_inner() {
        Some(e) => Err(e),
        None => root,
    }
}

/// Warp values and `mu`-derivatives at radius `r`, all analytic.
///
/// Uses `dr/dmu = N`, so `f2' = f1`, `f1' = -m/r^2 + Q^2/r^3`, `f2'' = f1'`
/// and `f1'' = -2 f1 f1' / f2 - Q^2 f1 / f2^4`.
pub fn warp_state(p: &BlackHoleParams, r: f64) -> Result<WarpState> {
    let h = check_open(p, r)?;
    let q2 = p.charge * p.charge;
    let f1 = lapse_squared_factored(&h, r).sqrt();
    let f2 = r;
    let f1p = -p.mass / (r * r) + q2 / (r * r * r);
    Ok(WarpState {
        f1,
        f2,
        f1p,
        f2p: f1,
        f1pp: -2.0 * f1 * f1p / f2 - q2 * f1 / f2.powi(4),
        f2pp: f1p,
    })
}

/// `(Q^2/r^4, -Q^2 f1^2/r^4, Q^2/r^2, Q^2 sin^2(theta)/r^2)`; the scalar is
/// the trace with the inverse metric, which cancels to rounding.
pub fn ricci_closed_form(p: &BlackHoleParams, r: f64, theta: f64) -> Result<RicciDiag> {
    warped::check_theta(theta)?;
    let w = warp_state(p, r)?;
    let q2 = p.charge * p.charge;
    let r2 = r * r;
    let r4 = r2 * r2;
    let mut rd = RicciDiag {
        r_mumu: q2 / r4,
        r_nunu: -q2 * w.f1 * w.f1 / r4,
        r_thth: q2 / r2,
        r_phph: q2 * theta.sin().powi(2) / r2,
        scalar: 0.0,
        theta,
    };
    rd.scalar = warped::scalar_from_ricci(&rd, &w);
    Ok(rd)
}

/// `n` radii uniformly spaced over the guarded interior, ascending.
pub fn interior_grid(p: &BlackHoleParams, n: usize, guard_fraction: f64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid needs at least 2 points, got {n}"
        )));
    }
    let iv = horizons(p).guarded(guard_fraction)?;
    let step = iv.width() / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { iv.hi() } else { iv.lo() + step * i as f64 })
        .collect())
}

/// The interior in Schwarzschild-like coordinates `(t, r, theta, phi)`:
/// `ds^2 = N^2 dt^2 - N^-2 dr^2 + r^2 dOmega^2`.
pub fn static_chart(p: BlackHoleParams) -> MetricField {
    let h = horizons(&p);
    MetricField::new(
        ["t", "r", "theta", "phi"],
        move |x: &[f64; 4]| {
            let r = x[1];
            let n2 = lapse_squared_factored(&h, r);
            let s2 = x[2].sin().powi(2);
            diag([n2, -1.0 / n2, r * r, r * r * s2])
        },
        move |x: &[f64; 4]| h.contains_open(x[1]) && x[2] > 0.0 && x[2] < PI,
    )
}

/// The interior as the warped product in `(mu, nu, theta, phi)`, with
/// `f1 = sqrt(N^2(r(mu)))` and `f2 = r(mu)` from the quadrature inverse.
/// Only warp values are used; no derivative relations enter.
pub fn warped_chart(p: BlackHoleParams) -> MetricField {
    let h = horizons(&p);
    let tol = Tolerance::machine();
    // Nested stencils revisit the same few mu values many times.
    let recent: Mutex<VecDeque<(u64, f64)>> = Mutex::new(VecDeque::with_capacity(RADIUS_CACHE));
    let radius = move |mu: f64| {
        let key = mu.to_bits();
        if let Some(&(_, r)) = recent.lock().unwrap().iter().find(|(k, _)| *k == key) {
            return r;
        }
        let r = r_of_mu(&p, mu, tol).unwrap_or(f64::NAN);
        let mut cache = recent.lock().unwrap();
        if cache.len() == RADIUS_CACHE {
            cache.pop_front();
        }
        cache.push_back((key, r));
        r
    };
    MetricField::new(
        ["mu", "nu", "theta", "phi"],
        move |x: &[f64; 4]| {
            let r = radius(x[0]);
            let f1sq = lapse_squared_factored(&h, r);
            let s2 = x[2].sin().powi(2);
            diag([-1.0, f1sq, r * r, r * r * s2])
        },
        move |x: &[f64; 4]| x[0] > 0.0 && x[0] < p.mu_max() && x[2] > 0.0 && x[2] < PI,
    )
}

const RADIUS_CACHE: usize = 64;

/// Fraction of the distance to the nearer end of the coordinate range used
/// as the oracle differencing step in either chart.
pub const ORACLE_STEP_FRACTION: f64 = 1.5e-2;

/// Oracle step at radius `r` in [`static_chart`].
pub fn static_chart_step(p: &BlackHoleParams, r: f64) -> f64 {
    let h = horizons(p);
    ORACLE_STEP_FRACTION * (r - h.r_minus).min(h.r_plus - r)
}

/// Oracle step at `mu` in [`warped_chart`].
pub fn warped_chart_step(p: &BlackHoleParams, mu: f64) -> f64 {
    ORACLE_STEP_FRACTION * mu.min(p.mu_max() - mu)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    Static,
    Warped,
}

/// Finite-difference curvature at radius `r` in the requested chart. The step
/// is also kept clear of the poles of the polar angle.
pub fn oracle_curvature(p: &BlackHoleParams, chart: Chart, r: f64, theta: f64) -> Result<CurvaturePoint> {
    warped::check_theta(theta)?;
    let h = horizons(p);
    if !h.contains_open(r) {
        return Err(Error::Domain(format!(
            "r = {r} is outside the open interior ({}, {})",
            h.r_minus, h.r_plus
        )));
    }
    let polar = ORACLE_STEP_FRACTION * theta.min(PI - theta);
    match chart {
        Chart::Static => ricci_at(
            &static_chart(*p),
            &[0.0, r, theta, 0.0],
            static_chart_step(p, r).min(polar),
        ),
        Chart::Warped => {
            let mu = mu_of_r(p, r, Tolerance::machine()).or_else(|_| mu_of_r(p, r, Tolerance::default()))?;
            ricci_at(
                &warped_chart(*p),
                &[mu, 0.0, theta, 0.0],
                warped_chart_step(p, mu).min(polar),
            )
        }
    }
}

fn diag(d: [f64; 4]) -> Matrix4 {
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        m[i][i] = d[i];
    }
    m
}
