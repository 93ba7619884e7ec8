//! The multiply warped product `R^1 x_{f1} R^1 x_{f2} S^2` with metric
//!
//! ```text
//! ds^2 = -dmu^2 + f1(mu)^2 dnu^2 + f2(mu)^2 (dtheta^2 + sin^2(theta) dphi^2)
//! ```
//!
//! Curvature is computed from warp values and their `mu`-derivatives only;
//! how those derivatives were obtained is the caller's business.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Warping functions and their first and second `mu`-derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WarpState {
    pub f1: f64,
    pub f2: f64,
    pub f1p: f64,
    pub f2p: f64,
    pub f1pp: f64,
    pub f2pp: f64,
}

impl WarpState {
    pub fn validate(&self) -> Result<()> {
        if !(self.f1 > 0.0 && self.f2 > 0.0) {
            return Err(Error::Domain(format!(
                "warping functions must be positive, got f1 = {}, f2 = {}",
                self.f1, self.f2
            )));
        }
        Ok(())
    }

    /// Diagonal of the metric at polar angle `theta`, in (mu, nu, theta, phi) order.
    pub fn metric_diag(&self, theta: f64) -> [f64; 4] {
        let f2sq = self.f2 * self.f2;
        [-1.0, self.f1 * self.f1, f2sq, f2sq * theta.sin().powi(2)]
    }
}

/// The four nonvanishing Ricci components and the scalar curvature.
///
/// `r_phph` carries its `sin^2(theta)` factor; `theta` records where it was taken.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RicciDiag {
    pub r_mumu: f64,
    pub r_nunu: f64,
    pub r_thth: f64,
    pub r_phph: f64,
    pub scalar: f64,
    pub theta: f64,
}

impl RicciDiag {
    pub fn components(&self) -> [f64; 4] {
        [self.r_mumu, self.r_nunu, self.r_thth, self.r_phph]
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(Error::Domain(format!("polar angle must lie in (0, pi), got {theta}")));
    }
    Ok(())
}

/// Ricci components of the warped metric from warp values and derivatives.
pub fn ricci_from_warps(w: &WarpState, theta: f64) -> Result<RicciDiag> {
    w.validate()?;
    check_theta(theta)?;
    let WarpState {
        f1,
        f2,
        f1p,
        f2p,
        f1pp,
        f2pp,
    } = *w;

    let r_mumu = -f1pp / f1 - 2.0 * f2pp / f2;
    let r_nunu = 2.0 * f1 * f1p * f2p / f2 + f1 * f1pp;
    let r_thth = f1p * f2 * f2p / f1 + f2 * f2pp + f2p * f2p + 1.0;
    let r_phph = r_thth * theta.sin().powi(2);

    let mut rd = RicciDiag {
        r_mumu,
        r_nunu,
        r_thth,
        r_phph,
        scalar: 0.0,
        theta,
    };
    rd.scalar = scalar_from_ricci(&rd, w);
    Ok(rd)
}

/// Trace of the Ricci tensor with the inverse warped metric.
///
/// At the poles `sin(theta) = 0`; the `phi` term then reuses the `theta`
/// term, which is what it equals away from the poles.
pub fn scalar_from_ricci(rd: &RicciDiag, w: &WarpState) -> f64 {
    let f1sq = w.f1 * w.f1;
    let f2sq = w.f2 * w.f2;
    let sin2 = rd.theta.sin().powi(2);
    let theta_term = rd.r_thth / f2sq;
    let phi_term = if sin2 == 0.0 {
        theta_term
    } else {
        rd.r_phph / (f2sq * sin2)
    };
    -rd.r_mumu + rd.r_nunu / f1sq + theta_term + phi_term
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn unit() -> WarpState {
        WarpState {
            f1: 1.0,
            f2: 1.0,
            f1p: 0.0,
            f2p: 0.0,
            f1pp: 0.0,
            f2pp: 0.0,
        }
    }

    // m = 1, Q = 0.6 at r = 1, derivatives by hand from the interior relations.
    fn charged_at_unit_radius() -> WarpState {
        WarpState {
            f1: 0.8,
            f2: 1.0,
            f1p: -0.64,
            f2p: 0.8,
            f1pp: 2.0 * 0.8 * 0.64 - 0.36 * 0.8,
            f2pp: -0.64,
        }
    }

    #[test]
    fn unit_warps_keep_only_sphere_term() {
        let rd = ricci_from_warps(&unit(), FRAC_PI_2).unwrap();
        assert_eq!(rd.components(), [0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn charged_interior_point() {
        let rd = ricci_from_warps(&charged_at_unit_radius(), FRAC_PI_2).unwrap();
        let expected = [0.36, -0.2304, 0.36, 0.36];
        for (got, want) in rd.components().iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert!(rd.scalar.abs() < 1e-10);
    }

    #[test]
    fn schwarzschild_interior_point_is_ricci_flat() {
        // m = 1, Q = 0, r = 1: f1 = 1, f1' = -1, f1'' = 2.
        let w = WarpState {
            f1: 1.0,
            f2: 1.0,
            f1p: -1.0,
            f2p: 1.0,
            f1pp: 2.0,
            f2pp: -1.0,
        };
        let rd = ricci_from_warps(&w, FRAC_PI_2).unwrap();
        for c in rd.components() {
            assert!(c.abs() < 1e-14);
        }
    }

    #[test]
    fn scalar_trace_arithmetic() {
        let zero = RicciDiag {
            r_mumu: 0.0,
            r_nunu: 0.0,
            r_thth: 0.0,
            r_phph: 0.0,
            scalar: 0.0,
            theta: 1.0,
        };
        assert_eq!(scalar_from_ricci(&zero, &unit()), 0.0);

        let ones = RicciDiag {
            r_mumu: 1.0,
            r_nunu: 1.0,
            r_thth: 1.0,
            r_phph: 1.0,
            scalar: 0.0,
            theta: FRAC_PI_2,
        };
        assert_eq!(scalar_from_ricci(&ones, &unit()), 2.0);
    }

    #[test]
    fn scalar_at_pole_uses_theta_term() {
        let rd = RicciDiag {
            r_mumu: 0.5,
            r_nunu: 0.25,
            r_thth: 2.0,
            r_phph: 0.0,
            scalar: 0.0,
            theta: 0.0,
        };
        let w = WarpState {
            f1: 0.5,
            f2: 2.0,
            ..unit()
        };
        assert_eq!(scalar_from_ricci(&rd, &w), -0.5 + 1.0 + 0.5 + 0.5);
    }

    #[test]
    fn rejects_nonpositive_warps_and_bad_theta() {
        let w = WarpState { f1: 0.0, ..unit() };
        assert!(matches!(ricci_from_warps(&w, 1.0), Err(Error::Domain(_))));
        let w = WarpState { f2: -1.0, ..unit() };
        assert!(matches!(ricci_from_warps(&w, 1.0), Err(Error::Domain(_))));
        assert!(ricci_from_warps(&unit(), 0.0).is_err());
        assert!(ricci_from_warps(&unit(), PI).is_err());
    }

    fn any_warp() -> impl Strategy<Value = WarpState> {
        (
            0.1f64..5.0,
            0.1f64..5.0,
            -3.0f64..3.0,
            -3.0f64..3.0,
            -3.0f64..3.0,
            -3.0f64..3.0,
        )
            .prop_map(|(f1, f2, f1p, f2p, f1pp, f2pp)| WarpState {
                f1,
                f2,
                f1p,
                f2p,
                f1pp,
                f2pp,
            })
    }

    proptest! {
        #[test]
        fn phi_component_is_theta_component_times_sin2(w in any_warp(), theta in 0.01f64..3.13) {
            let rd = ricci_from_warps(&w, theta).unwrap();
            let want = rd.r_thth * theta.sin().powi(2);
            prop_assert!((rd.r_phph - want).abs() <= 1e-12 * want.abs().max(f64::MIN_POSITIVE));
        }

        #[test]
        fn nu_fiber_rescaling(w in any_warp(), lambda in 0.1f64..10.0, theta in 0.1f64..3.0) {
            let scaled = WarpState { f1: lambda * w.f1, f1p: lambda * w.f1p, f1pp: lambda * w.f1pp, ..w };
            let a = ricci_from_warps(&w, theta).unwrap();
            let b = ricci_from_warps(&scaled, theta).unwrap();
            let close = |x: f64, y: f64| (x - y).abs() <= 1e-10 * x.abs().max(y.abs()).max(1.0);
            prop_assert!(close(a.r_mumu, b.r_mumu));
            prop_assert!(close(a.r_thth, b.r_thth));
            prop_assert!(close(a.r_phph, b.r_phph));
            prop_assert!(close(lambda * lambda * a.r_nunu, b.r_nunu));
        }
    }
}
