//! Curvature of the region between the horizons of a charged black hole,
//! written as the multiply warped product `R^1 x_{f1} R^1 x_{f2} S^2`.
//!
//! Three independent routes to the Ricci tensor are provided:
//!
//! - closed forms in `r` ([`reissner_nordstrom::ricci_closed_form`]),
//! - the warped-product formulas fed with analytic warp derivatives
//!   ([`warped::ricci_from_warps`] on [`reissner_nordstrom::warp_state`]),
//! - brute-force finite differences of raw metric components in any chart
//!   ([`tensor_oracle::ricci_at`]).
//!
//! Units are geometrized (`G = c = 1`): mass, charge, radius and `mu` are
//! lengths, curvature is length^-2.

pub mod calculus;
pub mod einstein_fluid;
pub mod error;
pub mod reissner_nordstrom;
pub mod tensor_oracle;
pub mod warped;

pub use calculus::{Interval, Tolerance};
pub use einstein_fluid::{EinsteinTensorDiag, FluidReport, FluidResiduals};
pub use error::{Error, Result};
pub use reissner_nordstrom::{BlackHoleParams, HorizonPair, InteriorPoint};
pub use tensor_oracle::{CurvaturePoint, MetricField};
pub use warped::{RicciDiag, WarpState};
