//! Shared fixtures for the benchmarks.

use rnwarp_core::BlackHoleParams;

/// The parameter sets the acceptance suite sweeps.
pub const PAIRS: [(f64, f64); 5] = [(1.0, 0.0), (1.0, 0.3), (1.0, 0.6), (1.0, 0.9), (2.0, 1.0)];

pub fn params(m: f64, q: f64) -> BlackHoleParams {
    BlackHoleParams::new(m, q).expect("benchmark parameters are nonextremal")
}

pub fn label(m: f64, q: f64) -> String {
    format!("m={m},Q={q}")
}
