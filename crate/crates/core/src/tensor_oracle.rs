//! Brute-force curvature from raw metric components.
//!
//! Christoffel symbols come from central differences of the metric, Ricci
//! from central differences of the Christoffel symbols. Both levels use the
//! nine-point (eighth-order) stencil with the same step, which tolerates
//! steps around `eps^(1/9)` of the local coordinate scale. Nothing here knows
//! about warped products, so it can referee the closed forms.
//!
//! Conventions: signature (-, +, +, +) where the chart allows it,
//! `Gamma^a_bc = 1/2 g^ad (d_b g_dc + d_c g_db - d_d g_bc)` and
//! `R_ab = d_c Gamma^c_ab - d_a Gamma^c_cb + Gamma^c_cd Gamma^d_ab - Gamma^c_ad Gamma^d_cb`,
//! under which a round 2-sphere of any radius has `R_thth = +1`.

#![allow(clippy::needless_range_loop)]

use std::cell::RefCell;

use serde::Serialize;

use crate::error::{Error, Result};

pub type Point = [f64; 4];
pub type Matrix4 = [[f64; 4]; 4];
/// `christoffel[a][b][c]` is `Gamma^a_bc`.
pub type Christoffel = [[[f64; 4]; 4]; 4];

type MetricFn = dyn Fn(&Point) -> Matrix4 + Send + Sync;
type DomainFn = dyn Fn(&Point) -> bool + Send + Sync;

/// A metric in one coordinate chart.
pub struct MetricField {
    coord_names: [String; 4],
    g: Box<MetricFn>,
    domain: Box<DomainFn>,
}

impl std::fmt::Debug for MetricField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MetricField")
            .field("coord_names", &self.coord_names)
            .finish_non_exhaustive()
    }
}

impl MetricField {
    pub fn new<G, D>(coord_names: [&str; 4], g: G, domain: D) -> Self
    where
        G: Fn(&Point) -> Matrix4 + Send + Sync + 'static,
        D: Fn(&Point) -> bool + Send + Sync + 'static,
    {
        Self {
            coord_names: coord_names.map(str::to_owned),
            g: Box::new(g),
            domain: Box::new(domain),
        }
    }

    pub fn coord_names(&self) -> &[String; 4] {
        &self.coord_names
    }

    pub fn in_domain(&self, x: &Point) -> bool {
        (self.domain)(x)
    }

    /// Metric components at `x`, refusing points outside the chart.
    pub fn components(&self, x: &Point) -> Result<Matrix4> {
        if !self.in_domain(x) {
            return Err(Error::Domain(format!("{x:?} is outside the chart")));
        }
        let g = (self.g)(x);
        if g.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("metric is not finite at {x:?}")));
        }
        Ok(g)
    }
}

/// Connection and curvature of a metric at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvaturePoint {
    pub point: Point,
    pub christoffel: Christoffel,
    pub ricci: Matrix4,
    pub scalar: f64,
}

/// Default differencing step for a point: `eps^(1/9)` times the largest
/// coordinate magnitude (at least 1). Charts whose metric varies on a
/// shorter scale need a step proportional to that scale instead.
pub fn default_step(x: &Point) -> f64 {
    let scale = x.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    f64::EPSILON.powf(1.0 / 9.0) * scale
}

fn cofactors(m: &Matrix4) -> Matrix4 {
    let minor = |skip_r: usize, skip_c: usize| -> f64 {
        let mut rows = [0usize; 3];
        let mut cols = [0usize; 3];
        for (slot, i) in rows.iter_mut().zip((0..4).filter(|&i| i != skip_r)) {
            *slot = i;
        }
        for (slot, j) in cols.iter_mut().zip((0..4).filter(|&j| j != skip_c)) {
            *slot = j;
        }
        let e = |i: usize, j: usize| m[rows[i]][cols[j]];
        e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
    };
    let mut cof = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            cof[i][j] = sign * minor(i, j);
        }
    }
    cof
}

pub fn determinant(m: &Matrix4) -> f64 {
    let cof = cofactors(m);
    (0..4).map(|j| m[0][j] * cof[0][j]).sum()
}

/// Inverse by cofactors. `None` when `|det|` is at most `1e-12` times the
/// product of the row norms, which bounds it (Hadamard).
pub fn invert(m: &Matrix4) -> Option<Matrix4> {
    let cof = cofactors(m);
    let det: f64 = (0..4).map(|j| m[0][j] * cof[0][j]).sum();
    let scale: f64 = m
        .iter()
        .map(|row| row.iter().map(|v| v * v).sum::<f64>().sqrt())
        .product();
    if !det.is_finite() || det.abs() <= 1e-12 * scale {
        return None;
    }
    let mut inv = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            inv[i][j] = cof[j][i] / det;
        }
    }
    Some(inv)
}

fn flatten16(m: &Matrix4) -> [f64; 16] {
    let mut out = [0.0; 16];
    for i in 0..4 {
        out[4 * i..4 * i + 4].copy_from_slice(&m[i]);
    }
    out
}

fn flatten64(c: &Christoffel) -> [f64; 64] {
    let mut out = [0.0; 64];
    for a in 0..4 {
        for b in 0..4 {
            out[16 * a + 4 * b..16 * a + 4 * b + 4].copy_from_slice(&c[a][b]);
        }
    }
    out
}

fn shifted(x: &Point, dir: usize, to: f64) -> Point {
    let mut y = *x;
    y[dir] = to;
    y
}

/// Partial derivatives of a flattened tensor field along each coordinate,
/// `out[d]` being the derivative along coordinate `d`. The first error raised
/// by `field` at any stencil point is returned.
fn partials<const N: usize, F>(field: F, x: &Point, h: f64) -> Result<[[f64; N]; 4]>
where
    F: Fn(&Point) -> Result<[f64; N]>,
{
    let failure = RefCell::new(None);
    let mut out = [[0.0; N]; 4];
    for (dir, slot) in out.iter_mut().enumerate() {
        *slot = central8(
            |t| match field(&shifted(x, dir, t)) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    [f64::NAN; N]
                }
            },
            x[dir],
            h,
        );
    }
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Nine-point central first derivative, componentwise.
fn central8<const N: usize, F>(f: F, x: f64, h: f64) -> [f64; N]
where
    F: Fn(f64) -> [f64; N],
{
    const W: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    // A power of two keeps every stencil point x + k h exact away from binade edges.
    let h = if h > 0.0 && h.is_finite() {
        2f64.powi(h.log2().floor() as i32)
    } else {
        h
    };
    let mut out = [0.0; N];
    for (k, w) in W.iter().enumerate() {
        let d = (k + 1) as f64 * h;
        let (p, m) = (f(x + d), f(x - d));
        for i in 0..N {
            out[i] += w * (p[i] - m[i]);
        }
    }
    for v in out.iter_mut() {
        *v /= h;
    }
    out
}

fn inverse_at(mf: &MetricField, x: &Point) -> Result<(Matrix4, Matrix4)> {
    let g = mf.components(x)?;
    let inv = invert(&g).ok_or_else(|| Error::SingularMetric {
        point: *x,
        det: determinant(&g),
    })?;
    Ok((g, inv))
}

/// Levi-Civita connection at `x` with metric-differencing step `h`.
pub fn christoffel_at(mf: &MetricField, x: &Point, h: f64) -> Result<Christoffel> {
    let (_, ginv) = inverse_at(mf, x)?;
    let dg_flat = partials(|y| mf.components(y).map(|g| flatten16(&g)), x, h)?;
    // dg[k][i][j] = d_k g_ij
    let dg = |k: usize, i: usize, j: usize| dg_flat[k][4 * i + j];

    let mut gamma = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in b..4 {
                let s: f64 = (0..4)
                    .map(|d| ginv[a][d] * (dg(b, d, c) + dg(c, d, b) - dg(d, b, c)))
                    .sum();
                gamma[a][b][c] = 0.5 * s;
                gamma[a][c][b] = 0.5 * s;
            }
        }
    }
    Ok(gamma)
}

/// Christoffel symbols, Ricci tensor, and scalar curvature at `x`.
///
/// The chart must contain an `8 h` neighborhood of `x` along each coordinate.
pub fn ricci_at(mf: &MetricField, x: &Point, h: f64) -> Result<CurvaturePoint> {
    let (_, ginv) = inverse_at(mf, x)?;
    let gamma = christoffel_at(mf, x, h)?;
    let dgamma_flat = partials(|y| christoffel_at(mf, y, h).map(|c| flatten64(&c)), x, h)?;
    // dgamma(e, a, b, c) = d_e Gamma^a_bc
    let dgamma = |e: usize, a: usize, b: usize, c: usize| dgamma_flat[e][16 * a + 4 * b + c];

    let mut ricci = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let mut s = 0.0;
            for c in 0..4 {
                s += dgamma(c, c, a, b) - dgamma(a, c, c, b);
                for d in 0..4 {
                    s += gamma[c][c][d] * gamma[d][a][b] - gamma[c][a][d] * gamma[d][c][b];
                }
            }
            ricci[a][b] = s;
        }
    }
    let scalar = (0..4)
        .flat_map(|a| (0..4).map(move |b| (a, b)))
        .map(|(a, b)| ginv[a][b] * ricci[a][b])
        .sum();

    Ok(CurvaturePoint {
        point: *x,
        christoffel: gamma,
        ricci,
        scalar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn minkowski() -> MetricField {
        MetricField::new(
            ["t", "x", "y", "z"],
            |_| {
                let mut g = [[0.0; 4]; 4];
                g[0][0] = -1.0;
                g[1][1] = 1.0;
                g[2][2] = 1.0;
                g[3][3] = 1.0;
                g
            },
            |_| true,
        )
    }

    // Static cylinder R x R x S^2 with sphere radius a.
    fn sphere_block(a: f64) -> MetricField {
        MetricField::new(
            ["t", "x", "theta", "phi"],
            move |x| {
                let mut g = [[0.0; 4]; 4];
                g[0][0] = -1.0;
                g[1][1] = 1.0;
                g[2][2] = a * a;
                g[3][3] = a * a * x[2].sin().powi(2);
                g
            },
            |x| x[2] > 0.0 && x[2] < PI,
        )
    }

    #[test]
    fn flat_metric_has_no_connection_or_curvature() {
        let x = [0.3, -1.0, 2.0, 5.0];
        let h = default_step(&x);
        let gamma = christoffel_at(&minkowski(), &x, h).unwrap();
        assert!(gamma.iter().flatten().flatten().all(|v| v.abs() < 1e-10));
        let cp = ricci_at(&minkowski(), &x, h).unwrap();
        assert!(cp.ricci.iter().flatten().all(|v| v.abs() < 1e-8));
        assert!(cp.scalar.abs() < 1e-8);
    }

    #[test]
    fn sphere_connection_at_equator() {
        let x = [0.0, 0.0, FRAC_PI_2, 0.0];
        let gamma = christoffel_at(&sphere_block(2.0), &x, default_step(&x)).unwrap();
        assert!(gamma[2][3][3].abs() < 1e-10);
        assert!(gamma[3][2][3].abs() < 1e-10);
        let x = [0.0, 0.0, 1.0, 0.0];
        let gamma = christoffel_at(&sphere_block(2.0), &x, default_step(&x)).unwrap();
        assert!((gamma[2][3][3] + 1f64.sin() * 1f64.cos()).abs() < 1e-9);
        assert!((gamma[3][2][3] - 1.0 / 1f64.tan()).abs() < 1e-9);
    }

    #[test]
    fn sphere_sign_convention() {
        for a in [0.5, 1.0, 3.0] {
            let x = [0.0, 0.0, 1.2, 0.0];
            let cp = ricci_at(&sphere_block(a), &x, 1e-3).unwrap();
            assert!((cp.ricci[2][2] - 1.0).abs() < 1e-7, "{}", cp.ricci[2][2]);
            assert!((cp.ricci[3][3] - 1.2f64.sin().powi(2)).abs() < 1e-7);
            assert!((cp.scalar - 2.0 / (a * a)).abs() < 1e-6);
        }
    }

    #[test]
    fn singular_and_out_of_domain_metrics() {
        let degenerate = MetricField::new(["a", "b", "c", "d"], |_| [[1.0; 4]; 4], |_| true);
        let x = [0.0; 4];
        assert!(matches!(
            christoffel_at(&degenerate, &x, 1e-3),
            Err(Error::SingularMetric { .. })
        ));

        let x = [0.0, 0.0, 1e-4, 0.0];
        assert!(matches!(ricci_at(&sphere_block(1.0), &x, 1e-3), Err(Error::Domain(_))));
    }

    #[test]
    fn cofactor_inverse() {
        let m = [
            [2.0, 1.0, 0.0, 0.0],
            [1.0, 3.0, 0.5, 0.0],
            [0.0, 0.5, -1.0, 0.2],
            [0.0, 0.0, 0.2, 4.0],
        ];
        let inv = invert(&m).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let e: f64 = (0..4).map(|k| m[i][k] * inv[k][j]).sum();
                assert!((e - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }
}
