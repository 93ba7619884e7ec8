//! Numeric primitives shared by the geometry and the oracle: finite-difference
//! derivatives, double-exponential quadrature for integrands with
//! inverse-square-root endpoint singularities, and Brent's bracketed root
//! finder.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stopping criteria for the iterative primitives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iter: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && abs_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "abs_tol must be positive, got {abs_tol}"
            )));
        }
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must be positive, got {rel_tol}"
            )));
        }
        if max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_iter,
        })
    }

    /// The tightest tolerance that still terminates: iterate until the
    /// answer is limited by double-precision rounding.
    pub fn machine() -> Self {
        Self {
            abs_tol: f64::MIN_POSITIVE,
            rel_tol: f64::EPSILON,
            max_iter: 200,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_iter: 200,
        }
    }
}

/// An open interval `(lo, hi)` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidParameter(format!("interval ({lo}, {hi}) is not finite")));
        }
        if lo >= hi {
            return Err(Error::InvalidParameter(format!(
                "interval requires lo < hi, got ({lo}, {hi})"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// A quadrature node together with its exact distances to both endpoints.
///
/// Near an endpoint `x` itself cannot resolve the distance (it rounds onto
/// the endpoint long before the node weights become negligible), so
/// integrands that are singular there should be written in terms of
/// `from_lo` / `to_hi` instead of `x - lo` / `hi - x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub x: f64,
    pub from_lo: f64,
    pub to_hi: f64,
}

// Nodes beyond |t| = 6.5 sit closer than ~1e-300 to an endpoint.
const T_MAX: f64 = 6.5;
// Levels below this never count as converged; coarse levels can agree by accident.
const MIN_LEVEL: usize = 3;
const MAX_LEVEL: usize = 16;

/// Improper integral of `f` over `iv` by tanh-sinh quadrature.
///
/// `f` is never evaluated at the endpoints. Nodes that round onto an
/// endpoint in `x` are dropped, which caps the attainable accuracy at about
/// `sqrt(eps)` for an inverse-square-root singularity at a nonzero endpoint;
/// use [`integrate_with_endpoint_distances`] when that matters.
pub fn integrate_endpoint_singular<F>(f: F, iv: Interval, tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (lo, hi) = (iv.lo, iv.hi);
    integrate_with_endpoint_distances(
        |a: Abscissa| {
            if a.x <= lo || a.x >= hi {
                0.0
            } else {
                f(a.x)
            }
        },
        iv,
        tol,
    )
}

/// Tanh-sinh quadrature where the integrand receives each node's distances
/// to both endpoints, computed without cancellation.
pub fn integrate_with_endpoint_distances<F>(f: F, iv: Interval, tol: Tolerance) -> Result<f64>
where
    F: Fn(Abscissa) -> f64,
{
    let half = 0.5 * iv.width();
    let center = iv.lo + half;
    let max_level = tol.max_iter.clamp(MIN_LEVEL, MAX_LEVEL);

    let eval = |a: Abscissa| -> Result<f64> {
        let v = f(a);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("integrand is not finite at x = {}", a.x)))
        }
    };

    // Weighted sum over nodes t = k * step for the given k, both signs.
    let pair_sum = |t: f64| -> Result<Option<(f64, f64)>> {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u).exp();
        let near = half * 2.0 * e / (1.0 + e);
        let far = half * 2.0 / (1.0 + e);
        let weight = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
        if near == 0.0 || weight == 0.0 {
            return Ok(None);
        }
        let left = eval(Abscissa {
            x: iv.lo + near,
            from_lo: near,
            to_hi: far,
        })?;
        let right = eval(Abscissa {
            x: iv.hi - near,
            from_lo: far,
            to_hi: near,
        })?;
        Ok(Some((weight * (left + right), weight * (left.abs() + right.abs()))))
    };

    let mid = eval(Abscissa {
        x: center,
        from_lo: half,
        to_hi: half,
    })?;
    let mut sum = FRAC_PI_2 * mid;
    // Sum of |w f|, which bounds the rounding noise of the weighted sum.
    let mut abs_sum = FRAC_PI_2 * mid.abs();
    let mut k = 1usize;
    while (k as f64) <= T_MAX {
        match pair_sum(k as f64)? {
            Some((s, a)) => {
                sum += s;
                abs_sum += a;
            }
            None => break,
        }
        k += 1;
    }

    let mut step = 1.0;
    let mut estimate = half * step * sum;
    let mut error_bound = f64::INFINITY;
    for level in 1..=max_level {
        step *= 0.5;
        let mut j = 1usize;
        loop {
            let t = j as f64 * step;
            if t > T_MAX {
                break;
            }
            match pair_sum(t)? {
                Some((s, a)) => {
                    sum += s;
                    abs_sum += a;
                }
                None => break,
            }
            j += 2;
        }
        let next = half * step * sum;
        error_bound = (next - estimate).abs();
        estimate = next;
        // Convergence is quadratic, so once successive levels agree to within
        // rounding noise the newer estimate is as good as the arithmetic allows.
        let noise = 64.0 * f64::EPSILON * half * step * abs_sum;
        let target = tol.abs_tol.max(tol.rel_tol * estimate.abs()).max(noise);
        if level >= MIN_LEVEL && error_bound <= target {
            return Ok(estimate);
        }
    }
    Err(Error::Convergence {
        iterations: max_level,
        estimate,
        error_bound,
    })
}

/// Root of `g` inside `iv` by Brent's method (inverse quadratic
/// interpolation and secant steps, safeguarded by bisection).
///
/// Terminates when `|g(x)| <= abs_tol` or the bracket has shrunk below
/// `rel_tol * |x|` (plus a few ulps). The result always lies in `iv`.
pub fn find_root_bracketed<G>(g: G, iv: Interval, tol: Tolerance) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    let (mut a, mut b) = (iv.lo, iv.hi);
    let (mut fa, mut fb) = (g(a), g(b));
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(Error::Domain(format!(
            "g is not finite at the bracket ends ({fa}, {fb})"
        )));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NotBracketed {
            lo: a,
            hi: b,
            g_lo: fa,
            g_hi: fb,
        });
    }

    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..tol.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol.rel_tol * b.abs() + f64::MIN_POSITIVE;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb.abs() <= tol.abs_tol {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = g(b);
        if !fb.is_finite() {
            return Err(Error::Domain(format!("g is not finite at x = {b}")));
        }
    }
    Err(Error::Convergence {
        iterations: tol.max_iter,
        estimate: b,
        error_bound: (c - b).abs(),
    })
}

/// Which derivative a finite-difference stencil approximates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    First,
    Second,
}

/// Default step: `eps^(1/3) * max(|x|, 1)` for first derivatives,
/// `eps^(1/4) * max(|x|, 1)` for second derivatives.
pub fn default_step(x: f64, order: Order) -> f64 {
    let scale = x.abs().max(1.0);
    match order {
        Order::First => f64::EPSILON.cbrt() * scale,
        Order::Second => f64::EPSILON.powf(0.25) * scale,
    }
}

/// Central five-point finite difference of a scalar function.
pub fn derivative<F>(f: F, x: f64, order: Order, h: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    derivative_n(|x| [f(x)], x, order, h)[0]
}

/// Central five-point finite difference applied componentwise to a
/// vector-valued function, sharing the function evaluations.
///
/// First derivatives are fourth-order accurate; second derivatives use the
/// five-point stencil `(-1, 16, -30, 16, -1) / 12h^2`.
pub fn derivative_n<const N: usize, F>(f: F, x: f64, order: Order, h: f64) -> [f64; N]
where
    F: Fn(f64) -> [f64; N],
{
    // Snap h so that x + h is representable and the stencil is symmetric.
    let h = {
        let snapped = (x + h) - x;
        if snapped > 0.0 {
            snapped
        } else {
            h
        }
    };
    let p1 = f(x + h);
    let m1 = f(x - h);
    let p2 = f(x + 2.0 * h);
    let m2 = f(x - 2.0 * h);
    let mut out = [0.0; N];
    match order {
        Order::First => {
            for i in 0..N {
                out[i] = (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h);
            }
        }
        Order::Second => {
            let c = f(x);
            for i in 0..N {
                out[i] = (16.0 * (p1[i] + m1[i]) - (p2[i] + m2[i]) - 30.0 * c[i]) / (12.0 * h * h);
            }
        }
    }
    out
}
