//! Closed-form bounds on sliver geometry.
//!
//! All of them depend only on `(sigma, a, b, R)`. `theta`, `n`, `K` and `V`
//! go to zero with `sigma`; `choose_sigma` walks a power-of-two ladder until
//! the sliver regions around one vertex fit inside half of its `delta`-ball.

use serde::Serialize;
use std::f64::consts::PI;

use super::ThickParams;
use crate::error::{Error, Result};
use crate::hyperbolic::ball_volume;
use crate::tolerance;

/// `ln cosh x`, accurate for small `x`.
fn ln_cosh(x: f64) -> f64 {
    (2.0 * (x / 2.0).sinh().powi(2)).ln_1p()
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!("sigma must be positive, got {sigma}")))
    }
}

/// Dihedral floor `arcsin(sinh(sigma a / 2) / sinh b)`.
pub fn theta_bound(a: f64, b: f64, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if !(a > 0.0 && a <= b) {
        return Err(Error::OutOfDomain(format!("need 0 < a <= b, got a={a}, b={b}")));
    }
    let ratio = (sigma * a / 2.0).sinh() / b.sinh();
    if ratio > 1.0 {
        return Err(Error::OutOfDomain(format!("sinh(sigma a/2) exceeds sinh(b) (ratio {ratio})")));
    }
    Ok(ratio.asin())
}

/// Altitude lower bound for triangles whose apex projects inside the base,
/// taken at the extremal isosceles triangle with legs `a` inscribed in a
/// circle of radius `r0`.
///
/// With `u = |px|` along the diameter through the apex and `w = |qx|` the
/// half base, the right triangles `(p, x, q)` and `(c, x, q)` give
/// `cosh a = cosh u cosh w` and `cosh r0 = cosh(r0 - u) cosh w`. `u` is found
/// by bisection; the bound is `arccosh(cosh a cosh w - sinh a sinh w) = a - w`.
pub fn h1_bound(a: f64, r0: f64) -> Result<f64> {
    if !(a > 0.0 && r0 > 0.0) || a > 2.0 * r0 {
        return Err(Error::OutOfDomain(format!(
            "no isosceles triangle with legs {a} inscribes in a circle of radius {r0}"
        )));
    }
    let target = ln_cosh(a);
    let g = |u: f64| ln_cosh(u) + ln_cosh(r0) - ln_cosh(r0 - u) - target;
    // g is increasing on [0, 2 r0], g(0) < 0, and u <= a since cosh w >= 1.
    let (mut lo, mut hi) = (0.0, a.min(2.0 * r0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let u = 0.5 * (lo + hi);
    // cosh w - 1 = exp(ln cosh a - ln cosh u) - 1
    let cosh_w_m1 = (target - ln_cosh(u)).exp_m1().max(0.0);
    let w = 2.0 * (cosh_w_m1 / 2.0).sqrt().asinh();
    Ok((a - w).abs())
}

/// Altitude lower bound `arcsinh(sinh a / sinh b * sinh h1(a, R))` for
/// triangles with edges in `[a, b]` and circumradius at most `R`.
pub fn h0_bound(a: f64, b: f64, r: f64) -> Result<f64> {
    if !(a > 0.0 && a <= b) {
        return Err(Error::OutOfDomain(format!("need 0 < a <= b, got a={a}, b={b}")));
    }
    let h1 = h1_bound(a, r)?;
    if a == b {
        return Ok(h1);
    }
    Ok((a.sinh() / b.sinh() * h1.sinh()).asinh())
}

/// Upper bound on `d_v / c_v` at every vertex of a `(sigma, R/a)`-sliver.
pub fn n_bound(sigma: f64, a: f64, b: f64, r: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let h0 = h0_bound(a, b, r)?;
    Ok(2.0 * (b.sinh() * (sigma * r).sinh() / h0.sinh()).asinh() / a)
}

/// Half-angle of the `d(p, P)`-neighborhood wedge, `pi - 4 atan(exp(-n R))`,
/// evaluated as `4 atan(tanh(n R / 2))`.
pub fn j_bound(sigma: f64, a: f64, b: f64, r: f64) -> Result<f64> {
    let n = n_bound(sigma, a, b, r)?;
    Ok(4.0 * (n * r / 2.0).tanh().atan())
}

/// Bound on the distance from any sliver vertex to the circumcircle of the
/// opposite face.
pub fn k_bound(sigma: f64, a: f64, b: f64, r: f64) -> Result<f64> {
    let n = n_bound(sigma, a, b, r)?;
    let j = 4.0 * (n * r / 2.0).tanh().atan();
    if j >= PI / 2.0 {
        return Err(Error::OutOfDomain(format!("J = {j} >= pi/2; sigma {sigma} too large")));
    }
    Ok(n * r + 2.0 * j.tan() * r.cosh() * r.sinh() / (a / 2.0).sinh())
}

/// Volume bound for one sliver region: a circle of radius at most `R` is
/// covered by `ceil(2 pi sinh R / K)` balls of radius `2K`, which then cover
/// its `K`-neighborhood.
pub fn v_bound(sigma: f64, a: f64, b: f64, r: f64) -> Result<f64> {
    let k = k_bound(sigma, a, b, r)?;
    let count = (2.0 * PI * r.sinh() / k).ceil();
    Ok(count * ball_volume(2.0 * k)?)
}

/// Packing count `m` and triple cap `N = C(m, 3)`.
pub fn neighbor_cap(p: &ThickParams) -> Result<(u64, u64)> {
    let small = p.eps / 2.0 - p.delta;
    if !(small > 0.0) {
        return Err(Error::BadParams(format!("eps/2 - delta must be positive, got {small}")));
    }
    let ratio = ball_volume(2.0 * p.eps + 2.0 * p.delta)? / ball_volume(small)?;
    let m = ratio.floor() as u64;
    Ok((m, choose3(m)))
}

fn choose3(m: u64) -> u64 {
    if m < 3 {
        0
    } else {
        let m = m as u128;
        u64::try_from(m * (m - 1) * (m - 2) / 6).unwrap_or(u64::MAX)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SigmaChoice {
    pub sigma: f64,
    /// Ladder rung, `sigma = 2^-k`.
    pub k: u32,
    /// `N * V(sigma)`.
    pub region_volume: f64,
    /// `SIGMA_BUDGET * vol(B(delta))`.
    pub budget: f64,
}

/// Largest `sigma = 2^-k` with `N * V(sigma) <= 0.5 vol(B(delta))`. Rungs
/// where `K` is undefined count as infeasible.
pub fn choose_sigma(p: &ThickParams) -> Result<SigmaChoice> {
    let (_, n) = neighbor_cap(p)?;
    let budget = tolerance::SIGMA_BUDGET * ball_volume(p.delta)?;
    for k in 0..=tolerance::SIGMA_LADDER_DEPTH {
        let sigma = (-(k as f64)).exp2();
        let Ok(v) = v_bound(sigma, p.a, p.b, p.r) else { continue };
        let region_volume = n as f64 * v;
        if region_volume <= budget {
            return Ok(SigmaChoice { sigma, k, region_volume, budget });
        }
    }
    Err(Error::NoFeasibleSigma(tolerance::SIGMA_LADDER_DEPTH))
}

/// Every constant for one parameter set, as printed by `constants`.
/// Bounds undefined at the given sigma are `None`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Constants {
    pub eps: f64,
    pub delta: f64,
    pub a: f64,
    pub b: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub rho: f64,
    pub theta: Option<f64>,
    pub h0: Option<f64>,
    pub n: Option<f64>,
    #[serde(rename = "J")]
    pub j: Option<f64>,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    #[serde(rename = "V")]
    pub v: Option<f64>,
    pub m: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub sigma_star: Option<f64>,
}

impl Constants {
    pub fn evaluate(p: &ThickParams) -> Result<Self> {
        let (m, big_n) = neighbor_cap(p)?;
        let s = p.sigma;
        Ok(Constants {
            eps: p.eps,
            delta: p.delta,
            a: p.a,
            b: p.b,
            r: p.r,
            rho: p.rho,
            theta: theta_bound(p.a, p.b, s).ok(),
            h0: h0_bound(p.a, p.b, p.r).ok(),
            n: n_bound(s, p.a, p.b, p.r).ok(),
            j: j_bound(s, p.a, p.b, p.r).ok(),
            k: k_bound(s, p.a, p.b, p.r).ok(),
            v: v_bound(s, p.a, p.b, p.r).ok(),
            m,
            big_n,
            sigma_star: choose_sigma(p).ok().map(|c| c.sigma),
        })
    }
}
