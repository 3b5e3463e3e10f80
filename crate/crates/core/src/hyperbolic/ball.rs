//! Poincare ball coordinates.

use super::HPoint;
use crate::error::{Error, Result};
use crate::tolerance;

/// Stereographic projection from the hyperboloid into the open unit ball.
pub fn to_ball(p: &HPoint) -> [f64; 3] {
    let x = p.coords();
    let s = 1.0 / (1.0 + x[0]);
    [x[1] * s, x[2] * s, x[3] * s]
}

/// Inverse of [`to_ball`].
pub fn from_ball(y: [f64; 3]) -> Result<HPoint> {
    let r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    let r = r2.sqrt();
    if !r.is_finite() || r >= 1.0 - tolerance::BALL_BOUNDARY {
        return Err(Error::BallBoundary(r));
    }
    let s = 2.0 / (1.0 - r2);
    Ok(HPoint::from_spatial(y[0] * s, y[1] * s, y[2] * s))
}

/// Distance in the ball model, `cosh d = 1 + 2|y-z|^2 / ((1-|y|^2)(1-|z|^2))`.
pub fn ball_distance(y: [f64; 3], z: [f64; 3]) -> f64 {
    let n2 = |v: [f64; 3]| v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    let diff = [y[0] - z[0], y[1] - z[1], y[2] - z[2]];
    let denom = ((1.0 - n2(y)) * (1.0 - n2(z))).sqrt();
    2.0 * (n2(diff).sqrt() / denom).asinh()
}
