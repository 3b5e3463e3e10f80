//! Circumspheres, dihedral angles, volumes and uniform sampling of balls.

use rand::Rng;
use rand_distr::{Distribution, UnitSphere};

use super::{hyp_distance, lorentz_cross, HIsometry, HPoint, Vec4};
use crate::error::{Error, Result};
use crate::tolerance;

/// Vertex pairs of a tetrahedron in the order used for edge-indexed data.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circumsphere {
    pub center: HPoint,
    pub radius: f64,
}

/// The vector orthogonal to all edge vectors from the first vertex. It is
/// timelike exactly when the four points lie on a hyperbolic sphere, and
/// then points at the center.
pub fn circumcenter_direction(t: &[HPoint; 4]) -> Vec4 {
    let p = *t[0].vec();
    lorentz_cross(&(*t[1].vec() - p), &(*t[2].vec() - p), &(*t[3].vec() - p))
}

/// Normalized volume `6 V / (l01 l02 l03)` in the small-scale limit; an
/// isometry-invariant flatness measure.
pub fn tet_sine(t: &[HPoint; 4]) -> f64 {
    let p = *t[0].vec();
    let d = [*t[1].vec() - p, *t[2].vec() - p, *t[3].vec() - p];
    let n = lorentz_cross(&d[0], &d[1], &d[2]);
    let scale = d[0].space_norm() * d[1].space_norm() * d[2].space_norm();
    if !(scale > 0.0) {
        return 0.0;
    }
    p.dot(&n).abs() / scale
}

pub(crate) fn circumsphere_unchecked(t: &[HPoint; 4]) -> Option<Circumsphere> {
    let center = HPoint::normalize(circumcenter_direction(t))?;
    let radius = t.iter().map(|v| hyp_distance(&center, v)).sum::<f64>() / 4.0;
    Some(Circumsphere { center, radius })
}

/// Circumscribed sphere of a tetrahedron.
pub fn tet_circumsphere(p: &HPoint, q: &HPoint, r: &HPoint, s: &HPoint) -> Result<Circumsphere> {
    let t = [*p, *q, *r, *s];
    if !(tet_sine(&t) >= tolerance::DEGENERATE) {
        return Err(Error::DegenerateTet);
    }
    circumsphere_unchecked(&t).ok_or(Error::NoCircumsphere)
}

/// Interior dihedral angle of `t` along the edge `(i, j)`.
///
/// Measured in the tangent space at `t[i]`: the tangents toward the two
/// remaining vertices, with their components along the edge removed, span
/// the angle between the incident faces.
pub fn dihedral_angle(t: &[HPoint; 4], edge: (usize, usize)) -> Result<f64> {
    let (i, j) = edge;
    if i == j || i > 3 || j > 3 {
        return Err(Error::DegenerateInput(format!("({i}, {j}) is not an edge")));
    }
    if !(tet_sine(t) >= tolerance::DEGENERATE) {
        return Err(Error::DegenerateTet);
    }
    let mut rest = (0..4).filter(|&v| v != i && v != j);
    let (k, l) = (rest.next().unwrap(), rest.next().unwrap());
    let base = t[i];
    let tangent = |q: &HPoint| {
        let d = *q.vec() - *base.vec();
        d + *base.vec() * base.vec().dot(&d)
    };
    let e = tangent(&t[j]);
    let e = e * (1.0 / e.space_norm());
    let reject = |v: Vec4| v - e * v.dot(&e);
    let a = reject(tangent(&t[k]));
    let b = reject(tangent(&t[l]));
    let sin = lorentz_cross(base.vec(), &a, &b).space_norm();
    Ok(sin.atan2(a.dot(&b)))
}

/// `sinh x - x` without cancellation for small `x`.
fn sinh_minus_x(x: f64) -> f64 {
    if x.abs() < 0.5 {
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut sum = term;
        let mut k = 3.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= x2 / ((k + 1.0) * (k + 2.0));
            sum += term;
            k += 2.0;
        }
        sum
    } else {
        x.sinh() - x
    }
}

/// Volume of a hyperbolic ball, `pi (sinh 2r - 2r)`.
pub fn ball_volume(r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::NegativeRadius(r));
    }
    Ok(std::f64::consts::PI * sinh_minus_x(2.0 * r))
}

fn ball_volume_unchecked(r: f64) -> f64 {
    std::f64::consts::PI * sinh_minus_x(2.0 * r)
}

/// A point uniform with respect to hyperbolic volume in `B(center, radius)`.
///
/// The direction is uniform on the unit tangent sphere and the radius solves
/// `vol(B(t)) = u vol(B(radius))` for uniform `u`, whose density is
/// proportional to `sinh^2 t`.
pub fn sample_uniform_ball<R: Rng + ?Sized>(center: &HPoint, radius: f64, rng: &mut R) -> HPoint {
    let dir: [f64; 3] = UnitSphere.sample(rng);
    let u: f64 = rng.random();
    let t = inverse_ball_cdf(u, radius);
    let local = HPoint::ORIGIN.along(&Vec4::new(0.0, dir[0], dir[1], dir[2]), t);
    HIsometry::translation(center).apply(&local)
}

/// Radius `t` in `[0, radius]` with `vol(B(t)) / vol(B(radius)) = u`.
pub(crate) fn inverse_ball_cdf(u: f64, radius: f64) -> f64 {
    if radius <= 0.0 || u <= 0.0 {
        return 0.0;
    }
    let target = u * ball_volume_unchecked(radius);
    let (mut lo, mut hi) = (0.0, radius);
    let mut t = (radius * u.cbrt()).clamp(lo, hi);
    for _ in 0..100 {
        let f = ball_volume_unchecked(t) - target;
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let slope = 4.0 * std::f64::consts::PI * t.sinh().powi(2);
        let newton = if slope > 0.0 { t - f / slope } else { f64::NAN };
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - t).abs() <= 4.0 * f64::EPSILON * t.max(f64::MIN_POSITIVE) {
            return next;
        }
        t = next;
    }
    t
}

/// A regular tetrahedron with edge length `edge` centered at the origin.
pub fn regular_tetrahedron(edge: f64) -> [HPoint; 4] {
    // cosh(edge) = cosh^2 r + sinh^2 r / 3 for circumradius r.
    let sinh_r = (1.5f64).sqrt() * (edge / 2.0).sinh();
    let r = sinh_r.asinh();
    let k = 1.0 / 3f64.sqrt();
    let dirs = [[k, k, k], [k, -k, -k], [-k, k, -k], [-k, -k, k]];
    dirs.map(|d| HPoint::ORIGIN.along(&Vec4::new(0.0, d[0], d[1], d[2]), r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volume_edge_cases() {
        assert_eq!(ball_volume(0.0).unwrap(), 0.0);
        assert!(matches!(ball_volume(-1.0), Err(Error::NegativeRadius(_))));
        let r = 1e-4;
        let euclid = 4.0 / 3.0 * std::f64::consts::PI * r * r * r;
        assert!((ball_volume(r).unwrap() / euclid - 1.0).abs() < 1e-6);
        // Continuity across the series/direct switch.
        let (a, b) = (ball_volume(0.25 - 1e-12).unwrap(), ball_volume(0.25 + 1e-12).unwrap());
        assert!((a - b).abs() / a < 1e-10);
    }

    #[test]
    fn inverse_cdf_inverts() {
        for &(u, rad) in &[(0.3, 1e-4), (0.9, 0.2), (0.01, 2.0), (1.0, 0.5)] {
            let t = inverse_ball_cdf(u, rad);
            let got = ball_volume(t).unwrap() / ball_volume(rad).unwrap();
            assert!((got - u).abs() < 1e-12, "{u} {rad} {got}");
        }
    }

    #[test]
    fn coplanar_tet_rejected() {
        let t = [
            HPoint::from_spatial(0.0, 0.0, 0.0),
            HPoint::from_spatial(0.1, 0.0, 0.0),
            HPoint::from_spatial(0.0, 0.1, 0.0),
            HPoint::from_spatial(0.1, 0.1, 0.0),
        ];
        assert_eq!(tet_circumsphere(&t[0], &t[1], &t[2], &t[3]).unwrap_err(), Error::DegenerateTet);
        assert_eq!(dihedral_angle(&t, (0, 1)).unwrap_err(), Error::DegenerateTet);
    }
}
