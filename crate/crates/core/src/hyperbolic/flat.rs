//! Totally geodesic planes, geodesic lines and circles.

use super::{hyp_distance, lorentz_cross, pythagoras, HPoint, Vec4};
use crate::error::{Error, Result};
use crate::tolerance;

/// The plane `{p : <p, n> = 0}` for a unit spacelike normal `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPlane {
    normal: Vec4,
    anchor: HPoint,
}

impl HPlane {
    /// Plane through three points.
    pub fn through(q: &HPoint, r: &HPoint, s: &HPoint) -> Result<Self> {
        let dr = *r.vec() - *q.vec();
        let ds = *s.vec() - *q.vec();
        let m = lorentz_cross(q.vec(), &dr, &ds);
        let scale = dr.space_norm() * ds.space_norm();
        let len = m.space_norm();
        if !(scale > 0.0) || !(len / scale >= tolerance::DEGENERATE) {
            return Err(Error::DegenerateFace);
        }
        Ok(HPlane { normal: m * (1.0 / len), anchor: *q })
    }

    /// Plane with a given unit normal. The normal must be spacelike with
    /// `<n, n> = 1`.
    pub fn from_normal(n: Vec4) -> Result<Self> {
        if !n.is_finite() || (n.norm_sq() - 1.0).abs() > tolerance::UNIT_NORMAL * n.coord_norm().max(1.0).powi(2) {
            return Err(Error::BadNormal);
        }
        // Closest point of the plane to the hyperboloid origin.
        let o = *HPoint::ORIGIN.vec();
        let anchor = HPoint::normalize(o - n * o.dot(&n)).ok_or(Error::BadNormal)?;
        Ok(HPlane { normal: n, anchor })
    }

    pub fn normal(&self) -> &Vec4 {
        &self.normal
    }

    /// `sinh` of the signed distance from `p` to the plane.
    #[inline]
    pub fn signed_sinh(&self, p: &HPoint) -> f64 {
        (*p.vec() - *self.anchor.vec()).dot(&self.normal)
    }

    #[inline]
    pub fn distance(&self, p: &HPoint) -> f64 {
        self.signed_sinh(p).abs().asinh()
    }

    pub fn contains(&self, p: &HPoint, tol: f64) -> bool {
        self.distance(p) <= tol
    }

    /// Flips the normal so that `p` lies on the positive side.
    pub fn oriented_toward(mut self, p: &HPoint) -> Self {
        if self.signed_sinh(p) < 0.0 {
            self.normal = -self.normal;
        }
        self
    }
}

/// Orthogonal projection onto a plane: the foot and the distance to it.
pub fn project_to_plane(p: &HPoint, plane: &HPlane) -> (HPoint, f64) {
    let g = plane.signed_sinh(p);
    let foot = HPoint::normalize(*p.vec() - plane.normal * g).unwrap_or(*p);
    (foot, g.abs().asinh())
}

/// The geodesic through two distinct anchors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HLine {
    anchor: HPoint,
    other: HPoint,
    tangent: Vec4,
}

impl HLine {
    pub fn new(a: HPoint, b: HPoint) -> Result<Self> {
        let d = hyp_distance(&a, &b);
        if !(d > tolerance::LINE_ANCHOR) {
            return Err(Error::DegenerateLine(d));
        }
        let tangent = a.direction_to(&b).ok_or(Error::DegenerateLine(d))?;
        Ok(HLine { anchor: a, other: b, tangent })
    }

    pub fn anchors(&self) -> (HPoint, HPoint) {
        (self.anchor, self.other)
    }

    /// Unit tangent of the line at its point `x`.
    pub fn tangent_at(&self, x: &HPoint) -> Vec4 {
        let t = self.tangent + *x.vec() * x.vec().dot(&self.tangent);
        t * (1.0 / t.space_norm())
    }

    /// The point of the line at signed arc length `t` from the first anchor.
    pub fn point_at(&self, t: f64) -> HPoint {
        self.anchor.along(&self.tangent, t)
    }
}

/// Orthogonal projection onto a geodesic line.
pub fn project_to_line(p: &HPoint, line: &HLine) -> (HPoint, f64) {
    let a = *line.anchor.vec();
    let e = line.tangent;
    let d = *p.vec() - a;
    let foot_v = a * (1.0 - d.dot(&a)) + e * d.dot(&e);
    let foot = HPoint::normalize(foot_v).unwrap_or(line.anchor);
    (foot, hyp_distance(p, &foot))
}

/// A circle lying in a plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HCircle {
    pub center: HPoint,
    pub radius: f64,
    pub plane: HPlane,
}

impl HCircle {
    pub fn new(center: HPoint, radius: f64, plane: HPlane) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::NegativeRadius(radius));
        }
        if !plane.contains(&center, tolerance::CIRCLE_ON_PLANE) {
            return Err(Error::DegenerateFace);
        }
        Ok(HCircle { center, radius, plane })
    }

    /// Distance from `p` to the nearest point of the circle. The nearest
    /// point lies on the ray from the center through the foot of `p`, and
    /// the foot makes a right angle, so the distance is a hypotenuse.
    pub fn distance(&self, p: &HPoint) -> f64 {
        let (foot, h) = project_to_plane(p, &self.plane);
        let offset = (hyp_distance(&self.center, &foot) - self.radius).abs();
        pythagoras(h, offset)
    }
}

/// Circumscribed circle of a triangle.
pub fn tri_circumcircle(q: &HPoint, r: &HPoint, s: &HPoint) -> Result<HCircle> {
    let plane = HPlane::through(q, r, s)?;
    let dr = *r.vec() - *q.vec();
    let ds = *s.vec() - *q.vec();
    let c = lorentz_cross(&dr, &ds, plane.normal());
    let center = HPoint::normalize(c).ok_or(Error::NoCircumsphere)?;
    let radius = (hyp_distance(&center, q) + hyp_distance(&center, r) + hyp_distance(&center, s)) / 3.0;
    Ok(HCircle { center, radius, plane })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64, z: f64) -> HPoint {
        HPoint::from_spatial(x, y, z)
    }

    #[test]
    fn plane_projection_fixed_point_and_axis() {
        let plane = HPlane::from_normal(Vec4::new(0.0, 1.0, 0.0, 0.0)).unwrap();
        let p = pt(0.0, 0.3, -0.2);
        let (foot, d) = project_to_plane(&p, &plane);
        assert!(d < 1e-15);
        assert!(hyp_distance(&foot, &p) < 1e-15);
        let t: f64 = 0.7;
        let q = HPoint::new([t.cosh(), t.sinh(), 0.0, 0.0]).unwrap();
        let (_, d) = project_to_plane(&q, &plane);
        assert!((d - t).abs() < 1e-14);
    }

    #[test]
    fn collinear_face_rejected() {
        let line = HLine::new(pt(0.0, 0.0, 0.0), pt(0.3, 0.1, 0.0)).unwrap();
        let (a, b, c) = (line.point_at(0.0), line.point_at(0.2), line.point_at(0.5));
        assert_eq!(tri_circumcircle(&a, &b, &c).unwrap_err(), Error::DegenerateFace);
    }

    #[test]
    fn line_rejects_coincident_anchors() {
        let p = pt(0.1, 0.2, 0.3);
        assert!(matches!(HLine::new(p, p), Err(Error::DegenerateLine(_))));
    }

    #[test]
    fn bad_normal_rejected() {
        assert_eq!(HPlane::from_normal(Vec4::new(1.0, 0.0, 0.0, 0.0)).unwrap_err(), Error::BadNormal);
        assert_eq!(HPlane::from_normal(Vec4::new(0.0, 2.0, 0.0, 0.0)).unwrap_err(), Error::BadNormal);
    }

    #[test]
    fn circle_center_must_lie_on_plane() {
        let plane = HPlane::from_normal(Vec4::new(0.0, 0.0, 0.0, 1.0)).unwrap();
        assert!(HCircle::new(pt(0.0, 0.0, 0.1), 0.2, plane).is_err());
        assert!(HCircle::new(pt(0.1, 0.0, 0.0), 0.2, plane).is_ok());
        assert!(HCircle::new(pt(0.1, 0.0, 0.0), -0.2, plane).is_err());
    }
}
