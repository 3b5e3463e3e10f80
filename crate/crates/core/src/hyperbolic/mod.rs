//! Hyperbolic 3-space in the hyperboloid model.
//!
//! Points live on the upper sheet of `-x0^2 + x1^2 + x2^2 + x3^2 = -1` in
//! Minkowski space with signature `(-, +, +, +)`. Every construction
//! renormalizes its output back onto the sheet.

mod ball;
mod flat;
mod isometry;
mod measure;

/// Unchecked constructions shared with the mesh code.
pub(crate) mod measure_internal {
    pub(crate) use super::measure::circumsphere_unchecked;
}

pub use ball::{ball_distance, from_ball, to_ball};
pub use flat::{project_to_line, project_to_plane, tri_circumcircle, HCircle, HLine, HPlane};
pub use isometry::HIsometry;
pub use measure::{
    ball_volume, circumcenter_direction, dihedral_angle, regular_tetrahedron, sample_uniform_ball,
    tet_circumsphere, tet_sine, Circumsphere, EDGES,
};

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::tolerance;

/// A vector of Minkowski space `R^{1,3}`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec4(pub [f64; 4]);

impl Vec4 {
    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Vec4([x0, x1, x2, x3])
    }

    /// Minkowski inner product `-a0 b0 + a1 b1 + a2 b2 + a3 b3`.
    #[inline]
    pub fn dot(&self, o: &Vec4) -> f64 {
        let (a, b) = (&self.0, &o.0);
        -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    /// Length of a spacelike vector; zero for timelike or null input.
    #[inline]
    pub fn space_norm(&self) -> f64 {
        self.norm_sq().max(0.0).sqrt()
    }

    /// Euclidean norm of the coordinates, used only for scale estimates.
    pub fn coord_norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    #[inline]
    fn add(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    #[inline]
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul<f64> for Vec4 {
    type Output = Vec4;
    #[inline]
    fn mul(self, s: f64) -> Vec4 {
        Vec4(self.0.map(|x| x * s))
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    #[inline]
    fn neg(self) -> Vec4 {
        Vec4(self.0.map(|x| -x))
    }
}

fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// The vector Minkowski-orthogonal to `a`, `b` and `c`, with magnitude equal
/// to the 3-volume of the parallelotope they span.
pub fn lorentz_cross(a: &Vec4, b: &Vec4, c: &Vec4) -> Vec4 {
    let minor = |skip: usize| {
        let pick = |v: &Vec4| -> [f64; 3] {
            let mut out = [0.0; 3];
            let mut k = 0;
            for (i, x) in v.0.iter().enumerate() {
                if i != skip {
                    out[k] = *x;
                    k += 1;
                }
            }
            out
        };
        det3(pick(a), pick(b), pick(c))
    };
    // Euclidean cofactor vector e satisfies e . v = 0; raising the index with
    // the metric turns that into <n, v> = 0.
    let e = [minor(0), -minor(1), minor(2), -minor(3)];
    Vec4([-e[0], e[1], e[2], e[3]])
}

/// A point of H^3 in hyperboloid coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct HPoint(Vec4);

impl TryFrom<[f64; 4]> for HPoint {
    type Error = Error;
    fn try_from(x: [f64; 4]) -> Result<Self> {
        HPoint::new(x)
    }
}

impl From<HPoint> for [f64; 4] {
    fn from(p: HPoint) -> Self {
        p.0 .0
    }
}

impl HPoint {
    pub const ORIGIN: HPoint = HPoint(Vec4::new(1.0, 0.0, 0.0, 0.0));

    /// Validates coordinates against the hyperboloid invariants.
    pub fn new(x: [f64; 4]) -> Result<Self> {
        let v = Vec4(x);
        let scale = x[0].abs().max(1.0);
        if !v.is_finite() || x[0] < 1.0 || (v.norm_sq() + 1.0).abs() > tolerance::HYPERBOLOID * scale * scale {
            return Err(Error::NotOnHyperboloid(format!("{x:?}")));
        }
        Ok(HPoint(v))
    }

    /// Lifts spatial coordinates onto the sheet; always valid.
    pub fn from_spatial(x1: f64, x2: f64, x3: f64) -> Self {
        let x0 = (1.0 + x1 * x1 + x2 * x2 + x3 * x3).sqrt();
        HPoint(Vec4::new(x0, x1, x2, x3))
    }

    /// Rescales a future timelike vector onto the hyperboloid.
    pub fn normalize(v: Vec4) -> Option<Self> {
        let n = v.norm_sq();
        if !(n < 0.0) || !v.is_finite() {
            return None;
        }
        let mut w = v * (1.0 / (-n).sqrt());
        if w.0[0] < 0.0 {
            w = -w;
        }
        // Re-derive x0 from the spatial part so the sheet equation holds to
        // rounding, then guard the x0 >= 1 invariant.
        let p = HPoint::from_spatial(w.0[1], w.0[2], w.0[3]);
        Some(p)
    }

    /// The point reached from `self` along the unit tangent `dir` after
    /// distance `t`. `dir` must be Minkowski-orthogonal to `self`.
    pub fn along(&self, dir: &Vec4, t: f64) -> HPoint {
        HPoint::normalize(self.0 * t.cosh() + *dir * t.sinh()).unwrap_or(*self)
    }

    #[inline]
    pub fn vec(&self) -> &Vec4 {
        &self.0
    }

    #[inline]
    pub fn coords(&self) -> [f64; 4] {
        self.0 .0
    }

    /// Unit tangent at `self` pointing toward `q`, or `None` when they coincide.
    pub fn direction_to(&self, q: &HPoint) -> Option<Vec4> {
        let d = q.0 - self.0;
        let t = d + self.0 * self.0.dot(&d);
        let n = t.space_norm();
        (n > 0.0).then(|| t * (1.0 / n))
    }

    /// An orthonormal basis of the tangent space at `self`.
    pub fn tangent_frame(&self) -> [Vec4; 3] {
        let p = self.0;
        let mut basis: Vec<Vec4> = Vec::with_capacity(3);
        // Spatial axes projected onto p^perp; the axis most aligned with the
        // spatial part of p is the one least suited and is tried last.
        let mut axes = [1usize, 2, 3];
        axes.sort_by(|&i, &j| p.0[i].abs().total_cmp(&p.0[j].abs()));
        for &i in &axes {
            let mut e = Vec4::default();
            e.0[i] = 1.0;
            let mut v = e + p * p.dot(&e);
            for b in &basis {
                v = v - *b * v.dot(b);
            }
            let n = v.space_norm();
            if n > 1e-8 {
                basis.push(v * (1.0 / n));
            }
            if basis.len() == 3 {
                break;
            }
        }
        [basis[0], basis[1], basis[2]]
    }
}

/// Hyperbolic distance, evaluated as `2 asinh(|p - q| / 2)` to keep full
/// relative precision at small separations.
#[inline]
pub fn hyp_distance(p: &HPoint, q: &HPoint) -> f64 {
    let d = p.0 - q.0;
    2.0 * (d.space_norm() / 2.0).asinh()
}

/// `cosh d(p, q) = -<p, q>`.
#[inline]
pub fn cosh_distance(p: &HPoint, q: &HPoint) -> f64 {
    -p.0.dot(&q.0)
}

/// Builds `arccosh(cosh x * cosh y)` without cancellation near zero, i.e. the
/// hypotenuse of a right triangle with legs `x` and `y`.
pub fn pythagoras(x: f64, y: f64) -> f64 {
    let hx = 2.0 * (x / 2.0).sinh().powi(2); // cosh x - 1
    let hy = 2.0 * (y / 2.0).sinh().powi(2);
    let h = hx * hy + hx + hy; // cosh d - 1
    2.0 * (h / 2.0).sqrt().asinh()
}
