//! Orientation-preserving isometries as Lorentz matrices.

use rand::Rng;
use rand_distr::{Distribution, UnitSphere};

use super::{HPoint, Vec4};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HIsometry {
    m: [[f64; 4]; 4],
}

impl HIsometry {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        HIsometry { m }
    }

    /// The pure boost carrying the origin to `c`.
    pub fn translation(c: &HPoint) -> Self {
        let x = c.coords();
        let s = [x[1], x[2], x[3]];
        let mut m = [[0.0; 4]; 4];
        m[0][0] = x[0];
        for i in 0..3 {
            m[0][i + 1] = s[i];
            m[i + 1][0] = s[i];
            for j in 0..3 {
                m[i + 1][j + 1] = if i == j { 1.0 } else { 0.0 } + s[i] * s[j] / (1.0 + x[0]);
            }
        }
        HIsometry { m }
    }

    /// Rotation about the origin by a proper orthogonal 3x3 matrix.
    pub fn rotation(r: [[f64; 3]; 3]) -> Self {
        let mut m = [[0.0; 4]; 4];
        m[0][0] = 1.0;
        for i in 0..3 {
            for j in 0..3 {
                m[i + 1][j + 1] = r[i][j];
            }
        }
        HIsometry { m }
    }

    /// A rotation (uniform over SO(3)) followed by a translation of the
    /// origin to a uniformly random direction at distance up to `reach`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, reach: f64) -> Self {
        let q: [f64; 4] = {
            // Uniform unit quaternion via two uniform points on circles.
            let (u1, u2, u3): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
            let tau = std::f64::consts::TAU;
            [
                (1.0 - u1).sqrt() * (tau * u2).sin(),
                (1.0 - u1).sqrt() * (tau * u2).cos(),
                u1.sqrt() * (tau * u3).sin(),
                u1.sqrt() * (tau * u3).cos(),
            ]
        };
        let [w, x, y, z] = q;
        let r = [
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)],
            [2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)],
            [2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)],
        ];
        let dir: [f64; 3] = UnitSphere.sample(rng);
        let t = reach * rng.random::<f64>();
        let c = HPoint::ORIGIN.along(&Vec4::new(0.0, dir[0], dir[1], dir[2]), t);
        HIsometry::translation(&c).compose(&HIsometry::rotation(r))
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &HIsometry) -> HIsometry {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..4).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        HIsometry { m }
    }

    /// Lorentz inverse `eta M^T eta`.
    pub fn inverse(&self) -> HIsometry {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let sign = if (i == 0) != (j == 0) { -1.0 } else { 1.0 };
                *v = sign * self.m[j][i];
            }
        }
        HIsometry { m }
    }

    pub fn apply_vec(&self, v: &Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| (0..4).map(|k| self.m[i][k] * v.0[k]).sum()))
    }

    pub fn apply(&self, p: &HPoint) -> HPoint {
        HPoint::normalize(self.apply_vec(p.vec())).expect("Lorentz map keeps points timelike")
    }
}
