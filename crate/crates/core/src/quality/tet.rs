//! Per-tetrahedron quality measures and the sliver predicates.

use serde::Serialize;

use super::ThickParams;
use crate::error::{Error, Result};
use crate::hyperbolic::{
    dihedral_angle, hyp_distance, tet_circumsphere, tri_circumcircle, HCircle, HPoint, EDGES,
};
use crate::hyperbolic::measure_internal::circumsphere_unchecked;
use crate::tolerance;

/// Vertex indices of the face opposite each vertex.
const OPPOSITE: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TetQuality {
    /// `R_t`.
    pub circumradius: f64,
    /// `l_t`.
    pub shortest_edge: f64,
    /// Lengths in [`EDGES`] order.
    pub edge_lengths: [f64; 6],
    /// `d_v`: distance from vertex `v` to the plane of the opposite face.
    pub apex_distance: [f64; 4],
    /// `c_v`: circumradius of the face opposite vertex `v`.
    pub face_circumradius: [f64; 4],
    /// Dihedral angles along the edges in [`EDGES`] order.
    pub dihedral: [f64; 6],
    pub min_dihedral: f64,
}

impl TetQuality {
    pub fn measure(t: &[HPoint; 4]) -> Result<Self> {
        let sphere = tet_circumsphere(&t[0], &t[1], &t[2], &t[3])?;
        let edge_lengths = EDGES.map(|(i, j)| hyp_distance(&t[i], &t[j]));
        let mut apex_distance = [0.0; 4];
        let mut face_circumradius = [0.0; 4];
        for (v, face) in OPPOSITE.iter().enumerate() {
            let c = tri_circumcircle(&t[face[0]], &t[face[1]], &t[face[2]]).map_err(|_| Error::DegenerateTet)?;
            apex_distance[v] = c.plane.distance(&t[v]);
            face_circumradius[v] = c.radius;
        }
        let mut dihedral = [0.0; 6];
        for (k, &e) in EDGES.iter().enumerate() {
            dihedral[k] = dihedral_angle(t, e)?;
        }
        Ok(TetQuality {
            circumradius: sphere.radius,
            shortest_edge: edge_lengths.iter().copied().fold(f64::INFINITY, f64::min),
            edge_lengths,
            apex_distance,
            face_circumradius,
            min_dihedral: dihedral.iter().copied().fold(f64::INFINITY, f64::min),
            dihedral,
        })
    }

    /// `R_t / l_t`.
    pub fn radius_edge(&self) -> f64 {
        self.circumradius / self.shortest_edge
    }

    /// `d_v / c_v` per vertex.
    pub fn flatness(&self) -> [f64; 4] {
        std::array::from_fn(|v| self.apex_distance[v] / self.face_circumradius[v])
    }

    pub fn min_flatness(&self) -> f64 {
        self.flatness().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn max_flatness(&self) -> f64 {
        self.flatness().into_iter().fold(0.0, f64::max)
    }

    /// `(sigma, rho)`-sliver: `R_t / l_t <= rho` and `d_v / c_v <= sigma` at some vertex.
    pub fn is_sliver(&self, sigma: f64, rho: f64) -> bool {
        self.radius_edge() <= rho && self.min_flatness() <= sigma
    }

    /// Edges in `[a, b]` and circumradius at most `R`, with [`tolerance::WINDOW`] slack.
    pub fn in_window(&self, p: &ThickParams) -> bool {
        let w = tolerance::WINDOW;
        self.circumradius <= p.r + w && self.edge_lengths.iter().all(|&e| e >= p.a - w && e <= p.b + w)
    }
}

/// Sliver test with `rho = params.rho`, returning the measurements too.
pub fn is_sliver(t: &[HPoint; 4], params: &ThickParams) -> Result<(bool, TetQuality)> {
    let q = TetQuality::measure(t)?;
    Ok((q.is_sliver(params.sigma, params.rho), q))
}

/// The set of apex positions `p` for which `[p, q, r, s]` is a
/// `(sigma, R/a)`-sliver with edges in `[a, b]` and circumradius at most `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliverRegionSpec {
    pub triangle: [HPoint; 3],
    pub params: ThickParams,
    circle: HCircle,
}

impl SliverRegionSpec {
    /// Fails when the triangle itself is outside the size window, in which
    /// case its sliver region is empty.
    pub fn new(triangle: [HPoint; 3], params: ThickParams) -> Result<Self> {
        let w = tolerance::WINDOW;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let e = hyp_distance(&triangle[i], &triangle[j]);
            if e < params.a - w || e > params.b + w {
                return Err(Error::OutOfDomain(format!("triangle edge {e} outside [a, b]")));
            }
        }
        let circle = tri_circumcircle(&triangle[0], &triangle[1], &triangle[2])?;
        if circle.radius > params.r + w {
            return Err(Error::OutOfDomain(format!("triangle circumradius {} exceeds R", circle.radius)));
        }
        Ok(SliverRegionSpec { triangle, params, circle })
    }

    pub fn circumcircle(&self) -> &HCircle {
        &self.circle
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        let d = self.triangle.map(|v| hyp_distance(p, &v));
        self.contains_at(p, d)
    }

    /// Membership given the precomputed distances from `p` to the three
    /// triangle vertices.
    ///
    /// Configurations too flat for [`TetQuality::measure`] are decided by
    /// the same measured quantities: a flat apex near the circumcircle has
    /// a small circumsphere and `d_p / c_p` near zero, so it is inside.
    pub fn contains_at(&self, p: &HPoint, dist: [f64; 3]) -> bool {
        let pr = &self.params;
        let w = tolerance::WINDOW;
        if dist.iter().any(|&e| e < pr.a - w || e > pr.b + w) {
            return false;
        }
        let [q, r, s] = self.triangle;
        let t = [*p, q, r, s];
        let Some(sphere) = circumsphere_unchecked(&t) else {
            return false;
        };
        if !(sphere.radius <= pr.r + w) {
            return false;
        }
        let tri = [hyp_distance(&q, &r), hyp_distance(&q, &s), hyp_distance(&r, &s)];
        let shortest = dist.iter().chain(tri.iter()).copied().fold(f64::INFINITY, f64::min);
        let rho = pr.r / pr.a;
        if sphere.radius / shortest > rho * (1.0 + 1e-12) {
            return false;
        }
        let sigma = pr.sigma;
        if self.circle.plane.distance(p) <= sigma * self.circle.radius {
            return true;
        }
        for v in 1..4 {
            let f = OPPOSITE[v];
            match tri_circumcircle(&t[f[0]], &t[f[1]], &t[f[2]]) {
                Ok(c) => {
                    if c.plane.distance(&t[v]) <= sigma * c.radius {
                        return true;
                    }
                }
                Err(Error::DegenerateFace) | Err(Error::NoCircumsphere) => return true,
                Err(_) => {}
            }
        }
        false
    }
}

/// Whether `p` lies in the sliver region of `spec`'s triangle.
pub fn in_sliver_region(p: &HPoint, spec: &SliverRegionSpec) -> bool {
    spec.contains(p)
}
