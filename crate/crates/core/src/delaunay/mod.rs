//! Maximal `eps`-separated samples and their geodesic Delaunay meshes.
//!
//! Hyperbolic spheres are Euclidean spheres in the Poincaré ball, so the
//! hyperbolic Delaunay complex is the Euclidean one of the ball images,
//! restricted to cells whose circumsphere stays inside the ball.

mod brute;
mod complex;
pub(crate) mod grid;
mod io;
mod mesh;
mod sample;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{hyp_distance, HPoint};

pub use brute::brute_force_delaunay;
pub use io::{read_mesh, read_points, write_mesh, write_points};
pub use mesh::{build_delaunay, interior_tets, update_vertex, DelaunayMesh};
pub use sample::sample_maximal;

/// A closed hyperbolic ball.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleDomain {
    pub center: HPoint,
    pub radius: f64,
}

impl SampleDomain {
    pub fn new(center: HPoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::BadParams(format!("domain radius must be positive, got {radius}")));
        }
        Ok(SampleDomain { center, radius })
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        hyp_distance(&self.center, p) <= self.radius
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "io::PointSetFile", into = "io::PointSetFile")]
pub struct PointSet {
    pub points: Vec<HPoint>,
    /// Separation the set was sampled with.
    pub eps: f64,
    pub seed: u64,
    /// The domain the set was sampled in, when known.
    pub domain: Option<SampleDomain>,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest pairwise distance, by brute force.
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                best = best.min(hyp_distance(p, q));
            }
        }
        best
    }
}
