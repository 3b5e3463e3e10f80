use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{build_delaunay, DelaunayMesh, PointSet, SampleDomain};
use crate::error::{Error, Result};
use crate::hyperbolic::HPoint;

const MODEL: &str = "hyperboloid";

#[derive(Serialize, Deserialize)]
pub(super) struct PointSetFile {
    model: String,
    eps: f64,
    seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<SampleDomain>,
    points: Vec<HPoint>,
}

impl From<PointSet> for PointSetFile {
    fn from(p: PointSet) -> Self {
        PointSetFile { model: MODEL.into(), eps: p.eps, seed: p.seed, domain: p.domain, points: p.points }
    }
}

impl TryFrom<PointSetFile> for PointSet {
    type Error = Error;

    fn try_from(f: PointSetFile) -> Result<Self> {
        if f.model != MODEL {
            return Err(Error::Format(format!("unsupported model {:?}", f.model)));
        }
        Ok(PointSet { points: f.points, eps: f.eps, seed: f.seed, domain: f.domain })
    }
}

#[derive(Serialize, Deserialize)]
struct MeshFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points_ref: Option<String>,
    #[serde(flatten, default, skip_serializing_if = "Option::is_none")]
    inline: Option<PointSet>,
    tets: Vec<[usize; 4]>,
    interior: Vec<bool>,
}

pub fn write_points(path: impl AsRef<Path>, points: &PointSet) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(points)?)?;
    Ok(())
}

pub fn read_points(path: impl AsRef<Path>) -> Result<PointSet> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Writes the mesh with its points inline.
pub fn write_mesh(path: impl AsRef<Path>, mesh: &DelaunayMesh) -> Result<()> {
    let f = MeshFile {
        points_ref: None,
        inline: Some(mesh.vertices().clone()),
        tets: mesh.tets().to_vec(),
        interior: mesh.interior().to_vec(),
    };
    fs::write(path, serde_json::to_string(&f)?)?;
    Ok(())
}

/// Reads a mesh file, rebuilding the triangulation from its points and
/// checking it against the stored tets. A `points_ref` is resolved relative
/// to the mesh file.
pub fn read_mesh(path: impl AsRef<Path>) -> Result<DelaunayMesh> {
    let path = path.as_ref();
    let f: MeshFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    let points = match (f.inline, f.points_ref) {
        (Some(p), _) => p,
        (None, Some(r)) => read_points(path.parent().unwrap_or(Path::new(".")).join(r))?,
        (None, None) => return Err(Error::Format("mesh file has neither points nor points_ref".into())),
    };
    let mesh = build_delaunay(&points)?;
    if mesh.tets() != f.tets.as_slice() {
        return Err(Error::MeshMismatch);
    }
    mesh.with_interior(f.interior)
}
