//! One pass of vertex perturbation that clears every nearby sliver region.
//!
//! Vertices are visited once, in ascending id order. Each is kept where it
//! is if that position lies outside the sliver region of every candidate
//! triangle, and otherwise moved to the first clear uniform draw from its
//! `delta`-ball.

use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::delaunay::grid::BallGrid;
use crate::delaunay::DelaunayMesh;
use crate::error::{Error, Result};
use crate::hyperbolic::{hyp_distance, sample_uniform_ball, HPoint};
use crate::quality::{SliverRegionSpec, ThickParams};
use crate::tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Moved,
    Kept,
    Failed,
}

/// What happened to one vertex during a pass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbRecord {
    pub vid: usize,
    pub old: HPoint,
    pub new: HPoint,
    /// Random draws tested; 0 when the vertex was kept.
    pub attempts: u32,
    /// Number of candidate triangles.
    pub candidates: usize,
    pub outcome: Outcome,
}

/// Every triple of other vertices lying within `b + delta` of the current
/// position of `vid`. This covers the opposite face of any tet with edges
/// at most `b` that `vid` can belong to after moving up to `delta`.
pub fn candidate_triangles(mesh: &DelaunayMesh, vid: usize, params: &ThickParams) -> Vec<[usize; 3]> {
    let pts = mesh.points();
    let reach = params.candidate_radius();
    let near: Vec<usize> = (0..pts.len()).filter(|&u| u != vid && hyp_distance(&pts[u], &pts[vid]) <= reach).collect();
    triples(&near)
}

fn triples(near: &[usize]) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for (i, &q) in near.iter().enumerate() {
        for (j, &r) in near.iter().enumerate().skip(i + 1) {
            for &s in &near[j + 1..] {
                out.push([q, r, s]);
            }
        }
    }
    out
}

/// A point uniform by hyperbolic volume in `B(center, delta)`.
pub fn sample_delta_ball<R: rand::Rng + ?Sized>(center: &HPoint, delta: f64, rng: &mut R) -> HPoint {
    sample_uniform_ball(center, delta, rng)
}

/// Sliver regions of the candidate triangles that are non-empty; triangles
/// outside the size window contribute none.
pub fn region_specs(mesh: &DelaunayMesh, triangles: &[[usize; 3]], params: &ThickParams) -> Vec<SliverRegionSpec> {
    let pts = mesh.points();
    triangles
        .iter()
        .filter_map(|t| SliverRegionSpec::new(t.map(|v| pts[v]), *params).ok())
        .collect()
}

fn is_clear(p: &HPoint, specs: &[SliverRegionSpec]) -> bool {
    !specs.iter().any(|s| s.contains(p))
}

/// A position for `vid` within `delta` of its current one and outside every
/// region in `specs`, with the number of random draws it took. The current
/// position is tested first and kept when clear.
pub fn perturb_vertex<R: rand::Rng + ?Sized>(
    mesh: &DelaunayMesh,
    vid: usize,
    specs: &[SliverRegionSpec],
    params: &ThickParams,
    rng: &mut R,
) -> Result<(HPoint, u32)> {
    let here = mesh.points()[vid];
    if is_clear(&here, specs) {
        return Ok((here, 0));
    }
    for attempt in 1..=tolerance::MAX_ATTEMPTS {
        let p = sample_delta_ball(&here, params.delta, rng);
        if is_clear(&p, specs) {
            return Ok((p, attempt as u32));
        }
    }
    Err(Error::ExhaustedAttempts { vid, attempts: tolerance::MAX_ATTEMPTS })
}

/// The random stream used for vertex `vid`.
fn vertex_rng(seed: u64, vid: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(vid as u64);
    rng
}

/// Perturbs every vertex once, in ascending id order, and keeps the mesh
/// Delaunay after each move.
pub fn desliver_pass(mesh: &DelaunayMesh, params: &ThickParams, seed: u64) -> Result<(DelaunayMesh, Vec<PerturbRecord>)> {
    let mut mesh = mesh.clone();
    let reach = params.candidate_radius();
    // Indexed at the starting positions; nothing moves more than delta.
    let grid = BallGrid::with_points(mesh.points(), reach + 2.0 * params.delta);
    let mut log = Vec::with_capacity(mesh.points().len());
    for vid in 0..mesh.points().len() {
        let here = mesh.points()[vid];
        let mut near: Vec<usize> = grid
            .around(&here)
            .map(|u| u as usize)
            .filter(|&u| u != vid && hyp_distance(&mesh.points()[u], &here) <= reach)
            .collect();
        near.sort_unstable();
        let triangles = triples(&near);
        let specs = region_specs(&mesh, &triangles, params);
        let mut rng = vertex_rng(seed, vid);
        let (new, attempts) = perturb_vertex(&mesh, vid, &specs, params, &mut rng)?;
        if attempts > 0 {
            mesh.move_vertex(vid, new, params.delta)?;
        }
        log.push(PerturbRecord {
            vid,
            old: here,
            new,
            attempts,
            candidates: triangles.len(),
            outcome: if attempts > 0 { Outcome::Moved } else { Outcome::Kept },
        });
    }
    Ok((mesh, log))
}

/// Result of [`desliver`].
#[derive(Clone, Debug)]
pub struct Deslivered {
    pub mesh: DelaunayMesh,
    pub log: Vec<PerturbRecord>,
    /// Flatness threshold of the successful pass.
    pub sigma: f64,
    pub halvings: u32,
}

/// Runs [`desliver_pass`], halving `sigma` and restarting from the input
/// mesh whenever a vertex exhausts its attempts.
pub fn desliver(mesh: &DelaunayMesh, params: &ThickParams, seed: u64) -> Result<Deslivered> {
    let mut p = *params;
    let mut halvings = 0;
    loop {
        match desliver_pass(mesh, &p, seed) {
            Ok((mesh, log)) => return Ok(Deslivered { mesh, log, sigma: p.sigma, halvings }),
            Err(Error::ExhaustedAttempts { .. }) if halvings < tolerance::SIGMA_HALVINGS => {
                halvings += 1;
                p = p.with_sigma(p.sigma / 2.0);
            }
            Err(e) => return Err(e),
        }
    }
}

/// Writes one JSON object per line.
pub fn write_log(path: impl AsRef<Path>, log: &[PerturbRecord]) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    for r in log {
        serde_json::to_writer(&mut f, r)?;
        f.write_all(b"\n")?;
    }
    f.flush()?;
    Ok(())
}

pub fn read_log(path: impl AsRef<Path>) -> Result<Vec<PerturbRecord>> {
    std::fs::read_to_string(path)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}
