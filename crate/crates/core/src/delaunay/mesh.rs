use super::complex::{Complex, Moved};
use super::{PointSet, SampleDomain};
use crate::error::{Error, Result};
use crate::hyperbolic::measure_internal::circumsphere_unchecked;
use crate::hyperbolic::{hyp_distance, to_ball, Circumsphere, HPoint};
use crate::quality::ThickParams;
use crate::tolerance;

/// A geodesic Delaunay tetrahedralization.
///
/// Tets are stored with ascending vertex ids, sorted lexicographically.
/// `adjacency[t][k]` is the tet across the face opposite `tets[t][k]`.
#[derive(Clone, Debug)]
pub struct DelaunayMesh {
    vertices: PointSet,
    tets: Vec<[usize; 4]>,
    positive: Vec<bool>,
    adjacency: Vec<[Option<usize>; 4]>,
    interior: Vec<bool>,
    spheres: Vec<Circumsphere>,
    /// The Euclidean complex of the ball images, hull cells included.
    complex: Complex,
    /// Per complex cell: sorted ids, parity and hyperbolic circumsphere.
    cache: Vec<Option<CellRec>>,
    /// `(tets[i], complex cell)` in tet order.
    order: Vec<([usize; 4], u32)>,
}

#[derive(Clone, Copy, Debug)]
struct CellRec {
    tet: [usize; 4],
    positive: bool,
    sphere: Option<Circumsphere>,
    interior: bool,
}

impl PartialEq for DelaunayMesh {
    fn eq(&self, o: &Self) -> bool {
        self.vertices == o.vertices
            && self.tets == o.tets
            && self.positive == o.positive
            && self.adjacency == o.adjacency
            && self.interior == o.interior
            && self.spheres == o.spheres
    }
}

/// Permutation parity of sorting `v` ascending.
fn sort_with_parity(mut v: [u32; 4]) -> ([u32; 4], bool) {
    let mut even = true;
    for i in 0..4 {
        for j in 0..3 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                even = !even;
            }
        }
    }
    (v, even)
}

impl DelaunayMesh {
    fn from_complex(vertices: PointSet, complex: Complex) -> Self {
        let mut mesh = DelaunayMesh {
            vertices,
            tets: Vec::new(),
            positive: Vec::new(),
            adjacency: Vec::new(),
            interior: Vec::new(),
            spheres: Vec::new(),
            complex,
            cache: Vec::new(),
            order: Vec::new(),
        };
        mesh.derive(None);
        mesh
    }

    fn record(&mut self, id: u32) -> &CellRec {
        let slot = id as usize;
        if slot >= self.cache.len() {
            self.cache.resize(slot + 1, None);
        }
        let (points, domain, eps) = (&self.vertices.points, &self.vertices.domain, self.vertices.eps);
        let v = self.complex.cell(id).v;
        self.cache[slot].get_or_insert_with(|| {
            let (s, positive) = sort_with_parity(v);
            let tet = s.map(|v| v as usize);
            let sphere = circumsphere_unchecked(&tet.map(|v| points[v]));
            let interior = match (&sphere, domain) {
                (Some(s), Some(d)) => inside_shrunk(s, d, eps),
                _ => false,
            };
            CellRec { tet, positive, sphere, interior }
        })
    }

    /// Recomputes the public tet data from the complex. With `created`, only
    /// those cells are new and the previous order is merged with them.
    fn derive(&mut self, created: Option<&[u32]>) {
        let finite = |cx: &Complex, id: u32| !cx.cell(id).v.contains(&super::complex::INF);
        let order = match created {
            None => {
                self.cache.clear();
                let ids: Vec<u32> = self.complex.finite_cells().map(|(id, _)| id).collect();
                let mut order = Vec::with_capacity(ids.len());
                for id in ids {
                    let r = self.record(id);
                    if r.sphere.is_some() {
                        order.push((r.tet, id));
                    }
                }
                order.sort_unstable();
                order
            }
            Some(created) => {
                for &id in created {
                    if let Some(slot) = self.cache.get_mut(id as usize) {
                        *slot = None;
                    }
                }
                let mut fresh = Vec::new();
                for &id in created {
                    if finite(&self.complex, id) {
                        let r = self.record(id);
                        if r.sphere.is_some() {
                            fresh.push((r.tet, id));
                        }
                    }
                }
                fresh.sort_unstable();
                let stale = |&(tet, id): &([usize; 4], u32)| {
                    !self.complex.is_alive(id)
                        || created.binary_search(&id).is_ok()
                        || self.cache[id as usize].is_none_or(|r| r.tet != tet)
                };
                let old: Vec<_> = self.order.iter().copied().filter(|e| !stale(e)).collect();
                let mut merged = Vec::with_capacity(old.len() + fresh.len());
                let (mut i, mut j) = (0, 0);
                while i < old.len() || j < fresh.len() {
                    if j == fresh.len() || (i < old.len() && old[i] < fresh[j]) {
                        merged.push(old[i]);
                        i += 1;
                    } else {
                        merged.push(fresh[j]);
                        j += 1;
                    }
                }
                merged
            }
        };
        let mut index = vec![u32::MAX; self.cache.len()];
        for (i, &(_, id)) in order.iter().enumerate() {
            index[id as usize] = i as u32;
        }
        let n = order.len();
        self.tets.clear();
        self.positive.clear();
        self.spheres.clear();
        self.interior.clear();
        self.adjacency.clear();
        self.tets.reserve(n);
        self.adjacency.reserve(n);
        for &(tet, id) in &order {
            let rec = self.cache[id as usize].as_ref().unwrap();
            let c = self.complex.cell(id);
            let mut adj = [None; 4];
            for j in 0..4 {
                let k = tet.iter().position(|&v| v == c.v[j] as usize).unwrap();
                adj[k] = index.get(c.n[j] as usize).filter(|&&i| i != u32::MAX).map(|&i| i as usize);
            }
            self.tets.push(tet);
            self.positive.push(rec.positive);
            self.spheres.push(rec.sphere.unwrap());
            self.interior.push(rec.interior);
            self.adjacency.push(adj);
        }
        self.order = order;
    }

    /// In-place form of [`update_vertex`].
    pub fn move_vertex(&mut self, vid: usize, newpos: HPoint, delta: f64) -> Result<()> {
        let old = *self
            .points()
            .get(vid)
            .ok_or_else(|| Error::BadParams(format!("vertex {vid} out of range")))?;
        let distance = hyp_distance(&old, &newpos);
        if distance > delta + tolerance::MOVE {
            return Err(Error::MoveTooFar { vid, distance, limit: delta });
        }
        if newpos == old {
            return Ok(());
        }
        let moved = self.complex.move_vertex(vid as u32, to_ball(&newpos))?;
        self.vertices.points[vid] = newpos;
        match moved {
            Moved::Local(ids) => self.derive(Some(&ids)),
            Moved::Rebuilt => self.derive(None),
        }
        Ok(())
    }

    pub fn vertices(&self) -> &PointSet {
        &self.vertices
    }

    pub fn points(&self) -> &[HPoint] {
        &self.vertices.points
    }

    pub fn tets(&self) -> &[[usize; 4]] {
        &self.tets
    }

    pub fn len(&self) -> usize {
        self.tets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tets.is_empty()
    }

    /// Whether the ascending vertex order of tet `t` is positively oriented.
    pub fn positive(&self, t: usize) -> bool {
        self.positive[t]
    }

    pub fn adjacency(&self) -> &[[Option<usize>; 4]] {
        &self.adjacency
    }

    pub fn interior(&self) -> &[bool] {
        &self.interior
    }

    pub fn circumsphere(&self, t: usize) -> &Circumsphere {
        &self.spheres[t]
    }

    pub fn tet_points(&self, t: usize) -> [HPoint; 4] {
        self.tets[t].map(|v| self.vertices.points[v])
    }

    /// Replaces the interior flags, which must have one entry per tet.
    pub fn with_interior(mut self, flags: Vec<bool>) -> Result<Self> {
        if flags.len() != self.tets.len() {
            return Err(Error::MeshMismatch);
        }
        self.interior = flags;
        Ok(self)
    }
}

pub fn build_delaunay(points: &PointSet) -> Result<DelaunayMesh> {
    let ball = points.points.iter().map(to_ball).collect();
    let cx = Complex::build(ball)?;
    Ok(DelaunayMesh::from_complex(points.clone(), cx))
}

fn inside_shrunk(s: &Circumsphere, domain: &SampleDomain, eps: f64) -> bool {
    hyp_distance(&domain.center, &s.center) + s.radius <= domain.radius - eps
}

/// Flags the tets whose circumball lies in `domain` shrunk by `eps`.
pub fn interior_tets(mesh: &DelaunayMesh, domain: &SampleDomain, params: &ThickParams) -> Vec<bool> {
    mesh.spheres.iter().map(|s| inside_shrunk(s, domain, params.eps)).collect()
}

/// The mesh of the point set with vertex `vid` moved to `newpos`.
///
/// Only the cells around the vertex are retriangulated: its star is
/// refilled from the Delaunay complex of its link and the new position is
/// inserted into its conflict region. Moves of hull vertices rebuild.
pub fn update_vertex(mesh: &DelaunayMesh, vid: usize, newpos: HPoint, delta: f64) -> Result<DelaunayMesh> {
    let mut next = mesh.clone();
    next.move_vertex(vid, newpos, delta)?;
    Ok(next)
}
