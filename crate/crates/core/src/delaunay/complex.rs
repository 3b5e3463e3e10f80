//! Incremental Delaunay tetrahedralization of points in Euclidean 3-space,
//! closed off by a vertex at infinity.
//!
//! Finite cells are positively oriented for `robust::orient3d`. An infinite
//! cell stores [`INF`] in one slot and is oriented so that substituting a
//! query point for the infinite vertex gives a positive orientation exactly
//! when the point lies beyond its hull face.

use std::collections::HashMap;

use robust::{insphere, orient3d, Coord3D};

use crate::error::{Error, Result};

pub(crate) const INF: u32 = u32::MAX;
const NO_CELL: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Cell {
    pub v: [u32; 4],
    pub n: [u32; 4],
}

impl Cell {
    fn is_infinite(&self) -> bool {
        self.v.contains(&INF)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Seen {
    Conflict,
    Clear,
}

#[derive(Clone, Debug)]
pub(crate) struct Complex {
    pts: Vec<[f64; 3]>,
    cells: Vec<Cell>,
    alive: Vec<bool>,
    free: Vec<u32>,
    hint: u32,
    seen: Vec<(u32, Seen)>,
    stamp: u32,
    /// Some live cell incident to each vertex, refreshed on allocation.
    vcell: Vec<u32>,
    /// Cells allocated since the last [`Complex::move_vertex`] began.
    created: Vec<u32>,
}

/// Which cells a vertex move replaced.
#[derive(Debug)]
pub(crate) enum Moved {
    /// Only these cell ids are new.
    Local(Vec<u32>),
    /// Every cell id is new.
    Rebuilt,
}

fn c3(p: [f64; 3]) -> Coord3D<f64> {
    Coord3D { x: p[0], y: p[1], z: p[2] }
}

fn orient(a: [f64; 3], b: [f64; 3], c: [f64; 3], d: [f64; 3]) -> f64 {
    orient3d(c3(a), c3(b), c3(c), c3(d))
}

/// Interleaved 21-bit coordinates.
fn morton(p: [f64; 3], lo: [f64; 3], scale: [f64; 3]) -> u64 {
    fn spread(mut x: u64) -> u64 {
        x &= 0x1f_ffff;
        x = (x | x << 32) & 0x001f_0000_0000_ffff;
        x = (x | x << 16) & 0x001f_0000_ff00_00ff;
        x = (x | x << 8) & 0x100f_00f0_0f00_f00f;
        x = (x | x << 4) & 0x10c3_0c30_c30c_30c3;
        x = (x | x << 2) & 0x1249_2492_4924_9249;
        x
    }
    let q = |k: usize| (((p[k] - lo[k]) * scale[k]) as u64).min(0x1f_ffff);
    spread(q(0)) | spread(q(1)) << 1 | spread(q(2)) << 2
}

/// Indices of `pts` in spatially coherent order.
fn insertion_order(pts: &[[f64; 3]]) -> Vec<usize> {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in pts {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let scale = std::array::from_fn(|k| {
        let w = hi[k] - lo[k];
        if w > 0.0 {
            2_097_151.0 / w
        } else {
            0.0
        }
    });
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by_key(|&i| (morton(pts[i], lo, scale), i));
    idx
}

impl Complex {
    pub fn build(pts: Vec<[f64; 3]>) -> Result<Self> {
        if pts.len() < 4 {
            return Err(Error::DegenerateInput(format!("need at least 4 points, got {}", pts.len())));
        }
        if pts.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::DegenerateInput("non-finite coordinate".into()));
        }
        let order = insertion_order(&pts);
        let first = Self::initial_simplex(&pts, &order)?;
        let mut cx = Complex {
            pts,
            cells: Vec::new(),
            alive: Vec::new(),
            free: Vec::new(),
            hint: 0,
            seen: Vec::new(),
            stamp: 0,
            vcell: Vec::new(),
            created: Vec::new(),
        };
        cx.vcell = vec![NO_CELL; cx.pts.len()];
        cx.seed_simplex(first);
        for &i in &order {
            if !first.contains(&(i as u32)) {
                cx.insert(i as u32)?;
            }
        }
        Ok(cx)
    }

    fn initial_simplex(pts: &[[f64; 3]], order: &[usize]) -> Result<[u32; 4]> {
        let a = order[0];
        let find = |pred: &dyn Fn(usize) -> bool| order.iter().copied().find(|&i| pred(i));
        let coplanar = || Error::DegenerateInput("all points coplanar".into());
        let b = find(&|i| pts[i] != pts[a]).ok_or_else(coplanar)?;
        let c = find(&|i| {
            let u = [pts[b][0] - pts[a][0], pts[b][1] - pts[a][1], pts[b][2] - pts[a][2]];
            let w = [pts[i][0] - pts[a][0], pts[i][1] - pts[a][1], pts[i][2] - pts[a][2]];
            let x = [u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]];
            x != [0.0; 3]
        })
        .ok_or_else(coplanar)?;
        let d = find(&|i| orient(pts[a], pts[b], pts[c], pts[i]) != 0.0).ok_or_else(coplanar)?;
        let s = [a, b, c, d].map(|i| i as u32);
        if orient(pts[a], pts[b], pts[c], pts[d]) > 0.0 {
            Ok(s)
        } else {
            Ok([s[1], s[0], s[2], s[3]])
        }
    }

    fn seed_simplex(&mut self, s: [u32; 4]) {
        let mut ids = vec![self.alloc(Cell { v: s, n: [NO_CELL; 4] })];
        for i in 0..4 {
            let mut v = s;
            v[i] = INF;
            // Flip so the hull face faces outward.
            let (j, k) = if i == 0 { (1, 2) } else { (0, if i == 1 { 2 } else { 1 }) };
            v.swap(j, k);
            ids.push(self.alloc(Cell { v, n: [NO_CELL; 4] }));
        }
        self.link(&ids);
        self.hint = ids[0];
    }

    fn alloc(&mut self, c: Cell) -> u32 {
        let id = if let Some(id) = self.free.pop() {
            self.cells[id as usize] = c;
            self.alive[id as usize] = true;
            id
        } else {
            self.cells.push(c);
            self.alive.push(true);
            self.seen.push((0, Seen::Clear));
            (self.cells.len() - 1) as u32
        };
        for v in c.v {
            if v != INF {
                self.vcell[v as usize] = id;
            }
        }
        id
    }

    /// Pairs up the unset neighbor slots of `ids` by shared faces.
    fn link(&mut self, ids: &[u32]) {
        let mut open: HashMap<[u32; 3], (u32, usize)> = HashMap::with_capacity(ids.len() * 2);
        for &id in ids {
            for j in 0..4 {
                if self.cells[id as usize].n[j] != NO_CELL {
                    continue;
                }
                let key = face_key(&self.cells[id as usize].v, j);
                if let Some((o, k)) = open.remove(&key) {
                    self.cells[id as usize].n[j] = o;
                    self.cells[o as usize].n[k] = id;
                } else {
                    open.insert(key, (id, j));
                }
            }
        }
        debug_assert!(open.is_empty(), "unpaired faces after retriangulation");
    }

    fn point(&self, v: u32, p: [f64; 3]) -> [f64; 3] {
        if v == INF {
            p
        } else {
            self.pts[v as usize]
        }
    }

    /// Orientation of cell `c` with vertex slot `j` replaced by `p`.
    fn orient_with(&self, c: &Cell, j: usize, p: [f64; 3]) -> f64 {
        let mut q = c.v.map(|v| self.point(v, p));
        q[j] = p;
        orient(q[0], q[1], q[2], q[3])
    }

    fn conflict(&self, id: u32, p: [f64; 3]) -> bool {
        let c = &self.cells[id as usize];
        if let Some(k) = c.v.iter().position(|&v| v == INF) {
            let o = self.orient_with(c, k, p);
            if o != 0.0 {
                return o > 0.0;
            }
            // On the hull plane: inside the face's circumcircle, which is
            // where the finite neighbor's sphere meets that plane.
            return self.conflict(c.n[k], p);
        }
        let q = c.v.map(|v| self.pts[v as usize]);
        insphere(c3(q[0]), c3(q[1]), c3(q[2]), c3(q[3]), c3(p)) > 0.0
    }

    fn locate(&self, p: [f64; 3]) -> u32 {
        let mut id = if self.alive[self.hint as usize] {
            self.hint
        } else {
            self.alive.iter().position(|&a| a).unwrap() as u32
        };
        let cap = 4 * self.cells.len() + 64;
        'walk: for step in 0..cap {
            let c = &self.cells[id as usize];
            if let Some(k) = c.v.iter().position(|&v| v == INF) {
                if self.conflict(id, p) {
                    return id;
                }
                id = c.n[k];
                continue;
            }
            for t in 0..4 {
                let j = (t + step) % 4;
                if self.orient_with(c, j, p) < 0.0 {
                    id = c.n[j];
                    continue 'walk;
                }
            }
            return id;
        }
        (0..self.cells.len() as u32)
            .find(|&i| self.alive[i as usize] && self.conflict(i, p))
            .unwrap_or(id)
    }

    /// Inserts `pts[vi]` by carving out its conflict region and starring
    /// the boundary from the new vertex.
    fn insert(&mut self, vi: u32) -> Result<()> {
        let p = self.pts[vi as usize];
        let start = self.locate(p);
        if !self.conflict(start, p) {
            return Err(Error::DegenerateInput(format!("point {vi} duplicates an existing vertex")));
        }
        self.stamp = self.stamp.wrapping_add(1);
        let stamp = self.stamp;
        self.seen[start as usize] = (stamp, Seen::Conflict);
        let mut cavity = vec![start];
        let mut boundary = Vec::new();
        let mut k = 0;
        while k < cavity.len() {
            let x = cavity[k];
            k += 1;
            for i in 0..4 {
                let nb = self.cells[x as usize].n[i];
                let state = match self.seen[nb as usize] {
                    (s, st) if s == stamp => st,
                    _ => {
                        let st = if self.conflict(nb, p) { Seen::Conflict } else { Seen::Clear };
                        self.seen[nb as usize] = (stamp, st);
                        if st == Seen::Conflict {
                            cavity.push(nb);
                        }
                        st
                    }
                };
                if state == Seen::Clear {
                    boundary.push((x, i));
                }
            }
        }

        let mut fresh = Vec::with_capacity(boundary.len());
        for &(x, i) in &boundary {
            let old = self.cells[x as usize];
            let mut v = old.v;
            v[i] = vi;
            let cell = Cell { v, n: { let mut n = [NO_CELL; 4]; n[i] = old.n[i]; n } };
            if !cell.is_infinite() {
                let q = v.map(|u| self.pts[u as usize]);
                if orient(q[0], q[1], q[2], q[3]) <= 0.0 {
                    return Err(Error::DegenerateInput(format!("point {vi} is coplanar with a cavity face")));
                }
            }
            let out = old.n[i];
            let back = self.cells[out as usize].n.iter().position(|&n| n == x).unwrap();
            fresh.push((cell, out, back));
        }
        for &x in &cavity {
            self.alive[x as usize] = false;
            self.free.push(x);
        }
        let mut ids = Vec::with_capacity(fresh.len());
        for (cell, out, back) in fresh {
            let id = self.alloc(cell);
            self.cells[out as usize].n[back] = id;
            ids.push(id);
        }
        self.link(&ids);
        self.created.extend_from_slice(&ids);
        self.hint = ids[0];
        Ok(())
    }

    /// Moves vertex `v` to `p`, retriangulating only the cells near it when
    /// possible. On error the complex is left as it was.
    pub fn move_vertex(&mut self, v: u32, p: [f64; 3]) -> Result<Moved> {
        let old = self.pts[v as usize];
        if old == p {
            return Ok(Moved::Local(Vec::new()));
        }
        if !p.iter().all(|x| x.is_finite()) {
            return Err(Error::DegenerateInput("non-finite coordinate".into()));
        }
        self.created.clear();
        match self.remove(v) {
            Ok(true) => {
                self.pts[v as usize] = p;
                if self.insert(v).is_ok() {
                    return Ok(Moved::Local(self.take_created()));
                }
            }
            Ok(false) => {}
            Err(e) => return Err(e),
        }
        self.pts[v as usize] = p;
        match Complex::build(self.pts.clone()) {
            Ok(cx) => {
                *self = cx;
                Ok(Moved::Rebuilt)
            }
            Err(e) => {
                self.pts[v as usize] = old;
                *self = Complex::build(self.pts.clone()).expect("previous configuration was valid");
                Err(e)
            }
        }
    }

    fn take_created(&mut self) -> Vec<u32> {
        let mut ids: Vec<u32> = self.created.drain(..).filter(|&id| self.alive[id as usize]).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Cells incident to a finite vertex, hull cells included.
    fn star(&self, v: u32) -> Option<Vec<u32>> {
        let hint = self.vcell[v as usize];
        let start = if hint != NO_CELL && self.alive[hint as usize] && self.cells[hint as usize].v.contains(&v) {
            hint
        } else {
            self.cells().find(|(_, c)| c.v.contains(&v))?.0
        };
        let mut out = vec![start];
        let mut k = 0;
        while k < out.len() {
            let c = self.cells[out[k] as usize];
            k += 1;
            for j in 0..4 {
                if c.v[j] != v && !out.contains(&c.n[j]) {
                    out.push(c.n[j]);
                }
            }
        }
        Some(out)
    }

    /// Deletes vertex `v` and fills its star with cells of the Delaunay
    /// complex of its link. Returns `false`, leaving the complex untouched,
    /// when the hole cannot be filled locally.
    ///
    /// Every cell of the new complex inside the hole has its vertices in the
    /// link and is empty with respect to it, so it is a cell of the link's
    /// complex; infinite cells there stand for the new hull cells.
    fn remove(&mut self, v: u32) -> Result<bool> {
        let Some(star) = self.star(v) else { return Ok(false) };
        let pv = self.pts[v as usize];
        let mut link: Vec<u32> = star.iter().flat_map(|&c| self.cells[c as usize].v).filter(|&u| u != v && u != INF).collect();
        link.sort_unstable();
        link.dedup();
        let Ok(small) = Complex::build(link.iter().map(|&u| self.pts[u as usize]).collect()) else {
            return Ok(false);
        };
        let big = |u: u32| if u == INF { INF } else { link[u as usize] };

        // Boundary faces of the hole, keyed by sorted global ids.
        let mut hole: HashMap<[u32; 3], (u32, u32, usize)> = HashMap::new();
        for &c in &star {
            let cell = self.cells[c as usize];
            let i = cell.v.iter().position(|&u| u == v).unwrap();
            let out = cell.n[i];
            let back = self.cells[out as usize].n.iter().position(|&n| n == c).unwrap();
            hole.insert(face_key(&cell.v, i), (out, c, back));
        }
        let mut faces: HashMap<[u32; 3], Vec<(u32, usize)>> = HashMap::new();
        for (id, c) in small.cells() {
            for j in 0..4 {
                faces.entry(face_key(&c.v.map(big), j)).or_default().push((id, j));
            }
        }

        // Seed with the cell on v's side of each boundary face, then flood
        // across faces interior to the hole.
        let mut chosen: Vec<u32> = Vec::new();
        let mut in_hole: HashMap<u32, ()> = HashMap::new();
        // Faces through infinity are reached by the flood instead.
        for key in hole.keys().filter(|k| k[2] != INF) {
            let Some(sides) = faces.get(key) else { return Ok(false) };
            let seed = sides.iter().find(|&&(id, j)| small.orient_with(small.cell(id), j, pv) > 0.0);
            let Some(&(id, _)) = seed else { return Ok(false) };
            if in_hole.insert(id, ()).is_none() {
                chosen.push(id);
            }
        }
        let mut k = 0;
        let mut matched = 0;
        while k < chosen.len() {
            let id = chosen[k];
            k += 1;
            let c = *small.cell(id);
            for j in 0..4 {
                if hole.contains_key(&face_key(&c.v.map(big), j)) {
                    matched += 1;
                } else if in_hole.insert(c.n[j], ()).is_none() {
                    chosen.push(c.n[j]);
                }
            }
        }
        if matched != hole.len() {
            return Ok(false);
        }

        let fresh: Vec<Cell> = chosen
            .iter()
            .map(|&id| {
                let v = small.cell(id).v.map(big);
                let mut n = [NO_CELL; 4];
                for (j, slot) in n.iter_mut().enumerate() {
                    if let Some(&(out, _, _)) = hole.get(&face_key(&v, j)) {
                        *slot = out;
                    }
                }
                Cell { v, n }
            })
            .collect();
        for &c in &star {
            self.alive[c as usize] = false;
            self.free.push(c);
        }
        let mut ids = Vec::with_capacity(fresh.len());
        for cell in fresh {
            let id = self.alloc(cell);
            for j in 0..4 {
                if let Some(&(out, _, back)) = hole.get(&face_key(&cell.v, j)) {
                    self.cells[out as usize].n[back] = id;
                }
            }
            ids.push(id);
        }
        self.link(&ids);
        self.created.extend_from_slice(&ids);
        self.hint = ids[0];
        self.vcell[v as usize] = NO_CELL;
        Ok(true)
    }

    pub fn cells(&self) -> impl Iterator<Item = (u32, &Cell)> + '_ {
        self.cells.iter().enumerate().filter(|(i, _)| self.alive[*i]).map(|(i, c)| (i as u32, c))
    }

    pub fn finite_cells(&self) -> impl Iterator<Item = (u32, &Cell)> + '_ {
        self.cells().filter(|(_, c)| !c.is_infinite())
    }

    pub fn is_alive(&self, id: u32) -> bool {
        self.alive.get(id as usize).copied().unwrap_or(false)
    }

    pub fn cell(&self, id: u32) -> &Cell {
        &self.cells[id as usize]
    }
}

fn face_key(v: &[u32; 4], j: usize) -> [u32; 3] {
    let mut f = [0; 3];
    let mut k = 0;
    for (i, &x) in v.iter().enumerate() {
        if i != j {
            f[k] = x;
            k += 1;
        }
    }
    f.sort_unstable();
    f
}
