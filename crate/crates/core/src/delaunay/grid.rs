//! Bucketing of points by Poincaré ball coordinates for radius queries.

use crate::hyperbolic::{to_ball, HPoint};

/// `d(p, q) < r` forces `|y_p - y_q| < sinh(r / 2)` between ball images, so
/// with cells that wide a query only visits the 27 surrounding cells.
#[derive(Clone, Debug)]
pub(crate) struct BallGrid {
    cell: f64,
    lo: [f64; 3],
    dims: [i64; 3],
    buckets: Vec<Vec<u32>>,
}

impl BallGrid {
    /// A grid over the box `[lo, hi]` for queries of radius at most `reach`.
    pub fn new(lo: [f64; 3], hi: [f64; 3], reach: f64) -> Self {
        let cell = (reach / 2.0).sinh();
        let dims = std::array::from_fn(|k| ((hi[k] - lo[k]) / cell).floor().max(0.0) as i64 + 1);
        let total = (dims[0] * dims[1] * dims[2]) as usize;
        BallGrid { cell, lo, dims, buckets: vec![Vec::new(); total] }
    }

    /// A grid holding `points`, sized to their bounding box.
    pub fn with_points(points: &[HPoint], reach: f64) -> Self {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for y in points.iter().map(to_ball) {
            for k in 0..3 {
                lo[k] = lo[k].min(y[k]);
                hi[k] = hi[k].max(y[k]);
            }
        }
        if points.is_empty() {
            (lo, hi) = ([0.0; 3], [0.0; 3]);
        }
        let mut g = BallGrid::new(lo, hi, reach);
        for (i, p) in points.iter().enumerate() {
            g.insert(i as u32, p);
        }
        g
    }

    fn key(&self, p: &HPoint) -> [i64; 3] {
        let y = to_ball(p);
        std::array::from_fn(|k| (((y[k] - self.lo[k]) / self.cell).floor() as i64).clamp(0, self.dims[k] - 1))
    }

    fn slot(&self, k: [i64; 3]) -> usize {
        ((k[0] * self.dims[1] + k[1]) * self.dims[2] + k[2]) as usize
    }

    pub fn insert(&mut self, id: u32, p: &HPoint) {
        let s = self.slot(self.key(p));
        self.buckets[s].push(id);
    }

    /// Ids in the cells around `p`, own cell first; a superset of the points
    /// within `reach` of `p`.
    pub fn around(&self, p: &HPoint) -> impl Iterator<Item = u32> + '_ {
        let k = self.key(p);
        let own = self.slot(k);
        let mut slots = vec![own];
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let q = [k[0] + dx, k[1] + dy, k[2] + dz];
                    if (0..3).all(|i| q[i] >= 0 && q[i] < self.dims[i]) {
                        let s = self.slot(q);
                        if s != own {
                            slots.push(s);
                        }
                    }
                }
            }
        }
        slots.into_iter().flat_map(move |s| self.buckets[s].iter().copied())
    }
}
