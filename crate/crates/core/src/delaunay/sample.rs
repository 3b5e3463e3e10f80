use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::complex::Complex;
use super::grid::BallGrid;
use super::{PointSet, SampleDomain};
use crate::error::{Error, Result};
use crate::hyperbolic::measure_internal::circumsphere_unchecked;
use crate::hyperbolic::{from_ball, hyp_distance, sample_uniform_ball, to_ball, HIsometry, HPoint};
use crate::tolerance;

/// Accepted points around the origin.
struct Packing {
    eps: f64,
    radius: f64,
    /// `d(p, q) < eps` iff the Minkowski chord `<p - q, p - q>` is below this.
    chord_sq: f64,
    points: Vec<HPoint>,
    grid: BallGrid,
}

impl Packing {
    fn new(eps: f64, radius: f64) -> Self {
        let rim = (radius / 2.0).tanh();
        Packing {
            eps,
            radius,
            chord_sq: (2.0 * (eps / 2.0).sinh()).powi(2),
            points: Vec::new(),
            grid: BallGrid::new([-rim; 3], [rim; 3], eps),
        }
    }

    fn admits(&self, p: &HPoint) -> bool {
        hyp_distance(&HPoint::ORIGIN, p) <= self.radius
            && !self.grid.around(p).any(|i| (*self.points[i as usize].vec() - *p.vec()).norm_sq() < self.chord_sq)
    }

    /// Adds `p`, nudged by a tiny random displacement when that keeps the
    /// set admissible.
    fn push_jittered(&mut self, p: HPoint, rng: &mut ChaCha8Rng) {
        let q = sample_uniform_ball(&p, tolerance::JITTER * self.eps, rng);
        let p = if self.admits(&q) { q } else { p };
        self.grid.insert(self.points.len() as u32, &p);
        self.points.push(p);
    }
}

/// A point uniform by hyperbolic volume in `B(origin, radius)`, by rejection
/// from the Euclidean-uniform law on its ball image. The hyperbolic density
/// `8 / (1 - |y|^2)^3` peaks on the rim, which sets the acceptance weight.
fn probe(radius: f64, rng: &mut ChaCha8Rng) -> HPoint {
    let rim = (radius / 2.0).tanh();
    let floor = 1.0 - rim * rim;
    loop {
        let y: [f64; 3] = std::array::from_fn(|_| rng.random_range(-rim..rim));
        let r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
        if r2 > rim * rim {
            continue;
        }
        if rng.random::<f64>() < (floor / (1.0 - r2)).powi(3) {
            if let Ok(p) = from_ball(y) {
                return p;
            }
        }
    }
}

/// A maximal `eps`-separated subset of `domain`.
///
/// Dart throwing stops after [`tolerance::MAXIMALITY_PROBES`] consecutive
/// rejected probes. The set is then completed by adding the circumcenter of
/// every Delaunay tet whose circumcenter lies in the domain and whose
/// circumradius exceeds `eps`, until none is left, so no tet centered in the
/// domain has circumradius above `eps`.
pub fn sample_maximal(domain: &SampleDomain, eps: f64, seed: u64) -> Result<PointSet> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::BadParams(format!("eps must be positive, got {eps}")));
    }
    if !(domain.radius > 0.0 && domain.radius < 20.0) {
        return Err(Error::BadParams(format!("domain radius must lie in (0, 20), got {}", domain.radius)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pack = Packing::new(eps, domain.radius);
    let mut misses = 0;
    while misses < tolerance::MAXIMALITY_PROBES {
        let p = probe(domain.radius, &mut rng);
        if pack.admits(&p) {
            pack.push_jittered(p, &mut rng);
            misses = 0;
        } else {
            misses += 1;
        }
    }
    fill_holes(&mut pack, &mut rng)?;
    let iso = HIsometry::translation(&domain.center);
    Ok(PointSet {
        points: pack.points.iter().map(|p| iso.apply(p)).collect(),
        eps,
        seed,
        domain: Some(*domain),
    })
}

fn fill_holes(pack: &mut Packing, rng: &mut ChaCha8Rng) -> Result<()> {
    if pack.points.len() < 4 {
        return Ok(());
    }
    loop {
        let cx = Complex::build(pack.points.iter().map(to_ball).collect())?;
        let mut holes: Vec<(f64, HPoint)> = cx
            .finite_cells()
            .filter_map(|(_, c)| circumsphere_unchecked(&c.v.map(|v| pack.points[v as usize])))
            .filter(|s| s.radius > pack.eps && hyp_distance(&HPoint::ORIGIN, &s.center) <= pack.radius)
            .map(|s| (s.radius, s.center))
            .collect();
        // Largest holes first, with coordinates breaking ties.
        holes.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.coords().partial_cmp(&b.1.coords()).unwrap()));
        let before = pack.points.len();
        for (_, c) in holes {
            if pack.admits(&c) {
                pack.push_jittered(c, rng);
            }
        }
        if pack.points.len() == before {
            return Ok(());
        }
    }
}
