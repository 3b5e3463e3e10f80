//! Randomized checks of the sliver lemmas.
//!
//! Each trial draws its own generator from `(seed, trial)`, so a result is
//! fully determined by `(lemma, params, trials, seed)`. A trial fails when
//! the lemma's conclusion is violated by more than [`tolerance::WINDOW`].
//!
//! Two generators feed the trials. Conforming tetrahedra and triangles are
//! drawn by rejection from a ball of radius `R`. Constructed slivers put
//! three vertices on a circle whose radius is uniform in
//! `[asinh(sqrt 2 sinh(a/2)) * 1.01, 0.9 R]`, spaced so every chord is at
//! least `a`, and lift the fourth off the circle's plane by at most
//! `sigma` times the radius.

use std::f64::consts::{SQRT_2, TAU};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{
    project_to_line, sample_uniform_ball, tri_circumcircle, HCircle, HIsometry, HLine, HPlane, HPoint, Vec4,
};
use crate::quality::{h0_bound, k_bound, n_bound, theta_bound, v_bound, TetQuality, ThickParams};
use crate::tolerance;

/// Draws per generated object before the generator gives up.
const MAX_DRAWS: usize = 1_000_000;

/// Samples per generator stream in the volume estimate.
const VOLUME_CHUNK: u64 = 1 << 16;

/// Reach of the random isometry applied to every generated object.
const SPREAD: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    L1,
    L2,
    L3,
    L4,
    L5,
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L1" => Ok(LemmaId::L1),
            "L2" => Ok(LemmaId::L2),
            "L3" => Ok(LemmaId::L3),
            "L4" => Ok(LemmaId::L4),
            "L5" => Ok(LemmaId::L5),
            _ => Err(Error::BadLemmaId(s.to_string())),
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditResult {
    pub lemma: LemmaId,
    pub trials: u64,
    pub failures: u64,
    /// Smallest slack observed. For L5 it is relative to the bound.
    /// Absent when no trial produced a checkable instance.
    pub worst_margin: Option<f64>,
    pub seed: u64,
}

impl AuditResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.worst_margin.is_none_or(|m| m >= -tolerance::WINDOW)
    }
}

struct Tally {
    failures: u64,
    worst: Option<f64>,
}

impl Tally {
    fn new() -> Self {
        Tally { failures: 0, worst: None }
    }

    fn record(&mut self, margin: f64) {
        if !(margin >= -tolerance::WINDOW) {
            self.failures += 1;
        }
        self.worst = Some(self.worst.map_or(margin, |w| w.min(margin)));
    }
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn audit_lemma(lemma: LemmaId, params: &ThickParams, trials: u64, seed: u64) -> Result<AuditResult> {
    if trials == 0 {
        return Err(Error::BadParams("trials must be at least 1".into()));
    }
    let (a, b, r, sigma) = (params.a, params.b, params.r, params.sigma);
    let mut tally = Tally::new();
    match lemma {
        LemmaId::L1 => {
            let theta = theta_bound(a, b, sigma)?;
            for trial in 0..trials {
                let mut rng = trial_rng(seed, trial);
                // Alternate between generic tets and near-flat ones whose
                // flatness straddles sigma.
                let q = if trial % 2 == 0 {
                    random_conforming_tet(params, &mut rng)?.1
                } else {
                    constructed_tet(params, 4.0, &mut rng)?.1
                };
                if !q.is_sliver(sigma, params.rho) {
                    tally.record(q.min_dihedral - theta);
                }
            }
        }
        LemmaId::L2 => {
            let h0 = h0_bound(a, b, r)?;
            for trial in 0..trials {
                let mut rng = trial_rng(seed, trial);
                let tri = random_conforming_triangle(params, &mut rng)?;
                tally.record(min_altitude(&tri)? - h0);
            }
        }
        LemmaId::L3 => {
            let n = n_bound(sigma, a, b, r)?;
            for trial in 0..trials {
                let mut rng = trial_rng(seed, trial);
                let (_, q) = constructed_sliver(params, &mut rng)?;
                tally.record(n - q.max_flatness());
            }
        }
        LemmaId::L4 => {
            let k = k_bound(sigma, a, b, r)?;
            for trial in 0..trials {
                let mut rng = trial_rng(seed, trial);
                let (t, _) = constructed_sliver(params, &mut rng)?;
                let mut worst: f64 = 0.0;
                for v in 0..4 {
                    let [q, s, u] = opposite(&t, v);
                    worst = worst.max(tri_circumcircle(&q, &s, &u)?.distance(&t[v]));
                }
                tally.record(k - worst);
            }
        }
        LemmaId::L5 => {
            let k = k_bound(sigma, a, b, r)?;
            let bound = v_bound(sigma, a, b, r)?;
            let estimate = circle_neighborhood_volume(r, k, trials, seed)?;
            tally.record((bound - estimate) / bound);
        }
    }
    Ok(AuditResult { lemma, trials, failures: tally.failures, worst_margin: tally.worst, seed })
}

fn opposite(t: &[HPoint; 4], v: usize) -> [HPoint; 3] {
    let mut out = [t[0]; 3];
    let mut k = 0;
    for (i, p) in t.iter().enumerate() {
        if i != v {
            out[k] = *p;
            k += 1;
        }
    }
    out
}

fn exhausted(what: &str) -> Error {
    Error::BadParams(format!("no {what} found in {MAX_DRAWS} draws"))
}

/// Shortest distance from a vertex to the line through the other two.
pub fn min_altitude(tri: &[HPoint; 3]) -> Result<f64> {
    let mut h = f64::INFINITY;
    for v in 0..3 {
        let line = HLine::new(tri[(v + 1) % 3], tri[(v + 2) % 3])?;
        h = h.min(project_to_line(&tri[v], &line).1);
    }
    Ok(h)
}

/// A tetrahedron with edges in `[a, b]` and circumradius at most `R`,
/// drawn uniformly from `B(origin, R)^4` conditioned on the window and
/// then moved by a random isometry.
pub fn random_conforming_tet<G: Rng + ?Sized>(params: &ThickParams, rng: &mut G) -> Result<([HPoint; 4], TetQuality)> {
    for _ in 0..MAX_DRAWS {
        let t: [HPoint; 4] = std::array::from_fn(|_| sample_uniform_ball(&HPoint::ORIGIN, params.r, rng));
        let Ok(q) = TetQuality::measure(&t) else { continue };
        if !q.in_window(params) {
            continue;
        }
        if let Some(found) = moved_tet(t, params, rng) {
            return Ok(found);
        }
    }
    Err(exhausted("conforming tetrahedron"))
}

/// A triangle with edges in `[a, b]` and circumradius at most `R`, drawn
/// like [`random_conforming_tet`].
pub fn random_conforming_triangle<G: Rng + ?Sized>(params: &ThickParams, rng: &mut G) -> Result<[HPoint; 3]> {
    let w = tolerance::WINDOW;
    for _ in 0..MAX_DRAWS {
        let t: [HPoint; 3] = std::array::from_fn(|_| sample_uniform_ball(&HPoint::ORIGIN, params.r, rng));
        let iso = HIsometry::random(rng, SPREAD);
        let t = t.map(|p| iso.apply(&p));
        let edges_ok = (0..3).all(|i| {
            let e = crate::hyperbolic::hyp_distance(&t[i], &t[(i + 1) % 3]);
            e >= params.a - w && e <= params.b + w
        });
        if !edges_ok {
            continue;
        }
        match tri_circumcircle(&t[0], &t[1], &t[2]) {
            Ok(c) if c.radius <= params.r + w => return Ok(t),
            _ => continue,
        }
    }
    Err(exhausted("conforming triangle"))
}

fn moved_tet<G: Rng + ?Sized>(t: [HPoint; 4], params: &ThickParams, rng: &mut G) -> Option<([HPoint; 4], TetQuality)> {
    let iso = HIsometry::random(rng, SPREAD);
    let t = t.map(|p| iso.apply(&p));
    let q = TetQuality::measure(&t).ok()?;
    q.in_window(params).then_some((t, q))
}

/// Smallest circle radius on which four points can sit pairwise at least
/// `a` apart, with one percent to spare.
fn min_circle_radius(a: f64) -> f64 {
    (SQRT_2 * (a / 2.0).sinh()).asinh() * 1.01
}

/// A conforming tetrahedron with three vertices on a circle and the fourth
/// lifted off its plane by `u sigma r`, `u` uniform in `[0, lift)`.
pub fn constructed_tet<G: Rng + ?Sized>(
    params: &ThickParams,
    lift: f64,
    rng: &mut G,
) -> Result<([HPoint; 4], TetQuality)> {
    let lo = min_circle_radius(params.a);
    let hi = 0.9 * params.r;
    if !(lo < hi) {
        return Err(Error::OutOfDomain(format!("no circle radius in [{lo}, {hi}]")));
    }
    let normal = Vec4::new(0.0, 0.0, 0.0, 1.0);
    for _ in 0..MAX_DRAWS {
        let r = rng.random_range(lo..hi);
        let gap = 2.0 * ((params.a / 2.0).sinh() / r.sinh()).asin() * (1.0 + 1e-6);
        let slack = TAU - 4.0 * gap;
        let weights: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
        let total: f64 = weights.iter().sum();
        let mut angle = rng.random_range(0.0..TAU);
        let flat = rng.random_range(0..4usize);
        let height = rng.random_range(0.0..lift) * params.sigma * r;
        let push = rng.random_range(0.0..1.0) * params.sigma * r;
        let mut t = [HPoint::ORIGIN; 4];
        for (i, w) in weights.iter().enumerate() {
            let rad = if i == flat { r + push } else { r };
            let foot = HPoint::ORIGIN.along(&Vec4::new(0.0, angle.cos(), angle.sin(), 0.0), rad);
            t[i] = if i == flat { foot.along(&normal, height) } else { foot };
            angle += gap + slack * w / total;
        }
        if let Some(found) = moved_tet(t, params, rng) {
            return Ok(found);
        }
    }
    Err(exhausted("constructed tetrahedron"))
}

/// A conforming `(sigma, R/a)`-sliver from [`constructed_tet`].
pub fn constructed_sliver<G: Rng + ?Sized>(params: &ThickParams, rng: &mut G) -> Result<([HPoint; 4], TetQuality)> {
    for _ in 0..MAX_DRAWS {
        let (t, q) = constructed_tet(params, 1.0, rng)?;
        if q.is_sliver(params.sigma, params.rho) {
            return Ok((t, q));
        }
    }
    Err(exhausted("constructed sliver"))
}

/// `F(x) = cosh(s1 + x) - cosh(s1)` without cancellation.
fn cosh_rise(s1: f64, x: f64) -> f64 {
    2.0 * (s1 + x / 2.0).sinh() * (x / 2.0).sinh()
}

/// Solves `f(x) = target` for increasing `f` on `[lo, hi]`.
fn invert(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut x = lo + (hi - lo) * 0.5;
    for _ in 0..200 {
        let fx = f(x) - target;
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let d = df(x);
        let newton = if d > 0.0 { x - fx / d } else { f64::NAN };
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return next;
        }
        x = next;
    }
    x
}

/// Monte Carlo estimate of the volume of the `k`-neighborhood of a circle
/// of radius `radius`.
///
/// Points are drawn uniformly from the slab of height `2k` over the annulus
/// `radius - k <= d(center, foot) <= radius + k` in the circle's plane,
/// which contains the neighborhood. In Fermi coordinates about the plane
/// the volume element is `cosh^2 t dt dA`, so the slab has volume
/// `2 pi (cosh(radius + k) - cosh(max(radius - k, 0))) (k + sinh(2k) / 2)`.
pub fn circle_neighborhood_volume(radius: f64, k: f64, samples: u64, seed: u64) -> Result<f64> {
    if !(radius > 0.0 && k > 0.0) || samples == 0 {
        return Err(Error::BadParams(format!("need radius, k > 0 and samples >= 1 (radius {radius}, k {k})")));
    }
    let s1 = (radius - k).max(0.0);
    let width = radius + k - s1;
    let rise = cosh_rise(s1, width);
    let height_mass = |t: f64| t + (2.0 * t).sinh() / 2.0;
    let slab = TAU * rise * height_mass(k);
    let plane = HPlane::from_normal(Vec4::new(0.0, 0.0, 0.0, 1.0))?;
    let circle = HCircle::new(HPoint::ORIGIN, radius, plane)?;
    let normal = Vec4::new(0.0, 0.0, 0.0, 1.0);

    let mut hits = 0u64;
    let chunks = samples.div_ceil(VOLUME_CHUNK);
    for chunk in 0..chunks {
        let mut rng = trial_rng(seed, chunk);
        let count = VOLUME_CHUNK.min(samples - chunk * VOLUME_CHUNK);
        for _ in 0..count {
            let x = invert(|x| cosh_rise(s1, x), |x| (s1 + x).sinh(), rng.random::<f64>() * rise, 0.0, width);
            let t = invert(height_mass, |t| 2.0 * t.cosh().powi(2), rng.random::<f64>() * height_mass(k), 0.0, k);
            let t = if rng.random::<bool>() { t } else { -t };
            let phi = rng.random_range(0.0..TAU);
            let foot = HPoint::ORIGIN.along(&Vec4::new(0.0, phi.cos(), phi.sin(), 0.0), s1 + x);
            let p = foot.along(&normal, t);
            hits += (circle.distance(&p) <= k) as u64;
        }
    }
    Ok(slab * hits as f64 / samples as f64)
}
