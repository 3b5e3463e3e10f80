#![allow(clippy::excessive_precision)]

//! Closed-form bounds against arbitrary-precision reference values
//! produced by `tests/oracles/constants_oracle.py`.

use thickmesh_core::hyperbolic::{ball_volume, regular_tetrahedron, HIsometry, HPoint};
use thickmesh_core::quality::{
    choose_sigma, derive_params, h0_bound, h1_bound, j_bound, k_bound, n_bound, neighbor_cap,
    theta_bound, v_bound, Constants, Scale, ThickParams, TetQuality,
};
use thickmesh_core::Error;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(got: f64, want: f64, rel: f64) {
    assert!(
        ((got - want) / want).abs() <= rel,
        "got {got:e}, want {want:e}, rel err {:e}",
        ((got - want) / want).abs()
    );
}

fn thick() -> ThickParams {
    derive_params(Scale::Thickness { mu: 0.1 }, 0.01).unwrap()
}

fn geometry() -> ThickParams {
    derive_params(Scale::Geometry { eps: 0.2, delta: None }, 0.01).unwrap()
}

struct Golden {
    theta: f64,
    h1: f64,
    h0: f64,
    n: f64,
    j: f64,
    k: f64,
    v: f64,
    m: u64,
    big_n: u64,
    k_star: u32,
    k_at_star: f64,
    v_at_star: f64,
    region: f64,
    budget: f64,
    theta_star: f64,
}

const THICK: Golden = Golden {
    theta: 0.001818181353272962,
    h1: 5.4767246255593991e-5,
    h0: 1.9915348342654663e-5,
    n: 3.0378596884586433,
    j: 0.0066832788763750636,
    k: 0.040100255439611245,
    v: 0.0021636085225196643,
    m: 166,
    big_n: 748_660,
    k_star: 31,
    k_at_star: 1.8672918168156311e-9,
    v_at_star: 8.0756164527272683e-19,
    region: 6.0458910134987967e-13,
    budget: 2.0943951065819857e-12,
    theta_star: 8.4665620304456898e-11,
};

const GEOMETRY: Golden = Golden {
    theta: 0.0017608148099258949,
    h1: 0.011186599462839024,
    h0: 0.0039564058167081498,
    n: 3.1253039803241637,
    j: 1.2780587957445842,
    k: 19.510408023130379,
    v: 1.2279199447318163e34,
    m: 172,
    big_n: 833_340,
    k_star: 31,
    k_at_star: 3.9942586598756616e-7,
    v_at_star: 7.4499142821113189e-12,
    region: 6.2083115678546465e-6,
    budget: 1.6756501283075578e-5,
    theta_star: 8.1994277993869288e-11,
};

fn check(p: &ThickParams, g: &Golden) {
    let (a, b, r, s) = (p.a, p.b, p.r, p.sigma);
    close(theta_bound(a, b, s).unwrap(), g.theta, 1e-12);
    close(h1_bound(a, r).unwrap(), g.h1, 1e-9);
    close(h0_bound(a, b, r).unwrap(), g.h0, 1e-9);
    close(n_bound(s, a, b, r).unwrap(), g.n, 1e-9);
    close(j_bound(s, a, b, r).unwrap(), g.j, 1e-9);
    close(k_bound(s, a, b, r).unwrap(), g.k, 1e-9);
    close(v_bound(s, a, b, r).unwrap(), g.v, 1e-8);
    assert_eq!(neighbor_cap(p).unwrap(), (g.m, g.big_n));

    let c = choose_sigma(p).unwrap();
    assert_eq!(c.k, g.k_star);
    assert_eq!(c.sigma, (-(g.k_star as f64)).exp2());
    close(c.region_volume, g.region, 1e-8);
    close(c.budget, g.budget, 1e-12);
    close(k_bound(c.sigma, a, b, r).unwrap(), g.k_at_star, 1e-9);
    close(v_bound(c.sigma, a, b, r).unwrap(), g.v_at_star, 1e-8);
    close(theta_bound(a, b, c.sigma).unwrap(), g.theta_star, 1e-12);
}

#[test]
fn thickness_scale_golden_values() {
    check(&thick(), &THICK);
}

#[test]
fn geometry_mode_golden_values() {
    check(&geometry(), &GEOMETRY);
}

#[test]
fn ladder_is_strictly_decreasing() {
    for p in [thick(), geometry()] {
        let mut prev: Option<[f64; 4]> = None;
        for k in 0..=40 {
            let s = (-(k as f64)).exp2();
            let (a, b, r) = (p.a, p.b, p.r);
            let theta = theta_bound(a, b, s).ok();
            let n = n_bound(s, a, b, r).unwrap();
            // K and V only exist once J < pi/2.
            let (Some(theta), Ok(kk), Ok(v)) = (theta, k_bound(s, a, b, r), v_bound(s, a, b, r)) else {
                assert!(prev.is_none(), "bound undefined at k = {k} after being defined");
                continue;
            };
            let cur = [theta, n, kk, v];
            if let Some(prev) = prev {
                for (c, q) in cur.iter().zip(prev) {
                    assert!(*c < q, "not decreasing at k = {k}");
                }
            }
            prev = Some(cur);
        }
        assert!(prev.is_some());
    }
}

#[test]
fn small_sigma_limits() {
    let p = thick();
    assert!(n_bound(1e-12, p.a, p.b, p.r).unwrap() < 1e-8);
    assert!(k_bound(1e-12, p.a, p.b, p.r).unwrap() < 1e-6);
}

#[test]
fn large_sigma_is_out_of_domain() {
    let p = geometry();
    assert!(matches!(k_bound(1.0, p.a, p.b, p.r), Err(Error::OutOfDomain(_))));
    assert!(matches!(v_bound(1.0, p.a, p.b, p.r), Err(Error::OutOfDomain(_))));
}

#[test]
fn choose_sigma_is_maximal_on_ladder() {
    for p in [thick(), geometry()] {
        let c = choose_sigma(&p).unwrap();
        let (_, n) = neighbor_cap(&p).unwrap();
        assert!(c.region_volume < ball_volume(p.delta).unwrap());
        assert!(c.region_volume <= c.budget);
        match v_bound(2.0 * c.sigma, p.a, p.b, p.r) {
            Ok(v) => assert!(n as f64 * v > c.budget),
            Err(e) => assert!(matches!(e, Error::OutOfDomain(_))),
        }
    }
}

#[test]
fn neighbor_cap_matches_cube_law() {
    let p = thick();
    let exact = ball_volume(p.b).unwrap() / ball_volume(p.eps / 2.0 - p.delta).unwrap();
    let cube = (p.b / (p.eps / 2.0 - p.delta)).powi(3);
    assert!((exact / cube - 1.0).abs() < 1e-3);
    assert_eq!(cube.floor() as u64, 166);
}

#[test]
fn neighbor_cap_nondecreasing_in_eps() {
    let mut prev = 0;
    for i in 1..=60 {
        let eps = 1e-3 * 1.15f64.powi(i);
        let p = derive_params(Scale::Geometry { eps, delta: None }, 0.01).unwrap();
        let (_, n) = neighbor_cap(&p).unwrap();
        assert!(n >= prev, "N dropped at eps = {eps}");
        prev = n;
    }
}

#[test]
fn constants_json_keys() {
    let v = serde_json::to_value(Constants::evaluate(&thick()).unwrap()).unwrap();
    let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    keys.sort();
    let mut want = ["eps", "delta", "a", "b", "R", "rho", "theta", "h0", "n", "J", "K", "V", "m", "N", "sigma_star"];
    want.sort();
    assert_eq!(keys, want);
    assert_eq!(v["N"], 748_660);
    assert_eq!(v["sigma_star"], (-31f64).exp2());
    let undefined = Constants::evaluate(&geometry().with_sigma(1.0)).unwrap();
    assert!(undefined.k.is_none() && undefined.v.is_none());
}

#[test]
fn regular_tet_is_not_a_sliver() {
    let p = thick();
    let t = regular_tetrahedron(1e-4);
    let q = TetQuality::measure(&t).unwrap();
    for f in q.flatness() {
        close(f, 2f64.sqrt(), 1e-6);
    }
    assert!(!q.is_sliver(p.sigma, p.rho));
    assert!(q.radius_edge() < p.rho);
}

#[test]
fn radius_edge_overrides_flatness() {
    // Nearly flat but with a long-way-off circumcenter relative to its
    // short edge: flatness alone would call it a sliver.
    let pts = [
        HPoint::from_spatial(0.0, 0.0, 0.0),
        HPoint::from_spatial(1e-3, 0.0, 0.0),
        HPoint::from_spatial(0.0, 1e-3, 0.0),
        HPoint::from_spatial(1e-5, 1e-5, 1e-7),
    ];
    let q = TetQuality::measure(&pts).unwrap();
    assert!(q.min_flatness() < 0.01);
    assert!(q.radius_edge() > 1.375);
    assert!(!q.is_sliver(0.01, 1.375));
}

#[test]
fn quality_is_isometry_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let base = regular_tetrahedron(0.3);
    let skew = [base[0], base[1], base[2], HPoint::from_spatial(0.05, -0.02, 0.11)];
    for t in [base, skew] {
        let q0 = TetQuality::measure(&t).unwrap();
        for _ in 0..200 {
            let reach = rng.random_range(0.0..3.0);
            let iso = HIsometry::random(&mut rng, reach);
            let q1 = TetQuality::measure(&t.map(|p| iso.apply(&p))).unwrap();
            let a = serde_json::to_value(q0).unwrap();
            let b = serde_json::to_value(q1).unwrap();
            for (k, va) in a.as_object().unwrap() {
                let flat = |v: &serde_json::Value| -> Vec<f64> {
                    match v {
                        serde_json::Value::Array(xs) => xs.iter().map(|x| x.as_f64().unwrap()).collect(),
                        x => vec![x.as_f64().unwrap()],
                    }
                };
                for (x, y) in flat(va).into_iter().zip(flat(&b[k])) {
                    assert!((x - y).abs() <= 1e-9, "{k}: {x} vs {y}");
                }
            }
        }
    }
}
