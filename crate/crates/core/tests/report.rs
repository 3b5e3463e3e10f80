use thickmesh_core::delaunay::{build_delaunay, interior_tets, sample_maximal, PointSet, SampleDomain};
use thickmesh_core::hyperbolic::{regular_tetrahedron, HPoint};
use thickmesh_core::quality::{derive_params, theta_bound, Scale, ThickParams};
use thickmesh_core::report::{quality_report, read_report, write_report, QualityReport};

fn single_tet(edge: f64, seed: u64) -> thickmesh_core::delaunay::DelaunayMesh {
    let points = regular_tetrahedron(edge).to_vec();
    let set = PointSet { points, eps: edge, seed, domain: None };
    build_delaunay(&set).unwrap().with_interior(vec![true]).unwrap()
}

fn geometry(eps: f64, sigma: f64) -> ThickParams {
    derive_params(Scale::Geometry { eps, delta: None }, sigma).unwrap()
}

#[test]
fn regular_tet_at_small_scale() {
    let edge = 1e-4;
    let r = quality_report(&single_tet(edge, 11), &geometry(edge, 0.01));
    assert_eq!((r.tets, r.interior_tets, r.window_tets), (1, 1, 1));
    assert_eq!(r.slivers, 0);
    let euclid = (1.0f64 / 3.0).acos();
    assert!((r.min_dihedral.unwrap() / euclid - 1.0).abs() < 1e-6);
    assert!((r.mean_dihedral.unwrap() / euclid - 1.0).abs() < 1e-6);
    assert!((r.edge_min.unwrap() / edge - 1.0).abs() < 1e-9);
    assert!((r.circumradius_max.unwrap() / ((3.0f64 / 8.0).sqrt() * edge) - 1.0).abs() < 1e-6);
    assert!(r.theta_floor && r.certified());
    assert_eq!(r.seed, 11);
    assert_eq!(r.histogram.len(), 32);
    // Six edges of length eps fall in bin floor(32 / 3) = 10.
    assert_eq!(r.histogram[10].count, 6);
    assert_eq!(r.histogram.iter().map(|b| b.count).sum::<u64>(), 6);
}

#[test]
fn flat_tet_is_counted_and_breaks_the_floor() {
    let eps = 0.2;
    let p = geometry(eps, 0.05);
    // Square of side 0.2 with one corner lifted slightly.
    let h = 0.2 / 2f64.sqrt();
    let points = vec![
        HPoint::from_spatial(h * 0.9, 0.0, 0.0),
        HPoint::from_spatial(0.0, h * 0.9, 0.0),
        HPoint::from_spatial(-h * 0.9, 0.0, 0.0),
        HPoint::from_spatial(0.0, -h * 0.9, 0.002),
    ];
    let mesh = build_delaunay(&PointSet { points, eps, seed: 0, domain: None }).unwrap();
    let mesh = mesh.with_interior(vec![true]).unwrap();
    let r = quality_report(&mesh, &p);
    assert_eq!(r.slivers, 1);
    assert!(!r.certified());
    if r.window_tets == 1 {
        assert_eq!(r.window_slivers, 1);
        assert!(!r.theta_floor);
    }
    assert!(r.min_dihedral.unwrap() < theta_bound(p.a, p.b, p.sigma).unwrap() * 1e3);
}

#[test]
fn empty_interior_is_vacuous() {
    let set = PointSet { points: regular_tetrahedron(0.2).to_vec(), eps: 0.2, seed: 0, domain: None };
    let mesh = build_delaunay(&set).unwrap();
    let r = quality_report(&mesh, &geometry(0.2, 0.01));
    assert_eq!((r.tets, r.interior_tets), (1, 0));
    assert!(r.theta_floor);
    assert!(r.min_dihedral.is_none() && r.edge_max.is_none());
}

#[test]
fn sampled_mesh_report_and_round_trip() {
    let domain = SampleDomain::new(HPoint::ORIGIN, 1.0).unwrap();
    let set = sample_maximal(&domain, 0.2, 5).unwrap();
    let p = geometry(0.2, 2f64.powi(-20));
    let mesh = build_delaunay(&set).unwrap();
    assert_eq!(mesh.interior(), interior_tets(&mesh, &domain, &p).as_slice());
    let r = quality_report(&mesh, &p);
    assert!(r.interior_tets > 0);
    assert!(r.edge_min.unwrap() >= 0.2 - 1e-9);
    assert!(r.edge_max.unwrap() <= 0.4 + 1e-9);
    assert!(r.circumradius_max.unwrap() <= 0.2 + 1e-9);
    assert!(r.window_tets == r.interior_tets);
    // The floor check implies no window-conforming sliver.
    assert!(!r.theta_floor || r.window_slivers == 0);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    write_report(&path, &r).unwrap();
    let first = std::fs::read(&path).unwrap();
    let back = read_report(&path).unwrap();
    assert_eq!(back, r);
    write_report(&path, &back).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), first);
}

#[test]
fn histogram_csv_layout() {
    let r = quality_report(&single_tet(0.2, 0), &geometry(0.2, 0.01));
    let csv = r.histogram_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "bin_lo,bin_hi,count");
    assert_eq!(lines.len(), 33);
    let last: Vec<f64> = lines[32].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((last[1] - 0.6).abs() < 1e-12);
    let json = r.to_json();
    assert_eq!(QualityReport::from_json(&json).unwrap().to_json(), json);
}
