//! Aggregate quality of a mesh: counts, angles, edge lengths and the
//! dihedral floor check.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::delaunay::DelaunayMesh;
use crate::error::Result;
use crate::hyperbolic::{hyp_distance, EDGES};
use crate::quality::{theta_bound, TetQuality, ThickParams};
use crate::tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
}

#[derive(Serialize)]
struct CsvRow {
    bin_lo: f64,
    bin_hi: f64,
    count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub tets: usize,
    pub interior_tets: usize,
    /// Interior tets with edges in `[a, b]` and circumradius at most `R`.
    pub window_tets: usize,
    /// Interior `(sigma, rho)`-slivers. Tets too flat to measure count here.
    pub slivers: usize,
    pub window_slivers: usize,
    pub min_dihedral: Option<f64>,
    /// Mean over every dihedral angle of every interior tet.
    pub mean_dihedral: Option<f64>,
    pub window_min_dihedral: Option<f64>,
    /// Over the distinct edges of interior tets.
    pub edge_min: Option<f64>,
    pub edge_max: Option<f64>,
    /// Edge lengths binned over `[0, 3 eps]`; longer edges land in the last bin.
    pub histogram: Vec<HistogramBin>,
    pub circumradius_max: Option<f64>,
    /// `theta_bound(a, b, sigma)`, absent when sigma is outside its domain.
    pub theta: Option<f64>,
    /// No window-conforming interior sliver, and every window-conforming
    /// interior tet has its dihedral angles at least `theta`.
    pub theta_floor: bool,
    pub params: ThickParams,
    pub seed: u64,
}

fn fold_min(acc: Option<f64>, x: f64) -> Option<f64> {
    Some(acc.map_or(x, |a| a.min(x)))
}

fn fold_max(acc: Option<f64>, x: f64) -> Option<f64> {
    Some(acc.map_or(x, |a| a.max(x)))
}

pub fn quality_report(mesh: &DelaunayMesh, params: &ThickParams) -> QualityReport {
    let theta = theta_bound(params.a, params.b, params.sigma).ok();
    let span = 3.0 * params.eps;
    let bins = tolerance::HISTOGRAM_BINS;
    let mut histogram: Vec<HistogramBin> = (0..bins)
        .map(|i| HistogramBin { lo: span * i as f64 / bins as f64, hi: span * (i + 1) as f64 / bins as f64, count: 0 })
        .collect();

    let mut r = QualityReport {
        tets: mesh.len(),
        interior_tets: 0,
        window_tets: 0,
        slivers: 0,
        window_slivers: 0,
        min_dihedral: None,
        mean_dihedral: None,
        window_min_dihedral: None,
        edge_min: None,
        edge_max: None,
        histogram: Vec::new(),
        circumradius_max: None,
        theta,
        theta_floor: true,
        params: *params,
        seed: mesh.vertices().seed,
    };
    let mut edges = BTreeSet::new();
    let (mut angle_sum, mut angle_count) = (0.0, 0usize);
    for (t, tet) in mesh.tets().iter().enumerate() {
        if !mesh.interior()[t] {
            continue;
        }
        r.interior_tets += 1;
        for (i, j) in EDGES {
            edges.insert((tet[i].min(tet[j]), tet[i].max(tet[j])));
        }
        let Ok(q) = TetQuality::measure(&mesh.tet_points(t)) else {
            r.slivers += 1;
            r.theta_floor = false;
            continue;
        };
        r.circumradius_max = fold_max(r.circumradius_max, q.circumradius);
        r.min_dihedral = fold_min(r.min_dihedral, q.min_dihedral);
        angle_sum += q.dihedral.iter().sum::<f64>();
        angle_count += 6;
        let sliver = q.is_sliver(params.sigma, params.rho);
        r.slivers += sliver as usize;
        if q.in_window(params) {
            r.window_tets += 1;
            r.window_slivers += sliver as usize;
            r.window_min_dihedral = fold_min(r.window_min_dihedral, q.min_dihedral);
            let floor_ok = theta.is_some_and(|th| q.min_dihedral >= th - tolerance::WINDOW);
            r.theta_floor &= !sliver && floor_ok;
        }
    }
    if angle_count > 0 {
        r.mean_dihedral = Some(angle_sum / angle_count as f64);
    }
    let points = mesh.points();
    for (i, j) in edges {
        let len = hyp_distance(&points[i], &points[j]);
        r.edge_min = fold_min(r.edge_min, len);
        r.edge_max = fold_max(r.edge_max, len);
        let bin = ((len / span * bins as f64) as usize).min(bins - 1);
        histogram[bin].count += 1;
    }
    r.histogram = histogram;
    r
}

impl QualityReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn histogram_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for b in &self.histogram {
            w.serialize(CsvRow { bin_lo: b.lo, bin_hi: b.hi, count: b.count }).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is UTF-8")
    }

    /// Whether the report certifies the mesh: no interior sliver and the
    /// dihedral floor holds.
    pub fn certified(&self) -> bool {
        self.slivers == 0 && self.theta_floor
    }
}

pub fn write_report(path: &Path, report: &QualityReport) -> Result<()> {
    std::fs::write(path, report.to_json())?;
    Ok(())
}

pub fn read_report(path: &Path) -> Result<QualityReport> {
    QualityReport::from_json(&std::fs::read_to_string(path)?)
}
