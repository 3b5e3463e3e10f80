use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thickmesh_core::audit::{audit_lemma, LemmaId};
use thickmesh_core::delaunay::{
    brute_force_delaunay, build_delaunay, read_mesh, read_points, sample_maximal, write_mesh, write_points,
    PointSet, SampleDomain,
};
use thickmesh_core::desliver::{desliver, write_log, Outcome};
use thickmesh_core::hyperbolic::{sample_uniform_ball, HPoint};
use thickmesh_core::quality::{choose_sigma, derive_params, Constants, Scale, ThickParams};
use thickmesh_core::report::{quality_report, write_report};
use thickmesh_core::Error;

#[derive(Parser)]
#[command(name = "thickmesh", version, about = "Thick Delaunay meshes in hyperbolic 3-space")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
#[group(required = true, multiple = false)]
struct ScaleArgs {
    /// Thickness; sets eps = mu / 100 and delta = eps / 10.
    #[arg(long)]
    mu: Option<f64>,
    /// Separation, for geometry-scale runs.
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    #[command(flatten)]
    scale: ScaleArgs,
    /// Perturbation radius (with --eps only); defaults to eps / 10.
    #[arg(long, requires = "eps")]
    delta: Option<f64>,
    /// Flatness threshold; defaults to the largest admissible 2^-k.
    #[arg(long)]
    sigma: Option<f64>,
}

impl ParamArgs {
    fn params(&self) -> anyhow::Result<ThickParams> {
        let scale = match (self.scale.mu, self.scale.eps) {
            (Some(mu), _) => Scale::Thickness { mu },
            (None, Some(eps)) => Scale::Geometry { eps, delta: self.delta },
            (None, None) => bail!("one of --mu or --eps is required"),
        };
        let p = derive_params(scale, 1.0)?;
        Ok(match self.sigma {
            Some(s) => derive_params(scale, s)?,
            None => p.with_sigma(choose_sigma(&p)?.sigma),
        })
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Maximal eps-separated sample of a ball about the origin.
    Sample {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        domain_radius: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Delaunay triangulation of a point file.
    Mesh {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// One perturbation pass that removes slivers.
    Desliver {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        log: PathBuf,
    },
    /// Quality report; exits 1 unless the mesh is certified.
    Audit {
        #[arg(long)]
        mesh: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// JSON report; the histogram goes next to it with a .csv extension.
        #[arg(long)]
        report: PathBuf,
    },
    /// Every bound for one parameter set.
    Constants {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Randomized check of one lemma; exits 1 on any failure.
    Lemma {
        #[arg(long)]
        id: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cross-checks against brute-force references.
    Oracle {
        #[command(subcommand)]
        which: OracleCmd,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Incremental Delaunay against the brute-force empty-sphere test.
    Delaunay {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        /// Radius of the ball the points are drawn from.
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
}

fn print(v: &impl serde::Serialize) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn check_eps(points: &PointSet, p: &ThickParams) -> anyhow::Result<()> {
    if (points.eps - p.eps).abs() > 1e-12 * p.eps {
        bail!("mesh was sampled with eps {} but the parameters give eps {}", points.eps, p.eps);
    }
    Ok(())
}

fn csv_path(report: &Path) -> PathBuf {
    report.with_extension("csv")
}

/// `Ok(true)` on success, `Ok(false)` on an audit or certification failure.
fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.cmd {
        Cmd::Sample { params, domain_radius, seed, out } => {
            let p = params.params()?;
            let domain = SampleDomain::new(HPoint::ORIGIN, domain_radius)?;
            let set = sample_maximal(&domain, p.eps, seed)?;
            write_points(&out, &set).with_context(|| format!("writing {}", out.display()))?;
            print(&json!({ "points": set.len(), "eps": p.eps, "seed": seed }))?;
        }
        Cmd::Mesh { input, out } => {
            let set = read_points(&input).with_context(|| format!("reading {}", input.display()))?;
            let mesh = build_delaunay(&set)?;
            write_mesh(&out, &mesh).with_context(|| format!("writing {}", out.display()))?;
            let interior = mesh.interior().iter().filter(|&&f| f).count();
            print(&json!({ "vertices": set.len(), "tets": mesh.len(), "interior": interior }))?;
        }
        Cmd::Desliver { input, params, seed, out, log } => {
            let p = params.params()?;
            let mesh = read_mesh(&input).with_context(|| format!("reading {}", input.display()))?;
            check_eps(mesh.vertices(), &p)?;
            let done = match desliver(&mesh, &p, seed) {
                Ok(d) => d,
                Err(e @ Error::ExhaustedAttempts { .. }) => {
                    eprintln!("thickmesh: {e}");
                    return Ok(false);
                }
                Err(e) => return Err(e.into()),
            };
            write_mesh(&out, &done.mesh)?;
            write_log(&log, &done.log)?;
            let moved = done.log.iter().filter(|r| r.outcome == Outcome::Moved).count();
            let max_candidates = done.log.iter().map(|r| r.candidates).max().unwrap_or(0);
            print(&json!({
                "sigma": done.sigma,
                "halvings": done.halvings,
                "moved": moved,
                "kept": done.log.len() - moved,
                "max_candidates": max_candidates,
            }))?;
        }
        Cmd::Audit { mesh, params, report } => {
            let p = params.params()?;
            let mesh = read_mesh(&mesh).with_context(|| format!("reading {}", mesh.display()))?;
            check_eps(mesh.vertices(), &p)?;
            let r = quality_report(&mesh, &p);
            write_report(&report, &r)?;
            std::fs::write(csv_path(&report), r.histogram_csv())?;
            print(&json!({
                "interior_tets": r.interior_tets,
                "slivers": r.slivers,
                "min_dihedral": r.min_dihedral,
                "theta": r.theta,
                "theta_floor": r.theta_floor,
                "certified": r.certified(),
            }))?;
            return Ok(r.certified());
        }
        Cmd::Constants { params } => {
            print(&Constants::evaluate(&params.params()?)?)?;
        }
        Cmd::Lemma { id, params, trials, seed } => {
            let id: LemmaId = id.parse()?;
            let r = audit_lemma(id, &params.params()?, trials, seed)?;
            print(&r)?;
            return Ok(r.passed());
        }
        Cmd::Oracle { which: OracleCmd::Delaunay { n, seeds, radius } } => {
            let mut mismatches = Vec::new();
            for seed in 0..seeds {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let points = (0..n).map(|_| sample_uniform_ball(&HPoint::ORIGIN, radius, &mut rng)).collect();
                let set = PointSet { points, eps: radius / 5.0, seed, domain: None };
                if build_delaunay(&set)?.tets() != brute_force_delaunay(&set)?.as_slice() {
                    mismatches.push(seed);
                }
            }
            print(&json!({ "n": n, "seeds": seeds, "mismatches": mismatches }))?;
            return Ok(mismatches.is_empty());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("thickmesh: {e:#}");
            ExitCode::from(2)
        }
    }
}
