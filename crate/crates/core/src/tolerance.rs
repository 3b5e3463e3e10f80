//! Shared numeric thresholds.
//!
//! Kernel code and tests read every tolerance from here so that a check in a
//! test and the matching guard in the kernel can never drift apart.

/// Allowed deviation of `<x, x>` from `-1` for a point on the hyperboloid,
/// scaled by `max(1, x0^2)`.
pub const HYPERBOLOID: f64 = 1e-12;

/// Allowed deviation of `<n, n>` from `+1` for a unit plane normal.
pub const UNIT_NORMAL: f64 = 1e-12;

/// A circle center must lie on its plane within this distance.
pub const CIRCLE_ON_PLANE: f64 = 1e-10;

/// Normalized sine below which a face counts as collinear or a tetrahedron
/// as coplanar.
pub const DEGENERATE: f64 = 1e-10;

/// Minimum separation of the two anchors of a line.
pub const LINE_ANCHOR: f64 = 1e-9;

/// Poincare-ball inputs with Euclidean norm at or above `1 - BALL_BOUNDARY`
/// are rejected.
pub const BALL_BOUNDARY: f64 = 1e-12;

/// Slack on the empty-circumsphere check (hyperbolic distance).
pub const EMPTY_SPHERE: f64 = 1e-10;

/// Slack on the size window `[eps, 2 eps]`, `R_t <= eps` and lemma margins.
pub const WINDOW: f64 = 1e-9;

/// Slack on the perturbation radius in `update_vertex`.
pub const MOVE: f64 = 1e-12;

/// Slack on pairwise separation of a sample.
pub const SEPARATION: f64 = 1e-12;

/// Consecutive rejected probes that certify maximality of a sample.
pub const MAXIMALITY_PROBES: usize = 50_000;

/// Genericity jitter applied to accepted samples, as a fraction of eps.
pub const JITTER: f64 = 1e-7;

/// Rejection budget for one vertex perturbation.
pub const MAX_ATTEMPTS: usize = 10_000;

/// Deepest rung `2^-k` tried by the sigma ladder.
pub const SIGMA_LADDER_DEPTH: u32 = 200;

/// Fraction of the delta-ball volume the sliver regions may occupy.
pub const SIGMA_BUDGET: f64 = 0.5;

/// Sigma halvings allowed when a desliver pass runs out of attempts.
pub const SIGMA_HALVINGS: u32 = 5;

/// Largest input accepted by the brute-force Delaunay oracle.
pub const BRUTE_FORCE_MAX: usize = 64;

/// Bin count of the edge-length histogram in quality reports.
pub const HISTOGRAM_BINS: usize = 32;
