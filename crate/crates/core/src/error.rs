use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point is not on the hyperboloid: {0}")]
    NotOnHyperboloid(String),
    #[error("plane normal is not a unit spacelike vector")]
    BadNormal,
    #[error("line anchors coincide (distance {0:e})")]
    DegenerateLine(f64),
    #[error("ball coordinate has norm {0} >= 1 - tolerance")]
    BallBoundary(f64),
    #[error("face is collinear within tolerance")]
    DegenerateFace,
    #[error("tetrahedron is coplanar within tolerance")]
    DegenerateTet,
    #[error("points lie on no hyperbolic sphere (horosphere or equidistant surface)")]
    NoCircumsphere,
    #[error("negative radius {0}")]
    NegativeRadius(f64),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("outside the domain of the bound: {0}")]
    OutOfDomain(String),
    #[error("no sigma on the ladder 2^-k, k <= {0}, meets the volume budget")]
    NoFeasibleSigma(u32),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("brute-force oracle limited to {limit} points, got {got}")]
    TooManyPoints { got: usize, limit: usize },
    #[error("vertex {vid} moved {distance:e}, limit {limit:e}")]
    MoveTooFar { vid: usize, distance: f64, limit: f64 },
    #[error("vertex {vid}: no clear position after {attempts} attempts")]
    ExhaustedAttempts { vid: usize, attempts: usize },
    #[error("unknown lemma id {0:?} (expected L1..L5)")]
    BadLemmaId(String),
    #[error("mesh file does not match the Delaunay triangulation of its points")]
    MeshMismatch,
    #[error("invalid file: {0}")]
    Format(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
