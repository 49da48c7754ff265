use std::fmt;

/// Lattice position attached to a failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Vertex {
        m: usize,
        n: usize,
    },
    /// Edge from (m, n) to (m + 1, n).
    HorizontalEdge {
        m: usize,
        n: usize,
    },
    /// Edge from (m, n) to (m, n + 1).
    VerticalEdge {
        m: usize,
        n: usize,
    },
    /// Elementary quad with lower-left vertex (m, n).
    Quad {
        m: usize,
        n: usize,
    },
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Location::Vertex { m, n } => write!(f, "vertex ({m},{n})"),
            Location::HorizontalEdge { m, n } => write!(f, "horizontal edge ({m},{n})"),
            Location::VerticalEdge { m, n } => write!(f, "vertical edge ({m},{n})"),
            Location::Quad { m, n } => write!(f, "quad ({m},{n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("not imaginary: real part {real:e} relative to norm")]
    NotImaginary { real: f64 },
    #[error("not a real-quaternion matrix (structure defect {defect:e})")]
    NotRealQuaternion { defect: f64 },
    #[error("degenerate quadrilateral")]
    DegenerateQuadrilateral,

    #[error("spectral degeneracy at gamma = {gamma}")]
    SpectralDegeneracy { gamma: f64 },
    #[error("degenerate edge: beta(1) vanishes (b = 0, v = 1)")]
    DegenerateEdge,
    #[error("non-positive edge scalar {value}")]
    NonPositiveScalar { value: f64 },
    #[error("non-solvable quad data (residuals {residuals:?})")]
    NonSolvableQuad { residuals: Vec<f64> },
    #[error("invalid spectral angle {gamma}")]
    InvalidSpectralAngle { gamma: f64 },
    #[error("sphere radius overflow (sin 2 gamma = {sin2:e})")]
    SphereRadiusOverflow { sin2: f64 },
    #[error("Euclidean evaluation impossible: beta(1) = 0")]
    EuclideanEvaluationImpossible,

    #[error("degenerate face")]
    DegenerateFace,
    #[error("planarity violation (defect {defect:e})")]
    NotPlanar { defect: f64 },
    #[error("not edge-parallel (angular defect {defect:e})")]
    NotEdgeParallel { defect: f64 },
    #[error("degenerate face area")]
    DegenerateFaceArea,
    #[error("degenerate dual edge")]
    DegenerateDualEdge,
    #[error("non-Koenigs data (relative mismatch {mismatch:e})")]
    NonKoenigs { mismatch: f64 },
    #[error("cross-ratio not scalar (imaginary part {imag:e})")]
    CrossRatioNotScalar { imag: f64 },

    #[error("inconsistent Gauss map (defect {defect:e})")]
    InconsistentGaussMap { defect: f64 },
    #[error("wrong trapezoid orientation")]
    WrongTrapezoidOrientation,
    #[error("not a CMC-1 quad in R^3 (H = {h})")]
    NotCmcOneQuad { h: f64 },
    #[error("not a CMC quad in S^3: {reason}")]
    NotCmcQuadS3 { reason: String },
    #[error("not on unit sphere (norm defect {defect:e})")]
    NotOnUnitSphere { defect: f64 },
    #[error("net is not integrable (shared data mismatch {mismatch:e})")]
    NotIntegrable { mismatch: f64 },

    #[error("mismatched provenance")]
    MismatchedProvenance,
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{source} at {location}")]
    Located { location: Location, source: Box<Error> },
}

impl Error {
    pub fn at(self, location: Location) -> Error {
        match self {
            // keep the innermost location
            located @ Error::Located { .. } => located,
            other => Error::Located {
                location,
                source: Box::new(other),
            },
        }
    }

    /// Location of the failure, if any.
    pub fn location(&self) -> Option<Location> {
        match self {
            Error::Located { location, .. } => Some(*location),
            _ => None,
        }
    }

    /// The error with any location wrapper removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Located { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
