use thiserror::Error;

/// Errors produced by mesh construction, space setup and solvers.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("subdomain rectangles {a} and {b} overlap")]
    OverlappingLayout { a: usize, b: usize },
    #[error("layout does not tile the domain: uncovered area {deficit:.3e}")]
    GappedLayout { deficit: f64 },
    #[error("subdomain rectangle {index} is not contained in the domain")]
    RectOutsideDomain { index: usize },
    #[error("rectangles {a} and {b} share a partial side; decomposition must be geometrically conforming")]
    NonConformingLayout { a: usize, b: usize },
    #[error("subdomain resolutions must be at least 1 (subdomain {index})")]
    InvalidResolution { index: usize },
    #[error("refinement factor {0} unsupported, expected 2 or 3")]
    UnsupportedRefineFactor(usize),
    #[error("triangle {triangle} of subdomain {subdomain} has non-positive area {area:.3e}")]
    DegenerateTriangle {
        subdomain: usize,
        triangle: usize,
        area: f64,
    },
    #[error("mesh invariant violated: {0}")]
    MeshInvariant(String),
    #[error("unsupported polynomial degree {0}, expected 1, 2 or 3")]
    UnsupportedDegree(usize),
    #[error("point {0:?} outside the reference triangle")]
    PointOutsideReference([f64; 3]),
    #[error("interface chain has no segment")]
    EmptyChain,
    #[error("1D spaces live on mismatched segments: [{a0}, {a1}] vs [{b0}, {b1}]")]
    SegmentMismatch { a0: f64, a1: f64, b0: f64, b1: f64 },
    #[error("Robin parameter must be positive, got {0}")]
    NonPositiveAlpha(f64),
    #[error("sparse factorization failed: {0}")]
    Factorization(String),
    #[error("input polynomial is identically zero")]
    ZeroPolynomial,
    #[error("trace function must vanish at the interface endpoints")]
    NonZeroEndpoint,
    #[error("degree bound {0} out of range for this operation")]
    DegreeOutOfRange(usize),
    #[error("mesh format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
