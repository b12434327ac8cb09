use thiserror::Error;

/// Errors produced by the geometric and combinatorial operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("two of the four points coincide within tolerance")]
    DegenerateQuadruple,
    #[error("two of the three points coincide within tolerance")]
    DegenerateTriple,
    #[error("matrix determinant is zero within tolerance")]
    DegenerateMatrix,
    #[error("operation is undefined for the identity transformation")]
    IdentityInput,
    #[error("transformation is not parabolic")]
    NotParabolic,
    #[error("anchor or image point does not lie on its circle")]
    PointsNotOnCircle,
    #[error("pairing maps the exterior onto the exterior")]
    OrientationMismatch,
    #[error("defining circles cross in two points")]
    CrossingCircles,
    #[error("defining circles are nested; all circles must be mutually exterior")]
    NestedCircles,
    #[error("point is not a tangency point of two marking circles")]
    NotATangency,
    #[error("tangency trace failed to close within {0} steps")]
    NonReturning(usize),
    #[error("marking does not satisfy the classical conditions")]
    NotClassicalMarking,
    #[error("unsupported output format: {0}")]
    UnsupportedFormat(String),
    #[error("word is empty")]
    EmptyWord,
    #[error("words have different ranks ({0} vs {1})")]
    RankMismatch(usize, usize),
    #[error("index must be at least 1")]
    InvalidIndex,
    #[error("alpha must be at least 1")]
    InvalidAlpha,
    #[error("intersection abscissas span more than one translation length")]
    SpanTooWide,
    #[error("wrapped case is undefined for a single intersection point")]
    DegenerateWrap,
    #[error("argument is outside the admissible range")]
    OutOfRange,
    #[error("the two cusps coincide")]
    CoincidentCusps,
    #[error("cusp gap is smaller than the configuration permits")]
    GapTooSmall,
    #[error("intersection matrix has no entries")]
    EmptyMatrix,
    #[error("genus must be at least 2")]
    InvalidGenus,
    #[error("invalid marking: {0}")]
    InvalidMarking(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
