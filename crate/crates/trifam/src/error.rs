use crate::family::TriangleId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("degenerate triangle")]
    DegenerateTriangle,
    #[error("degenerate segment (endpoints coincide)")]
    DegenerateSegment,
    #[error("points {0}, {1}, {2} are collinear")]
    CollinearTriple(usize, usize, usize),
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("point set is not in convex position")]
    NotConvex,
    #[error("anchor not in general position (lies on a spanned line)")]
    AnchorNotGeneral,
    #[error("family is not intersecting: triangles {0} and {1} have disjoint interiors")]
    NotIntersecting(TriangleId, TriangleId),
    #[error("operation requires a near-regular host point set")]
    RequiresNearRegular,
    #[error("operation requires a convex-position host with a cyclic order")]
    RequiresConvexOrder,
    #[error("edges do not form a 2-path sharing exactly one vertex")]
    BadSeedEdges,
    #[error("family already lies inside the trivial family; no replacement step applies")]
    AlreadyTrivial,
    #[error("strip {strip} meets the family in {count} triangles; strip triangles are interior-disjoint")]
    StripOverlap { strip: usize, count: usize },
    #[error("retry budget exhausted while generating a general-position point set")]
    RetryBudget,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArg(String),
    #[error("oracle guard violated: {0}")]
    OracleGuard(String),
    #[error("proof invariant violated: {0}")]
    ProofViolation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit-code class for the CLI: 1 = claim violated by the input,
    /// 2 = usage/input error, 3 = internal hard error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotIntersecting(..) => 1,
            Error::ProofViolation(_) | Error::StripOverlap { .. } => 3,
            _ => 2,
        }
    }
}
