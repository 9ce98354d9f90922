use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no witness for zero system")]
    ZeroSystem,

    #[error("signal support [{first}, {last}] does not fit a grid of size {n}")]
    SupportTooLarge { first: i64, last: i64, n: usize },

    #[error("invalid grid size {0}: must be a power of two and at least 8")]
    InvalidGridSize(usize),

    #[error("point {re}+{im}i is not strictly inside the unit disk")]
    OutsideDisk { re: f64, im: f64 },

    #[error("Z-transform requires causal signal")]
    NonCausal,

    #[error("no convergence after grid size {n}; best estimate {best}")]
    NotConverged { best: f64, n: usize },

    #[error("zero polynomial has no roots")]
    ZeroPolynomial,

    #[error("denominator is identically zero")]
    ZeroDenominator,

    #[error("not causal at origin")]
    NotCausalAtOrigin,

    #[error("algebraic loop: 1 + P(0)C(0) = 0")]
    AlgebraicLoop,

    #[error("compensator must include a delay: C(0) = {0}")]
    MissingDelay(f64),

    #[error("blaschke factor at a = 0: use the monomial factor z^m instead")]
    BlaschkeAtOrigin,

    #[error("essential singularity at boundary angle {0}")]
    EssentialSingularity(f64),

    #[error("point too close to the unit circle for quadrature; max radius {max_radius}")]
    TooCloseToBoundary { max_radius: f64 },

    #[error("boundary zero: factorization ill-conditioned")]
    BoundaryZero,

    #[error("function is not causal-stable")]
    NotCausalStable,

    #[error("function is identically zero")]
    IdenticallyZero,

    #[error("support overflow: {0}")]
    SupportOverflow(String),

    #[error("nonunique approximant, AAK step ambiguous")]
    NonuniqueApproximant,

    #[error("matrix is not a contraction: operator norm {0}")]
    NotContraction(f64),

    #[error("coincident interpolation nodes")]
    CoincidentNodes,

    #[error("infeasible interpolation data")]
    Infeasible,

    #[error("degenerate: unique-solution branch failed")]
    DegenerateBranch,

    #[error("reduction requires simple interior zeros")]
    NonSimpleInnerZeros,

    #[error("outer factor not invertible on the circle")]
    OuterNotInvertible,

    #[error("division by inner factor failed: residual {0}")]
    InnerDivisionFailed(f64),

    #[error("tree depth {depth} exceeds the limit {max}")]
    DepthTooLarge { depth: usize, max: usize },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
