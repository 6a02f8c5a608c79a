use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("leading coefficient vanishes")]
    DegreeError,
    #[error("non-finite value encountered")]
    NonFinite,
    #[error("projective point with all coordinates zero")]
    ZeroVector,
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(&'static str),
    #[error("pencil has a repeated root (conics are not transverse)")]
    DegeneratePencil,
    #[error("conic is degenerate (vanishing determinant)")]
    SingularConic,
    #[error("conic pair does not intersect transversely")]
    NotTransverse,
    #[error("polygon order {0} is below 3")]
    BadOrder(usize),
    #[error("det(D) vanishes: square-root series has a branch point at t = 0")]
    BranchPole,
    #[error("sampler rejected {0} consecutive candidates")]
    SamplingExhausted(usize),
    #[error("congruence transform is singular")]
    SingularTransform,
    #[error("diagonal entries are not pairwise distinct")]
    RepeatedLambda,
    #[error("j-value {re}{im:+}i is critical (0 or 1728)")]
    CriticalZ { re: f64, im: f64 },
    #[error("fiber elimination is ill-conditioned: {0}")]
    ResultantIllConditioned(&'static str),
    #[error("point lies on both conics; the two tangents coincide")]
    BranchCollapse,
    #[error("tangent quadratic is numerically degenerate")]
    NumericalTangency,
    #[error("point does not lie on the conic")]
    NotOnConic,
}

pub type Result<T> = core::result::Result<T, Error>;
