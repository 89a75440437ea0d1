//! Error type shared by all modules.

use crate::group::GroupPoint;

/// Validation and computation failures.
///
/// Domain failures (invalid structures, degenerate inputs) are kept apart
/// from [`Error::RankError`], which signals a violated theorem hypothesis
/// rather than an invalid structure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Diagonal family parameter outside `[-1, 1]`.
    #[error("gamma = {0} out of range for the diagonal family (requires [-1, 1])")]
    GammaOutOfRange(f64),
    /// A matrix entry or vector component is NaN or infinite.
    #[error("non-finite input")]
    NonFinite,
    /// The field matrix does not commute with theta, so the field is not
    /// linear (its flow would not consist of automorphisms).
    #[error("field matrix does not commute with theta")]
    NotAdmissible,
    /// Distribution basis elements are linearly dependent.
    #[error("distribution basis is degenerate")]
    DegenerateBasis,
    /// The distribution equals the nilradical `{0} x R^2`, which makes the
    /// rank condition unsatisfiable.
    #[error("distribution equals nilradical")]
    NilradicalDistribution,
    /// The declared Gram matrix is not symmetric positive definite.
    #[error("gram matrix is not positive definite")]
    GramNotPositive,
    /// The Lie algebra rank condition fails for the pair (X, Delta).
    #[error("Lie algebra rank condition fails")]
    LarcFailure,
    /// The locus function vanished on every probe point, so the structure has
    /// an empty Riemannian part.
    #[error("locus function vanishes identically on the probe set")]
    EmptyComplement,
    /// The intersection of the distribution with the nilradical came out
    /// zero, which is impossible for a valid 2D distribution; flags
    /// inconsistent input.
    #[error("distribution meets the nilradical trivially; inconsistent input")]
    NilradicalLineMissing,
    /// The map is not a valid automorphism triple for this theta.
    #[error("not an automorphism of G(theta): {0}")]
    InvalidAutomorphism(&'static str),
    /// The linear field does not have rank two; the classification theorem
    /// does not apply.
    #[error("linear field is not rank two")]
    RankError,
    /// The requested canonical data does not assemble into a valid structure.
    #[error("canonical data is not a valid structure: {0}")]
    InvalidCanonical(&'static str),
    /// More locus crossings were found along a curve than `max_roots` allows,
    /// contradicting the expected discreteness.
    #[error("curve crosses the locus {found} times, more than max_roots = {max_roots}")]
    TooManyCrossings { found: usize, max_roots: usize },
    /// Neither sign choice conjugates the two flows within tolerance.
    #[error("map conjugates neither flow direction (residual +s: {plus:.3e}, -s: {minus:.3e})")]
    NotConjugating { plus: f64, minus: f64 },
    /// Two structures that were expected to live on the same group differ in
    /// their theta data.
    #[error("theta mismatch between structures")]
    ThetaMismatch,
    /// The isometry verification found a mismatch; carries the witness point.
    #[error("isometry check failed at ({}, [{}, {}])", witness.t, witness.v.x, witness.v.y)]
    IsometryFailure { witness: GroupPoint },
}

pub type Result<T> = std::result::Result<T, Error>;
