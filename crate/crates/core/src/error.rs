use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants split into two families: input validation (bad Gram matrices,
/// malformed indices, unsupported signatures) and computation failures
/// (enumeration budget, poles, vanishing denominators). [`Error::is_validation`]
/// tells them apart; the CLI maps the two families to different exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Gram matrix is empty")]
    EmptyGram,
    #[error("Gram matrix is not square: row {row} has {len} entries, expected {rank}")]
    NotSquare { row: usize, len: usize, rank: usize },
    #[error("Gram matrix is not symmetric at ({i},{j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("Gram matrix has odd diagonal entry {value} at position {i}; the lattice must be even")]
    OddDiagonal { i: usize, value: i64 },
    #[error("Gram matrix is degenerate (determinant 0)")]
    Degenerate,
    #[error("malformed lattice description: {0}")]
    LatticeFormat(String),
    #[error("unknown or invalid built-in lattice: {0}")]
    Builtin(String),
    #[error("coordinates {coords:?} do not name an element of a group with elementary divisors {divisors:?}")]
    CoordinateOutOfRange { coords: Vec<u64>, divisors: Vec<u64> },
    #[error("index mismatch: n = {n} does not satisfy n + q(gamma) in Z (q(gamma) = {q})")]
    IndexMismatch { n: String, q: String },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("the index n must be nonzero here")]
    ZeroIndex,
    #[error("{0} is not a discriminant (must be a nonzero integer congruent to 0 or 1 mod 4)")]
    NotDiscriminant(String),
    #[error("unsupported signature ({b_plus},{b_minus}): {reason}")]
    UnsupportedSignature { b_plus: usize, b_minus: usize, reason: String },
    #[error("weight 3/2 (the signature (2,1) case) is only accepted in formal mode")]
    FormalModeRequired,
    #[error(
        "weight kappa = 2 needs the rational Witt-index assumption (maximal isotropic subspace of dimension 1); pass the acknowledgment flag"
    )]
    WittAssumptionRequired,
    #[error("Heegner index must have m < 0, got m = {0}")]
    NonNegativeHeegner(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("enumeration needs {needed} evaluations, over the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("pole: {0}")]
    Pole(String),
    #[error("vanishing denominator: {0}")]
    ZeroDenominator(String),
    #[error("expected a rational value but got an irrational residue: {0}")]
    NonRational(String),
    #[error(
        "C(beta,-m,0) vanishes for {0}; its derivative cannot be recovered from the logarithmic derivative, use a finite difference of the numeric coefficient instead"
    )]
    DerivativeUnavailable(String),
    #[error("discriminant group of order {order} exceeds the dense-matrix limit {limit}")]
    GroupTooLarge { order: u64, limit: u64 },
    #[error("series diverges: {0}")]
    Divergent(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    /// True for input-validation failures, false for computation failures.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::Pole(_)
                | Error::ZeroDenominator(_)
                | Error::NonRational(_)
                | Error::DerivativeUnavailable(_)
                | Error::GroupTooLarge { .. }
                | Error::Divergent(_)
                | Error::Inconsistent(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
