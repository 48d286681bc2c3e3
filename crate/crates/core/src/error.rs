use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not irreducible over Q: {0}")]
    NotIrreducible(String),
    #[error("polynomial has {real} real roots out of {degree}; field is not totally real")]
    NotTotallyReal { real: usize, degree: usize },
    #[error("element is zero")]
    ZeroElement,
    #[error("residue symbols at dyadic primes are not computed locally")]
    DyadicPrime,
    #[error("element is not a unit at the prime")]
    NonUnit,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("not an order: {0}")]
    NotAnOrder(String),
    #[error("trace-zero lattice has no visible free O_K-basis")]
    NoFreeBasis,
    #[error("{count} dyadic Hilbert symbols undetermined; product formula cannot resolve them")]
    DyadicAmbiguity { count: usize },
    #[error("ramification underdetermined above {primes:?}")]
    Underdetermined { primes: Vec<u64> },
    #[error("determinant identity failed: {lhs} != {rhs}")]
    MismatchDetected { lhs: String, rhs: String },
    #[error("not a CM quadratic extension of the base field: {0}")]
    NotQuadraticOverK(String),
    #[error("lattice is not even")]
    OddLattice,
    #[error("lattice is degenerate")]
    Degenerate,
    #[error("unknown ADE symbol {0:?}")]
    UnknownSymbol(String),
    #[error("enumeration cap exceeded: {size} > {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("subgroup is not isotropic")]
    NotIsotropic,
    #[error("expected signature (2, 7) and rank 9, got rank {rank} signature ({pos}, {neg})")]
    BadSignature { rank: usize, pos: usize, neg: usize },
    #[error("unsupported torsion group {0:?}")]
    UnsupportedGroup(String),
    #[error("integer too large to factor: {0}")]
    FactorizationTooHard(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
