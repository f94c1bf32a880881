use thiserror::Error;

/// Errors produced by the constructions and verifiers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse modulo {0}")]
    ZeroInverse(u64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("residues live in different rings (moduli {0} and {1})")]
    ModulusMismatch(u64, u64),
    #[error("matrix is not symplectic: determinant {det} mod {modulus}")]
    NotSymplectic { det: u64, modulus: u64 },
    #[error("vector is not normalized (norm {0})")]
    NotUnit(f64),
    #[error("operator does not have order {order}: deviation {deviation:e}")]
    NotOrderM { order: usize, deviation: f64 },
    #[error("matrix is not a Hermitian projector: deviation {0:e}")]
    NotProjector(f64),
    #[error("dimension {n} exceeds the configured cap {cap}")]
    DimensionTooLarge { n: usize, cap: usize },
    #[error("no stabilizing Clifford element found: {0}")]
    SearchFailed(String),
    #[error("eigenspace of rank {rank} where rank 1 was required")]
    DegenerateSpectrum { rank: usize },
    #[error("basis {basis} holds {count} invariant vectors, expected exactly one")]
    InvariantVectorNotUnique { basis: usize, count: usize },
    #[error("tolerance {0} outside (0, 1e-3)")]
    BadTolerance(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
