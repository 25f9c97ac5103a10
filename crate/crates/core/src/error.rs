use std::fmt;

use crate::subset::Subset;

/// Error type shared by every module of the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Division by, or inversion of, the zero element.
    DivisionByZero,
    /// A limit at `eps = 0` was requested for a value of negative valuation.
    /// Carries the offending column subset when the failure is tied to a
    /// minor or a monomial coefficient.
    LimitUndefined {
        subset: Option<Subset>,
    },
    /// Determinant or inverse of a non-square matrix.
    NonSquare {
        rows: usize,
        cols: usize,
    },
    /// Rank-one factorization requested for a matrix of rank two or more.
    RankTooHigh {
        rank: usize,
    },
    /// A full-row-rank matrix was required.
    RankDeficient {
        expected: usize,
        found: usize,
    },
    /// `rank_factorize` called with the wrong target rank.
    RankMismatch {
        expected: usize,
        found: usize,
    },
    /// Inverse of a singular square matrix.
    SingularMatrix,
    /// No exchange witness exists; impossible for matroids built from
    /// matrices, so this always signals corrupted data.
    NoWitness,
    /// Matroid with an empty base family where a base was required.
    EmptyBaseFamily,
    /// The two base families are disjoint: every minor product vanishes and
    /// the expanded determinant is identically zero.
    NoCommonBase,
    /// The minimum of `omega1 + omega2` over common bases is nonzero, so the
    /// pair cannot be rescaled to `mval = 0` while preserving minor products.
    NonzeroCommonMinimum {
        m_star: i64,
    },
    /// An internal consistency check failed. This is a bug, never bad input.
    CertificateFailure(String),
    DimensionMismatch(String),
    /// Ground set too large for exhaustive subset enumeration.
    TooLarge {
        n: usize,
        max: usize,
    },
    /// Malformed text or JSON input.
    Parse(String),
    /// Structurally valid input that violates an operation's contract.
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::LimitUndefined { subset: Some(s) } => {
                write!(f, "limit at eps=0 undefined for subset {s}")
            }
            Error::LimitUndefined { subset: None } => {
                write!(f, "limit at eps=0 undefined (negative valuation)")
            }
            Error::NonSquare { rows, cols } => {
                write!(f, "matrix is not square ({rows}x{cols})")
            }
            Error::RankTooHigh { rank } => {
                write!(f, "matrix has rank {rank}, expected rank at most 1")
            }
            Error::RankDeficient { expected, found } => {
                write!(
                    f,
                    "matrix has rank {found}, full row rank {expected} required"
                )
            }
            Error::RankMismatch { expected, found } => {
                write!(f, "matrix has rank {found}, expected exactly {expected}")
            }
            Error::SingularMatrix => write!(f, "matrix is singular"),
            Error::NoWitness => write!(f, "no exchange witness found"),
            Error::EmptyBaseFamily => write!(f, "matroid has no bases"),
            Error::NoCommonBase => write!(f, "base families have no common base"),
            Error::NonzeroCommonMinimum { m_star } => {
                write!(f, "common-base minimum is {m_star}, normalization needs 0")
            }
            Error::CertificateFailure(msg) => write!(f, "certificate failure: {msg}"),
            Error::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::TooLarge { n, max } => {
                write!(
                    f,
                    "ground set of size {n} exceeds the enumeration cap {max}"
                )
            }
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
