//! Exact debordering of rank-one symbolic determinants.
//!
//! A polynomial presented as `det(A0 + sum_i A_i x_i)` with every `A_i` of
//! rank one over the fraction field in a degeneration parameter `eps` may
//! converge, coefficient by coefficient, to a limit polynomial as
//! `eps -> 0` even though the matrix entries themselves blow up. This crate
//! rebuilds such limits exactly: it computes an integral column reweighting
//! under which the two factor matrices can be rescaled so that every maximal
//! minor acquires a limit (a weight splitting for the pair of valuated
//! matroids attached to the factors), extracts base-field matrices matching
//! those minor limits, and certifies that the reconstructed representation
//! computes the limit polynomial, coefficient for coefficient, in exact
//! rational arithmetic.
//!
//! The same machinery closes the size-k principal minor map on rank-k
//! matrices via an exact rank factorization.
//!
//! Everything is immutable after construction and all operations are pure,
//! so values can be shared freely across threads.

pub mod error;
pub mod extract;
pub mod field;
pub mod generate;
pub mod io;
pub mod matrix;
pub mod matroid;
pub mod multilinear;
pub mod pipeline;
pub mod principal;
pub mod scalar;
pub mod split;
pub mod subset;

pub use error::{Error, Result};
pub use extract::{extract, ExtractionResult};
pub use field::Field;
pub use generate::{generate, GeneratedInstance, GeneratorSpec};
pub use io::{
    parse_instance_document, to_canonical_json, DeborderReport, InstanceFile, InstancePayload,
};
pub use matrix::{Matrix, MinorTable};
pub use matroid::{ValuatedLinearMatroid, WeightVector};
pub use multilinear::{grassmann_plucker_sum, MultilinearPoly, RankOneInstance};
pub use pipeline::{
    build_constant_reduction, check_border_limit, deborder_general, deborder_homogeneous,
    DeborderOutput,
};
pub use principal::{
    close_principal_minors, principal_minors, rank_factorize, PrincipalClosure,
    PrincipalMinorInstance,
};
pub use scalar::{parse_rational_function, EpsPolynomial, Rational, RationalFunction, Valuation};
pub use split::{
    common_base_minimum, mval, normalize_pair, solve_split, verify_certificate, NormalizedPair,
    SplitCertificate,
};
pub use subset::Subset;

/// Hard cap on ground-set sizes for the operations that enumerate subsets
/// eagerly (minor tables, coefficient extraction, base families).
pub const DEFAULT_MAX_N: usize = 16;

pub(crate) fn ensure_enumerable(n: usize) -> Result<()> {
    if n > DEFAULT_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: DEFAULT_MAX_N,
        });
    }
    Ok(())
}
