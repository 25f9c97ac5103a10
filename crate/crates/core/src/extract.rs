//! Limit extraction: from a matrix over the fraction field whose maximal
//! minors all have nonnegative valuation, build a base-field matrix whose
//! maximal minors are exactly the minor limits.

use crate::error::{Error, Result};
use crate::matrix::{Matrix, MinorTable};
use crate::scalar::{Rational, RationalFunction, Valuation};
use crate::subset::Subset;

#[derive(Debug, Clone)]
pub struct ExtractionResult {
    /// Base-field matrix with `det(U^_S) = lim det(U_S)` for every `S`.
    pub u_hat: Matrix<Rational>,
    /// The pivot subset of valuation zero, absent when all minor limits
    /// vanish (then `u_hat` is the zero matrix).
    pub pivot: Option<Subset>,
    /// Limit of the pivot minor; the first row of the entrywise-limit matrix
    /// is scaled by this factor.
    pub alpha: Rational,
}

/// Runs the extraction on a bare matrix; computes the minor table itself.
pub fn extract(u: &Matrix<RationalFunction>) -> Result<ExtractionResult> {
    let table = u.minor_table_bulk(u.rows())?;
    extract_with_table(u, &table)
}

/// Work-sharing variant for callers that already hold the minor table.
///
/// Steps: (1) if every minor has positive (or infinite) valuation, all
/// limits vanish and the zero matrix works; (2) otherwise pick the
/// lexicographically smallest pivot `S*` with valuation exactly 0, form
/// `U' = (U_{S*})^{-1} U`, whose entries all have limits because each one
/// equals `+/- det(U'_T)` for an exchange subset `T`; take entrywise limits
/// and scale the first row by `alpha = lim det(U_{S*})`.
pub fn extract_with_table(
    u: &Matrix<RationalFunction>,
    table: &MinorTable<RationalFunction>,
) -> Result<ExtractionResult> {
    let r = u.rows();
    let mut pivot: Option<&Subset> = None;
    for (s, d) in table.iter() {
        match d.valuation() {
            Valuation::Finite(v) if v < 0 => {
                return Err(Error::LimitUndefined {
                    subset: Some(s.clone()),
                });
            }
            Valuation::Finite(0) if pivot.is_none() => pivot = Some(s),
            _ => {}
        }
    }
    let Some(pivot) = pivot else {
        return Ok(ExtractionResult {
            u_hat: Matrix::zeros(r, u.cols()),
            pivot: None,
            alpha: Rational::zero(),
        });
    };

    let pivot_block = u.columns_subset(pivot);
    let alpha = table
        .get(pivot)
        .expect("pivot is a table key")
        .limit0()
        .expect("pivot valuation is zero");
    let u_prime = pivot_block.inverse()?.matmul(u)?;

    let mut u_hat = Matrix::zeros(r, u.cols());
    for i in 0..r {
        for j in 0..u.cols() {
            let lim = u_prime.at(i, j).limit0().map_err(|_| {
                Error::CertificateFailure(format!(
                    "entry ({i},{j}) of the pivot-reduced matrix has no limit"
                ))
            })?;
            u_hat.set(i, j, lim);
        }
    }
    let alpha_row = alpha.clone();
    u_hat.scale_row(0, &alpha_row);
    Ok(ExtractionResult {
        u_hat,
        pivot: Some(pivot.clone()),
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational_function as rf;

    fn emat(rows: &[&[&str]]) -> Matrix<RationalFunction> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| rf(s).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn assert_minor_limits_match(u: &Matrix<RationalFunction>, u_hat: &Matrix<Rational>) {
        let orig = u.minor_table_bulk(u.rows()).unwrap();
        let hat = u_hat.minor_table(u_hat.rows()).unwrap();
        for (s, d) in orig.iter() {
            assert_eq!(
                hat.get(s).unwrap(),
                &d.limit0().unwrap(),
                "minor mismatch at {s}"
            );
        }
    }

    #[test]
    fn rational_matrix_is_reproduced_up_to_minors() {
        let u = emat(&[&["1", "2", "0"], &["0", "1", "3"]]);
        let res = extract(&u).unwrap();
        assert_eq!(res.alpha, Rational::one());
        assert_minor_limits_match(&u, &res.u_hat);
    }

    #[test]
    fn two_by_two_with_eps_perturbation() {
        let u = emat(&[&["1", "1+eps"], &["eps", "1"]]);
        let res = extract(&u).unwrap();
        assert_eq!(res.u_hat.det().unwrap(), Rational::one());
        assert_minor_limits_match(&u, &res.u_hat);
        assert_eq!(res.alpha, Rational::one());
    }

    #[test]
    fn all_positive_valuations_give_zero_matrix() {
        let u = emat(&[&["eps", "eps^2"]]);
        let res = extract(&u).unwrap();
        assert!(res.u_hat.is_zero());
        assert!(res.pivot.is_none());
        assert_minor_limits_match(&u, &res.u_hat);
    }

    #[test]
    fn negative_valuation_is_rejected() {
        let u = emat(&[&["1/eps", "1"]]);
        let err = extract(&u).unwrap_err();
        assert_eq!(
            err,
            Error::LimitUndefined {
                subset: Some(Subset::new(vec![1]).unwrap())
            }
        );
    }

    #[test]
    fn pivot_is_lexicographically_smallest() {
        // minors: {1,2} has val 1, {1,3} val 0, {2,3} val 0
        let u = emat(&[&["1", "eps", "1"], &["0", "eps", "1+eps"]]);
        let res = extract(&u).unwrap();
        assert_eq!(res.pivot.unwrap().as_slice(), &[1, 3]);
        assert_minor_limits_match(&u, &res.u_hat);
    }
}
