//! Closure of the size-k principal minor map on rank-k matrices: given a
//! matrix over the fraction field whose size-k principal minors all have
//! limits at `eps = 0`, produce a base-field matrix with exactly those
//! minors.

use crate::error::{Error, Result};
use crate::extract::extract_with_table;
use crate::field::Field;
use crate::matrix::{Matrix, MinorTable};
use crate::matroid::ValuatedLinearMatroid;
use crate::scalar::{Rational, RationalFunction, Valuation};
use crate::split::normalize_with_matroids;

/// A square matrix over the fraction field of rank at most `k`, validated at
/// construction.
#[derive(Debug, Clone)]
pub struct PrincipalMinorInstance {
    n: usize,
    k: usize,
    a: Matrix<RationalFunction>,
}

impl PrincipalMinorInstance {
    pub fn new(a: Matrix<RationalFunction>, k: usize) -> Result<Self> {
        if a.rows() != a.cols() {
            return Err(Error::NonSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        if k == 0 || k > a.rows() {
            return Err(Error::InvalidInput(format!(
                "principal minor size {k} out of range for a {0}x{0} matrix",
                a.rows()
            )));
        }
        let rank = a.rank();
        if rank > k {
            return Err(Error::RankMismatch {
                expected: k,
                found: rank,
            });
        }
        Ok(PrincipalMinorInstance { n: a.rows(), k, a })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn minor_order(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &Matrix<RationalFunction> {
        &self.a
    }
}

/// All size-`k` principal minors of a square matrix.
pub fn principal_minors<K: Field>(a: &Matrix<K>, k: usize) -> Result<MinorTable<K>> {
    a.principal_minor_table(k)
}

/// Exact rank factorization `A = U^T V` with both factors of full row rank
/// `k`. `U^T` collects the pivot columns of `A`; `V` is the reduced
/// row-echelon coordinate matrix. Consequently every principal minor splits
/// as `det(A_I) = det(U_I) det(V_I)`.
#[allow(clippy::needless_range_loop)]
pub fn rank_factorize<K: Field>(a: &Matrix<K>, k: usize) -> Result<(Matrix<K>, Matrix<K>)> {
    let rank = a.rank();
    if rank != k {
        return Err(Error::RankMismatch {
            expected: k,
            found: rank,
        });
    }
    let n = a.cols();
    // row-reduce to echelon form, recording pivot columns
    let mut work: Vec<Vec<K>> = (0..a.rows()).map(|i| a.row(i).cloned().collect()).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..work.len()).find(|&i| !work[i][col].is_zero()) else {
            continue;
        };
        work.swap(p, row);
        let inv = work[row][col].inv()?;
        for j in col..n {
            work[row][j] = work[row][j].clone() * &inv;
        }
        for i in 0..work.len() {
            if i == row || work[i][col].is_zero() {
                continue;
            }
            let factor = work[i][col].clone();
            for j in col..n {
                if work[row][j].is_zero() {
                    continue;
                }
                let delta = factor.clone() * &work[row][j];
                work[i][j] = work[i][j].clone() - &delta;
            }
        }
        pivots.push(col);
        row += 1;
        if row == k {
            break;
        }
    }
    debug_assert_eq!(pivots.len(), k);
    // A = C * R with C the pivot columns and R the echelon rows
    let u = Matrix::from_fn(k, n, |i, j| a.at(j, pivots[i]).clone()); // U = C^T
    let v = Matrix::from_fn(k, n, |i, j| work[i][j].clone());
    Ok((u, v))
}

/// Result of the closure map: the base-field matrix and the certified table
/// of minor limits it reproduces.
#[derive(Debug, Clone)]
pub struct PrincipalClosure {
    pub b: Matrix<Rational>,
    pub minor_limits: MinorTable<Rational>,
}

/// Builds a base-field matrix whose size-`k` principal minors equal the
/// limits of the input's. Rank below `k` makes every size-`k` minor zero, so
/// the zero matrix answers; otherwise the rank factors are rescaled jointly
/// and each factor's minor limits are extracted separately.
pub fn close_principal_minors(inst: &PrincipalMinorInstance) -> Result<PrincipalClosure> {
    let n = inst.size();
    let k = inst.minor_order();
    crate::ensure_enumerable(n)?;

    let minors = inst.matrix().principal_minor_table(k)?;
    let mut all_zero_limits = true;
    for (s, d) in minors.iter() {
        match d.valuation() {
            Valuation::Finite(v) if v < 0 => {
                return Err(Error::LimitUndefined {
                    subset: Some(s.clone()),
                });
            }
            Valuation::Finite(0) => all_zero_limits = false,
            _ => {}
        }
    }
    let minor_limits = minors.map(|d| d.limit0().expect("nonnegative valuation"));

    let b = if inst.matrix().rank() < k || all_zero_limits {
        Matrix::zeros(n, n)
    } else {
        let (u, v) = rank_factorize(inst.matrix(), k)?;
        let m1 = ValuatedLinearMatroid::from_matrix(&u)?;
        let m2 = ValuatedLinearMatroid::from_matrix(&v)?;
        let (pair, ut, vt) = normalize_with_matroids(&u, &m1, &v, &m2)?;
        let eu = extract_with_table(&pair.u_tilde, &ut)?;
        let ev = extract_with_table(&pair.v_tilde, &vt)?;
        eu.u_hat.transpose().matmul(&ev.u_hat)?
    };

    let achieved = b.principal_minor_table(k)?;
    if achieved != minor_limits {
        return Err(Error::CertificateFailure(
            "closure output does not reproduce the principal minor limits".into(),
        ));
    }
    Ok(PrincipalClosure { b, minor_limits })
}
