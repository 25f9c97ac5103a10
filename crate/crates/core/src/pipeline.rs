//! End-to-end debordering: converts a rank-one symbolic-determinant instance
//! over the fraction field into an exact instance over the base field
//! computing the limit polynomial, covering both the homogeneous case and
//! the general case via a block reduction that absorbs the constant part
//! into fresh variables.

use crate::error::{Error, Result};
use crate::extract::extract_with_table;
use crate::matrix::Matrix;
use crate::matroid::ValuatedLinearMatroid;
use crate::multilinear::{MultilinearPoly, RankOneInstance};
use crate::scalar::{Rational, RationalFunction, Valuation};
use crate::split::{normalize_with_matroids, SplitCertificate};

/// The debordered representation: base-field factors (and constant block in
/// the general case) computing exactly the certified limit polynomial.
#[derive(Debug, Clone)]
pub struct DeborderOutput {
    /// Constant block; present only for inputs with a nonzero constant part.
    pub b0: Option<Matrix<Rational>>,
    /// Left factor; the i-th columns of the two factors give the rank-at-
    /// most-one coefficient matrix of `x_i`.
    pub u_hat: Matrix<Rational>,
    /// Right factor.
    pub v_hat: Matrix<Rational>,
    /// Side length of the output matrices.
    pub dimension: usize,
    /// The limit polynomial the output provably computes.
    pub limit_poly: MultilinearPoly<Rational>,
    /// Weight-splitting certificate of the normalization step, absent on the
    /// degenerate (identically-zero) path.
    pub certificate: Option<SplitCertificate>,
}

impl DeborderOutput {
    pub fn to_instance(&self) -> RankOneInstance<Rational> {
        RankOneInstance::new(self.b0.clone(), self.u_hat.clone(), self.v_hat.clone())
            .expect("output shapes are consistent")
    }

    /// Rank of each coefficient matrix (0 or 1 per variable).
    pub fn factor_ranks(&self) -> Vec<usize> {
        (0..self.u_hat.cols())
            .map(|j| {
                let uz = self.u_hat.column(j).all(Rational::is_zero);
                let vz = self.v_hat.column(j).all(Rational::is_zero);
                usize::from(!(uz || vz))
            })
            .collect()
    }
}

/// Coefficient-wise limit of `det(A0 + sum A_i x_i)`: the full multilinear
/// table is computed over the fraction field and each entry is sent to its
/// limit. Fails naming the first subset whose coefficient has negative
/// valuation.
pub fn check_border_limit(
    inst: &RankOneInstance<RationalFunction>,
) -> Result<MultilinearPoly<Rational>> {
    inst.extract_coefficients()?.limit_entrywise()
}

/// Homogeneous case (no constant part): rescale the factor pair so all
/// minors acquire limits, extract both limits, and certify the result.
pub fn deborder_homogeneous(inst: &RankOneInstance<RationalFunction>) -> Result<DeborderOutput> {
    if !inst.is_homogeneous() {
        return Err(Error::InvalidInput(
            "homogeneous pipeline requires a zero constant part".into(),
        ));
    }
    let n = inst.num_vars();
    let r = inst.order();
    crate::ensure_enumerable(n)?;

    // more rows than variables: the assembled matrix has rank at most n < r,
    // so the determinant is identically zero
    if n < r {
        let out = DeborderOutput {
            b0: None,
            u_hat: Matrix::zeros(r, n),
            v_hat: Matrix::zeros(r, n),
            dimension: r,
            limit_poly: MultilinearPoly::zero(n),
            certificate: None,
        };
        certify(&out, "underdetermined homogeneous output")?;
        return Ok(out);
    }

    let u_table = inst.left_factor().minor_table_bulk(r)?;
    let v_table = inst.right_factor().minor_table_bulk(r)?;

    // limits exist iff every minor product has nonnegative valuation
    let mut limit_poly = MultilinearPoly::zero(n);
    for (s, du) in u_table.iter() {
        let dv = v_table.get(s).expect("same subsets");
        match du.valuation() + dv.valuation() {
            Valuation::Finite(v) if v < 0 => {
                return Err(Error::LimitUndefined {
                    subset: Some(s.clone()),
                });
            }
            Valuation::Finite(0) => {
                let c = (du.clone() * dv).limit0().expect("valuation zero");
                limit_poly.add_term(s.clone(), c);
            }
            _ => {}
        }
    }

    // identically-zero limit covers every degenerate route: a rank-deficient
    // factor, disjoint base families, or all products vanishing at eps = 0
    if limit_poly.is_zero() {
        let out = DeborderOutput {
            b0: None,
            u_hat: Matrix::zeros(r, n),
            v_hat: Matrix::zeros(r, n),
            dimension: r,
            limit_poly,
            certificate: None,
        };
        certify(&out, "degenerate homogeneous output")?;
        return Ok(out);
    }

    let m1 = ValuatedLinearMatroid::from_minor_table(u_table)?;
    let m2 = ValuatedLinearMatroid::from_minor_table(v_table)?;
    let (pair, ut_scaled, vt_scaled) =
        normalize_with_matroids(inst.left_factor(), &m1, inst.right_factor(), &m2)?;
    let eu = extract_with_table(&pair.u_tilde, &ut_scaled)?;
    let ev = extract_with_table(&pair.v_tilde, &vt_scaled)?;

    let out = DeborderOutput {
        b0: None,
        u_hat: eu.u_hat,
        v_hat: ev.u_hat,
        dimension: r,
        limit_poly,
        certificate: Some(pair.certificate),
    };
    certify(&out, "homogeneous output")?;
    Ok(out)
}

/// Absorbs the constant part into fresh variables: builds the
/// `(n+r) x (2n+r)` factored instance whose determinant restricts to the
/// original polynomial when the fresh variables are set to 1, via the block
/// matrices
/// `U' = [[0, I_n, V^T], [-U, 0, A0]]`, `V' = [[I_n, I_n, 0], [0, 0, I_r]]`.
pub fn build_constant_reduction(
    inst: &RankOneInstance<RationalFunction>,
) -> Result<RankOneInstance<RationalFunction>> {
    let n = inst.num_vars();
    let r = inst.order();
    let a0 = match inst.constant_part() {
        Some(a0) => a0.clone(),
        None => Matrix::zeros(r, r),
    };
    let u = inst.left_factor();
    let v = inst.right_factor();

    let zero = RationalFunction::zero();
    let one = RationalFunction::one();

    let u_prime = Matrix::from_fn(n + r, 2 * n + r, |i, j| {
        if i < n {
            // [ 0_{n,n} | I_n | V^T ]
            if j < n {
                zero.clone()
            } else if j < 2 * n {
                if j - n == i {
                    one.clone()
                } else {
                    zero.clone()
                }
            } else {
                v.at(j - 2 * n, i).clone()
            }
        } else {
            // [ -U | 0_{r,n} | A0 ]
            let row = i - n;
            if j < n {
                -u.at(row, j).clone()
            } else if j < 2 * n {
                zero.clone()
            } else {
                a0.at(row, j - 2 * n).clone()
            }
        }
    });

    let v_prime = Matrix::from_fn(n + r, 2 * n + r, |i, j| {
        if i < n {
            // [ I_n | I_n | 0_{n,r} ]
            if (j < n && j == i) || (n <= j && j < 2 * n && j - n == i) {
                one.clone()
            } else {
                zero.clone()
            }
        } else {
            // [ 0_{r,n} | 0_{r,n} | I_r ]
            if j >= 2 * n && j - 2 * n == i - n {
                one.clone()
            } else {
                zero.clone()
            }
        }
    });

    RankOneInstance::new(None, u_prime, v_prime)
}

/// Full debordering. Homogeneous inputs keep their size `r`; inputs with a
/// constant part are rebuilt at size `n + r` with the constant block
/// recovered as the sum of the coefficient matrices of the fresh variables.
pub fn deborder_general(inst: &RankOneInstance<RationalFunction>) -> Result<DeborderOutput> {
    let n = inst.num_vars();
    let r = inst.order();
    crate::ensure_enumerable(n)?;
    let limit_poly = check_border_limit(inst)?;

    if inst.is_homogeneous() {
        let stripped = RankOneInstance::new(
            None,
            inst.left_factor().clone(),
            inst.right_factor().clone(),
        )?;
        let out = deborder_homogeneous(&stripped)?;
        if out.limit_poly != limit_poly {
            return Err(Error::CertificateFailure(
                "coefficient-table limit disagrees with the minor-product limit".into(),
            ));
        }
        return Ok(out);
    }

    crate::ensure_enumerable(2 * n + r)?;
    let reduced = build_constant_reduction(inst)?;
    let expanded = deborder_homogeneous(&reduced)?;

    // keep the first n columns; the fresh-variable columns sum into the
    // constant block B0 = U_rest * V_rest^T
    let u_keep = expanded.u_hat.column_range(1, n);
    let v_keep = expanded.v_hat.column_range(1, n);
    let u_rest = expanded.u_hat.column_range(n + 1, 2 * n + r);
    let v_rest = expanded.v_hat.column_range(n + 1, 2 * n + r);
    let b0 = u_rest.matmul(&v_rest.transpose())?;

    let out = DeborderOutput {
        b0: Some(b0),
        u_hat: u_keep,
        v_hat: v_keep,
        dimension: n + r,
        limit_poly,
        certificate: expanded.certificate,
    };
    certify(&out, "general output")?;
    Ok(out)
}

/// Mandatory certification: the multilinear coefficient table of the output
/// instance (by 0/1 evaluations, an independent route) must equal the
/// certified limit polynomial exactly.
fn certify(out: &DeborderOutput, what: &str) -> Result<()> {
    let table = out.to_instance().extract_coefficients()?;
    if table != out.limit_poly {
        return Err(Error::CertificateFailure(format!(
            "{what} computes a different polynomial than the certified limit"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational_function as rf;
    use crate::subset::Subset;

    fn emat(rows: &[&[&str]]) -> Matrix<RationalFunction> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| rf(s).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn subset(v: &[usize]) -> Subset {
        Subset::new(v.to_vec()).unwrap()
    }

    fn homogeneous(
        u: Matrix<RationalFunction>,
        v: Matrix<RationalFunction>,
    ) -> RankOneInstance<RationalFunction> {
        RankOneInstance::new(None, u, v).unwrap()
    }

    #[test]
    fn border_limit_examples() {
        let inst = homogeneous(emat(&[&["1", "1/eps"]]), emat(&[&["1", "eps"]]));
        let p = check_border_limit(&inst).unwrap();
        assert_eq!(p.coeff(&subset(&[1])), Rational::one());
        assert_eq!(p.coeff(&subset(&[2])), Rational::one());
        assert_eq!(p.num_terms(), 2);

        let inst = homogeneous(emat(&[&["eps"]]), emat(&[&["1/eps^2"]]));
        assert_eq!(
            check_border_limit(&inst).unwrap_err(),
            Error::LimitUndefined {
                subset: Some(subset(&[1]))
            }
        );

        let c = Matrix::from_rows(vec![vec![rf("7").unwrap()]]).unwrap();
        let inst = RankOneInstance::new(Some(c), Matrix::zeros(1, 1), Matrix::zeros(1, 1)).unwrap();
        let p = check_border_limit(&inst).unwrap();
        assert_eq!(p.coeff(&Subset::empty()), Rational::from_int(7));
    }

    #[test]
    fn golden_homogeneous_instance() {
        // the entrywise limit of U fails (1/eps), yet the instance debords
        let inst = homogeneous(emat(&[&["1", "1/eps"]]), emat(&[&["1", "eps"]]));
        let out = deborder_homogeneous(&inst).unwrap();
        assert_eq!(out.dimension, 1);
        let expected = MultilinearPoly::from_terms(
            2,
            [
                (subset(&[1]), Rational::one()),
                (subset(&[2]), Rational::one()),
            ],
        )
        .unwrap();
        assert_eq!(out.limit_poly, expected);
        assert_eq!(out.factor_ranks(), vec![1, 1]);
        assert!(out.certificate.is_some());
    }

    #[test]
    fn exact_input_round_trips() {
        let inst = homogeneous(
            emat(&[&["1", "2", "0"], &["0", "1", "1"]]),
            emat(&[&["1", "0", "1"], &["1", "1", "0"]]),
        );
        let out = deborder_homogeneous(&inst).unwrap();
        assert_eq!(
            out.limit_poly,
            inst.expand_cauchy_binet()
                .unwrap()
                .limit_entrywise()
                .unwrap()
        );
    }

    #[test]
    fn more_rows_than_variables_is_identically_zero() {
        let inst = homogeneous(emat(&[&["1"], &["eps"]]), emat(&[&["1/eps"], &["2"]]));
        let out = deborder_general(&inst).unwrap();
        assert!(out.limit_poly.is_zero());
        assert!(out.u_hat.is_zero());
        assert_eq!(out.dimension, 2);
    }

    #[test]
    fn identically_zero_limit_yields_zero_output() {
        let inst = homogeneous(emat(&[&["eps", "eps"]]), emat(&[&["1", "1"]]));
        let out = deborder_homogeneous(&inst).unwrap();
        assert!(out.u_hat.is_zero() && out.v_hat.is_zero());
        assert!(out.limit_poly.is_zero());
        assert!(out.certificate.is_none());
    }

    #[test]
    fn constant_reduction_restricts_to_original() {
        // n = 1, r = 1, A0 = [a], U = [u], V = [v]
        let a0 = Matrix::from_rows(vec![vec![rf("3").unwrap()]]).unwrap();
        let inst = RankOneInstance::new(Some(a0), emat(&[&["2"]]), emat(&[&["5"]])).unwrap();
        let reduced = build_constant_reduction(&inst).unwrap();
        assert_eq!(reduced.num_vars(), 3);
        assert_eq!(reduced.order(), 2);
        // substituting 1 for the fresh variables must reproduce a + uv x1
        let poly = reduced
            .extract_coefficients()
            .unwrap()
            .substitute_ones_above(1);
        assert_eq!(poly.coeff(&Subset::empty()), rf("3").unwrap());
        assert_eq!(poly.coeff(&subset(&[1])), rf("10").unwrap());
    }

    #[test]
    fn constant_reduction_accepts_zero_constant() {
        let inst = homogeneous(emat(&[&["1", "eps"]]), emat(&[&["1", "1"]]));
        let reduced = build_constant_reduction(&inst).unwrap();
        let original = inst.extract_coefficients().unwrap();
        let restricted = reduced
            .extract_coefficients()
            .unwrap()
            .substitute_ones_above(inst.num_vars());
        assert_eq!(original, restricted);
    }

    #[test]
    fn general_case_exact_constant() {
        // A0 = [1], u = v = (1): computes 1 + x1
        let a0 = Matrix::from_rows(vec![vec![rf("1").unwrap()]]).unwrap();
        let inst = RankOneInstance::new(Some(a0), emat(&[&["1"]]), emat(&[&["1"]])).unwrap();
        let out = deborder_general(&inst).unwrap();
        assert_eq!(out.dimension, 2);
        assert_eq!(out.limit_poly.coeff(&Subset::empty()), Rational::one());
        assert_eq!(out.limit_poly.coeff(&subset(&[1])), Rational::one());
    }

    #[test]
    fn general_case_border_constant() {
        // A0 = [1], U = [1/eps], V = [eps]: limit is 1 + x1
        let a0 = Matrix::from_rows(vec![vec![rf("1").unwrap()]]).unwrap();
        let inst = RankOneInstance::new(Some(a0), emat(&[&["1/eps"]]), emat(&[&["eps"]])).unwrap();
        let out = deborder_general(&inst).unwrap();
        assert_eq!(out.dimension, 2);
        let expected = MultilinearPoly::from_terms(
            1,
            [
                (Subset::empty(), Rational::one()),
                (subset(&[1]), Rational::one()),
            ],
        )
        .unwrap();
        assert_eq!(out.limit_poly, expected);
    }

    #[test]
    fn general_case_rejects_undefined_limit() {
        let a0 = Matrix::from_rows(vec![vec![rf("1").unwrap()]]).unwrap();
        let inst = RankOneInstance::new(Some(a0), emat(&[&["1/eps"]]), emat(&[&["1"]])).unwrap();
        assert!(matches!(
            deborder_general(&inst),
            Err(Error::LimitUndefined { .. })
        ));
    }
}
