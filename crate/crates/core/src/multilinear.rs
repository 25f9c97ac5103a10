//! Multilinear polynomials indexed by variable subsets, rank-one
//! symbolic-determinant instances, and the determinant expansion identities
//! connecting them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::scalar::{Rational, RationalFunction};
use crate::subset::Subset;

/// `sum_S c_S * prod_{i in S} x_i` on variables `x_1..x_n`; zero
/// coefficients are never stored, so equality is canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearPoly<K> {
    n: usize,
    coeffs: BTreeMap<Subset, K>,
}

impl<K: Field> MultilinearPoly<K> {
    pub fn zero(n: usize) -> Self {
        MultilinearPoly {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Subset, K)>) -> Result<Self> {
        let mut p = MultilinearPoly::zero(n);
        for (s, c) in terms {
            if s.max_element().is_some_and(|m| m > n) {
                return Err(Error::InvalidInput(format!(
                    "subset {s} out of range for {n} variables"
                )));
            }
            p.add_term(s, c);
        }
        Ok(p)
    }

    pub fn add_term(&mut self, s: Subset, c: K) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.remove(&s) {
            None => {
                self.coeffs.insert(s, c);
            }
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.coeffs.insert(s, sum);
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, s: &Subset) -> K {
        self.coeffs.get(s).cloned().unwrap_or_else(K::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Terms in lexicographic subset order.
    pub fn iter(&self) -> impl Iterator<Item = (&Subset, &K)> {
        self.coeffs.iter()
    }

    pub fn eval(&self, x: &[K]) -> K {
        assert_eq!(x.len(), self.n, "assignment length");
        let mut acc = K::zero();
        for (s, c) in &self.coeffs {
            let mut term = c.clone();
            for i in s.iter() {
                term = term * &x[i - 1];
            }
            acc = acc + term;
        }
        acc
    }

    /// Sets every variable outside `1..=keep` to 1 and re-collects terms.
    pub fn substitute_ones_above(&self, keep: usize) -> MultilinearPoly<K> {
        let mut out = MultilinearPoly::zero(keep);
        for (s, c) in &self.coeffs {
            let retained: Vec<usize> = s.iter().filter(|&e| e <= keep).collect();
            out.add_term(Subset::new(retained).expect("sorted distinct"), c.clone());
        }
        out
    }

    pub fn map<L: Field>(&self, mut f: impl FnMut(&K) -> L) -> MultilinearPoly<L> {
        let mut out = MultilinearPoly::zero(self.n);
        for (s, c) in &self.coeffs {
            out.add_term(s.clone(), f(c));
        }
        out
    }
}

impl MultilinearPoly<RationalFunction> {
    /// Entrywise limit at `eps = 0`; fails on the lexicographically first
    /// coefficient of negative valuation.
    pub fn limit_entrywise(&self) -> Result<MultilinearPoly<Rational>> {
        let mut out = MultilinearPoly::zero(self.n);
        for (s, c) in &self.coeffs {
            let lim = c.limit0().map_err(|_| Error::LimitUndefined {
                subset: Some(s.clone()),
            })?;
            out.add_term(s.clone(), lim);
        }
        Ok(out)
    }
}

impl<K: Field> fmt::Display for MultilinearPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if s.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*x{s}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct TermRepr<K> {
    pub subset: Subset,
    pub coeff: K,
}

impl<K: Field + Serialize> Serialize for MultilinearPoly<K> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr<K>> = self
            .coeffs
            .iter()
            .map(|(subset, coeff)| TermRepr {
                subset: subset.clone(),
                coeff: coeff.clone(),
            })
            .collect();
        terms.serialize(s)
    }
}

/// Rebuilds a polynomial from its serialized term list; `n` comes from the
/// surrounding document.
pub(crate) fn poly_from_terms<K: Field>(
    n: usize,
    terms: Vec<TermRepr<K>>,
) -> Result<MultilinearPoly<K>> {
    let mut seen = BTreeMap::new();
    for t in &terms {
        if t.coeff.is_zero() {
            return Err(Error::Parse(
                "multilinear term with zero coefficient".into(),
            ));
        }
        if seen.insert(t.subset.clone(), ()).is_some() {
            return Err(Error::Parse(format!(
                "duplicate subset {} in polynomial",
                t.subset
            )));
        }
    }
    MultilinearPoly::from_terms(n, terms.into_iter().map(|t| (t.subset, t.coeff)))
}

/// A symbolic determinant `det(A0 + sum_i u^i (v^i)^T x_i)` given by its
/// factored columns; every coefficient matrix has rank at most one by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneInstance<K> {
    n: usize,
    r: usize,
    a0: Option<Matrix<K>>,
    u: Matrix<K>,
    v: Matrix<K>,
}

impl<K: Field> RankOneInstance<K> {
    pub fn new(a0: Option<Matrix<K>>, u: Matrix<K>, v: Matrix<K>) -> Result<Self> {
        let r = u.rows();
        let n = u.cols();
        if v.rows() != r || v.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "factor shapes differ: {}x{} vs {}x{}",
                r,
                n,
                v.rows(),
                v.cols()
            )));
        }
        if let Some(a0) = &a0 {
            if a0.rows() != r || a0.cols() != r {
                return Err(Error::DimensionMismatch(format!(
                    "constant part must be {r}x{r}, found {}x{}",
                    a0.rows(),
                    a0.cols()
                )));
            }
        }
        Ok(RankOneInstance { n, r, a0, u, v })
    }

    /// Builds the factored form from explicit coefficient matrices,
    /// rejecting any of rank two or more.
    pub fn from_coefficient_matrices(
        a0: Option<Matrix<K>>,
        coefficients: &[Matrix<K>],
    ) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidInput(
                "need at least one coefficient matrix".into(),
            ));
        }
        let r = coefficients[0].rows();
        let mut u_cols = Vec::new();
        let mut v_cols = Vec::new();
        for a in coefficients {
            if a.rows() != r || a.cols() != r {
                return Err(Error::DimensionMismatch(
                    "coefficient matrices must share a square shape".into(),
                ));
            }
            let (ui, vi) = a.factor_rank_one()?;
            u_cols.push(ui);
            v_cols.push(vi);
        }
        let n = coefficients.len();
        let u = Matrix::from_fn(r, n, |i, j| u_cols[j][i].clone());
        let v = Matrix::from_fn(r, n, |i, j| v_cols[j][i].clone());
        RankOneInstance::new(a0, u, v)
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.r
    }

    pub fn constant_part(&self) -> Option<&Matrix<K>> {
        self.a0.as_ref()
    }

    pub fn left_factor(&self) -> &Matrix<K> {
        &self.u
    }

    pub fn right_factor(&self) -> &Matrix<K> {
        &self.v
    }

    /// True when the constant part is absent or the zero matrix.
    pub fn is_homogeneous(&self) -> bool {
        self.a0.as_ref().is_none_or(Matrix::is_zero)
    }

    /// The i-th (1-based) coefficient matrix `u^i (v^i)^T`.
    pub fn coefficient_matrix(&self, i: usize) -> Matrix<K> {
        let u: Vec<K> = self.u.column(i - 1).cloned().collect();
        let v: Vec<K> = self.v.column(i - 1).cloned().collect();
        Matrix::outer(&u, &v)
    }

    /// Evaluates `A0 + U diag(x) V^T` at the given assignment.
    pub fn assemble(&self, x: &[K]) -> Matrix<K> {
        assert_eq!(x.len(), self.n, "assignment length");
        Matrix::from_fn(self.r, self.r, |p, q| {
            let mut acc = match &self.a0 {
                Some(a0) => a0.at(p, q).clone(),
                None => K::zero(),
            };
            for (i, xi) in x.iter().enumerate() {
                if xi.is_zero() || self.u.at(p, i).is_zero() || self.v.at(q, i).is_zero() {
                    continue;
                }
                acc = acc + self.u.at(p, i).clone() * xi * self.v.at(q, i);
            }
            acc
        })
    }

    /// Determinant of the assembled matrix at an assignment.
    pub fn eval_det(&self, x: &[K]) -> Result<K> {
        self.assemble(x).det()
    }

    /// Expands `det(U diag(x) V^T)` by the product formula over column
    /// subsets: the coefficient of `X_S` is `det(U_S) * det(V_S)`. Requires
    /// the constant part to be absent or zero.
    pub fn expand_cauchy_binet(&self) -> Result<MultilinearPoly<K>> {
        if !self.is_homogeneous() {
            return Err(Error::InvalidInput(
                "product expansion needs a zero constant part".into(),
            ));
        }
        let ut = self.u.minor_table(self.r)?;
        let vt = self.v.minor_table(self.r)?;
        let mut out = MultilinearPoly::zero(self.n);
        for (s, du) in ut.iter() {
            if du.is_zero() {
                continue;
            }
            let dv = vt.get(s).expect("same subsets");
            if dv.is_zero() {
                continue;
            }
            out.add_term(s.clone(), du.clone() * dv);
        }
        Ok(out)
    }

    /// Full multilinear coefficient table of `det(A0 + sum A_i x_i)`,
    /// obtained from the `2^n` evaluations at 0/1 assignments by subset
    /// Moebius inversion. Exact, and independent of the product expansion.
    pub fn extract_coefficients(&self) -> Result<MultilinearPoly<K>> {
        crate::ensure_enumerable(self.n)?;
        let size = 1usize << self.n;
        let mut table: Vec<K> = Vec::with_capacity(size);
        for mask in 0..size {
            let x: Vec<K> = (0..self.n)
                .map(|i| {
                    if mask & (1 << i) != 0 {
                        K::one()
                    } else {
                        K::zero()
                    }
                })
                .collect();
            table.push(self.eval_det(&x)?);
        }
        // superset-difference transform turns evaluations into coefficients
        for bit in 0..self.n {
            let b = 1usize << bit;
            for mask in 0..size {
                if mask & b != 0 {
                    table[mask] = table[mask].clone() - &table[mask ^ b];
                }
            }
        }
        let mut out = MultilinearPoly::zero(self.n);
        for (mask, c) in table.into_iter().enumerate() {
            if !c.is_zero() {
                out.add_term(Subset::from_mask(mask as u64), c);
            }
        }
        Ok(out)
    }
}

impl RankOneInstance<RationalFunction> {
    pub fn from_base(inst: &RankOneInstance<Rational>) -> Self {
        RankOneInstance {
            n: inst.n,
            r: inst.r,
            a0: inst.a0.as_ref().map(Matrix::from_base),
            u: Matrix::from_base(&inst.u),
            v: Matrix::from_base(&inst.v),
        }
    }

    /// `Some` when no entry mentions `eps`.
    pub fn to_base(&self) -> Option<RankOneInstance<Rational>> {
        let a0 = match &self.a0 {
            None => None,
            Some(m) => Some(m.to_base()?),
        };
        Some(RankOneInstance {
            n: self.n,
            r: self.r,
            a0,
            u: self.u.to_base()?,
            v: self.v.to_base()?,
        })
    }
}

/// The alternating relation between maximal minors of the column families
/// `a_0..a_n` and `(a_i, b_2..b_n)`:
/// `sum_i (-1)^i det(a_0..^a_i..a_n) * det(a_i, b_2..b_n)`.
/// The sum is identically zero; the signs are essential (already for a
/// single `b`-free column pair the unsigned sum is `2 det(a_1) det(a_0)`).
pub fn grassmann_plucker_sum<K: Field>(a: &[Vec<K>], b: &[Vec<K>]) -> Result<K> {
    if a.is_empty() {
        return Err(Error::InvalidInput("need at least two a-vectors".into()));
    }
    let n = a[0].len();
    if a.len() != n + 1 || b.len() + 1 != n {
        return Err(Error::DimensionMismatch(format!(
            "need n+1 a-vectors and n-1 b-vectors of length n; got {} and {} for n = {n}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b.iter()).any(|v| v.len() != n) {
        return Err(Error::DimensionMismatch("vector lengths differ".into()));
    }
    let mut acc = K::zero();
    for i in 0..=n {
        let left_cols: Vec<&Vec<K>> = a
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, v)| v)
            .collect();
        let left = Matrix::from_fn(n, n, |p, q| left_cols[q][p].clone());
        let right = Matrix::from_fn(n, n, |p, q| {
            if q == 0 {
                a[i][p].clone()
            } else {
                b[q - 1][p].clone()
            }
        });
        let term = left.det()? * &right.det()?;
        if i % 2 == 0 {
            acc = acc + term;
        } else {
            acc = acc - term;
        }
    }
    Ok(acc)
}
