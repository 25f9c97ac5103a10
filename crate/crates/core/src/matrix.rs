//! Dense matrices over an exact field: elimination-based determinant, rank
//! and inverse, maximal-minor tables, and rank-one factorization.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::scalar::{EpsPolynomial, RationalFunction, Valuation};
use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Field> Matrix<K> {
    pub fn from_rows(rows: Vec<Vec<K>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::DimensionMismatch(
                "matrix needs at least one row".into(),
            ));
        }
        let c = rows[0].len();
        if c == 0 {
            return Err(Error::DimensionMismatch(
                "matrix needs at least one column".into(),
            ));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("rows have unequal lengths".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| K::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { K::one() } else { K::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &K {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = &K> {
        (0..self.cols).map(move |j| self.at(i, j))
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = &K> {
        (0..self.rows).map(move |i| self.at(i, j))
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn map<L>(&self, f: impl FnMut(&K) -> L) -> Matrix<L> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Submatrix with 0-based row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.at(rows[i], cols[j]).clone()
        })
    }

    /// Column submatrix selected by a 1-based subset.
    pub fn columns_subset(&self, s: &Subset) -> Self {
        let cols: Vec<usize> = s.iter().map(|e| e - 1).collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, &cols)
    }

    /// Principal submatrix (same 1-based subset for rows and columns).
    pub fn principal_submatrix(&self, s: &Subset) -> Self {
        let idx: Vec<usize> = s.iter().map(|e| e - 1).collect();
        self.submatrix(&idx, &idx)
    }

    /// Columns in the 1-based inclusive range `lo..=hi`.
    pub fn column_range(&self, lo: usize, hi: usize) -> Self {
        let cols: Vec<usize> = (lo - 1..hi).collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn matmul(&self, rhs: &Matrix<K>) -> Result<Matrix<K>> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = K::zero();
            for k in 0..self.cols {
                if self.at(i, k).is_zero() || rhs.at(k, j).is_zero() {
                    continue;
                }
                acc = acc + self.at(i, k).clone() * rhs.at(k, j);
            }
            acc
        }))
    }

    pub fn add(&self, rhs: &Matrix<K>) -> Result<Matrix<K>> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch("matrix addition shape".into()));
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.at(i, j).clone() + rhs.at(i, j)
        }))
    }

    pub fn scale_row(&mut self, i: usize, c: &K) {
        for j in 0..self.cols {
            let v = self.at(i, j).clone() * c;
            self.set(i, j, v);
        }
    }

    pub fn scale_column(&mut self, j: usize, c: &K) {
        for i in 0..self.rows {
            let v = self.at(i, j).clone() * c;
            self.set(i, j, v);
        }
    }

    /// `row_i += c * row_j` (an elementary, determinant-preserving step).
    pub fn add_scaled_row(&mut self, i: usize, j: usize, c: &K) {
        for col in 0..self.cols {
            let v = self.at(i, col).clone() + self.at(j, col).clone() * c;
            self.set(i, col, v);
        }
    }

    /// Outer product `u * v^T` of two length-matched vectors.
    pub fn outer(u: &[K], v: &[K]) -> Matrix<K> {
        Matrix::from_fn(u.len(), v.len(), |i, j| u[i].clone() * &v[j])
    }

    /// Exact determinant by fraction-field Gaussian elimination, pivoting on
    /// the first nonzero entry of each column.
    // index loops: the eliminations read row k while writing row i
    #[allow(clippy::needless_range_loop)]
    pub fn det(&self) -> Result<K> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut work: Vec<Vec<K>> = (0..n).map(|i| self.row(i).cloned().collect()).collect();
        let mut negate = false;
        let mut det = K::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !work[i][k].is_zero()) else {
                return Ok(K::zero());
            };
            if p != k {
                work.swap(p, k);
                negate = !negate;
            }
            let pivot = work[k][k].clone();
            det = det * &pivot;
            let pivot_inv = pivot.inv()?;
            for i in k + 1..n {
                if work[i][k].is_zero() {
                    continue;
                }
                let factor = work[i][k].clone() * &pivot_inv;
                for j in k + 1..n {
                    if work[k][j].is_zero() {
                        continue;
                    }
                    let delta = factor.clone() * &work[k][j];
                    work[i][j] = work[i][j].clone() - &delta;
                }
                work[i][k] = K::zero();
            }
        }
        Ok(if negate { -det } else { det })
    }

    /// Rank over the field, by elimination.
    #[allow(clippy::needless_range_loop)]
    pub fn rank(&self) -> usize {
        let mut work: Vec<Vec<K>> = (0..self.rows)
            .map(|i| self.row(i).cloned().collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&i| !work[i][col].is_zero()) else {
                continue;
            };
            work.swap(p, rank);
            let pivot_inv = work[rank][col].inv().expect("pivot is nonzero");
            for i in rank + 1..self.rows {
                if work[i][col].is_zero() {
                    continue;
                }
                let factor = work[i][col].clone() * &pivot_inv;
                for j in col..self.cols {
                    if work[rank][j].is_zero() {
                        continue;
                    }
                    let delta = factor.clone() * &work[rank][j];
                    work[i][j] = work[i][j].clone() - &delta;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Inverse by Gauss-Jordan elimination.
    #[allow(clippy::needless_range_loop)]
    pub fn inverse(&self) -> Result<Matrix<K>> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut work: Vec<Vec<K>> = (0..n)
            .map(|i| {
                let mut row: Vec<K> = self.row(i).cloned().collect();
                row.extend((0..n).map(|j| if i == j { K::one() } else { K::zero() }));
                row
            })
            .collect();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !work[i][k].is_zero()) else {
                return Err(Error::SingularMatrix);
            };
            work.swap(p, k);
            let pivot_inv = work[k][k].inv()?;
            for j in k..2 * n {
                work[k][j] = work[k][j].clone() * &pivot_inv;
            }
            for i in 0..n {
                if i == k || work[i][k].is_zero() {
                    continue;
                }
                let factor = work[i][k].clone();
                for j in k..2 * n {
                    if work[k][j].is_zero() {
                        continue;
                    }
                    let delta = factor.clone() * &work[k][j];
                    work[i][j] = work[i][j].clone() - &delta;
                }
            }
        }
        Ok(Matrix::from_fn(n, n, |i, j| work[i][n + j].clone()))
    }

    /// All `C(n, r)` maximal minors over column subsets, computed one
    /// determinant per subset.
    pub fn minor_table(&self, r: usize) -> Result<MinorTable<K>> {
        self.check_minor_shape(r)?;
        let mut values = BTreeMap::new();
        for s in Subset::enumerate(self.cols, r) {
            let d = self.columns_subset(&s).det()?;
            values.insert(s, d);
        }
        Ok(MinorTable {
            n: self.cols,
            r,
            values,
        })
    }

    /// All size-`k` principal minors of a square matrix.
    pub fn principal_minor_table(&self, k: usize) -> Result<MinorTable<K>> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if k > self.rows {
            return Err(Error::DimensionMismatch(format!(
                "principal minor size {k} exceeds matrix size {}",
                self.rows
            )));
        }
        crate::ensure_enumerable(self.cols)?;
        let mut values = BTreeMap::new();
        for s in Subset::enumerate(self.rows, k) {
            let d = self.principal_submatrix(&s).det()?;
            values.insert(s, d);
        }
        Ok(MinorTable {
            n: self.rows,
            r: k,
            values,
        })
    }

    /// Writes a rank-at-most-one matrix as an outer product `u * v^T`; the
    /// zero matrix factors as zero vectors.
    pub fn factor_rank_one(&self) -> Result<(Vec<K>, Vec<K>)> {
        let rank = self.rank();
        if rank > 1 {
            return Err(Error::RankTooHigh { rank });
        }
        if rank == 0 {
            return Ok((vec![K::zero(); self.rows], vec![K::zero(); self.cols]));
        }
        let (pi, pj) = (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| !self.at(i, j).is_zero())
            .expect("rank-one matrix has a nonzero entry");
        let pivot_inv = self.at(pi, pj).inv()?;
        let v: Vec<K> = self.row(pi).cloned().collect();
        let u: Vec<K> = self.column(pj).map(|x| x.clone() * &pivot_inv).collect();
        Ok((u, v))
    }

    fn check_minor_shape(&self, r: usize) -> Result<()> {
        if self.rows != r {
            return Err(Error::DimensionMismatch(format!(
                "minor table of order {r} over a matrix with {} rows",
                self.rows
            )));
        }
        if self.cols < r {
            return Err(Error::DimensionMismatch(format!(
                "need at least {r} columns, found {}",
                self.cols
            )));
        }
        crate::ensure_enumerable(self.cols)?;
        Ok(())
    }
}

impl Matrix<RationalFunction> {
    /// Embeds a base-field matrix into the fraction field.
    pub fn from_base(m: &Matrix<crate::scalar::Rational>) -> Self {
        m.map(|c| RationalFunction::constant(c.clone()))
    }

    /// `Some` when every entry is a base-field constant.
    pub fn to_base(&self) -> Option<Matrix<crate::scalar::Rational>> {
        let mut out = Vec::with_capacity(self.data.len());
        for v in &self.data {
            out.push(v.as_constant()?);
        }
        Some(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: out,
        })
    }

    /// Maximal-minor table computed in bulk: denominators are cleared per
    /// column once, and each minor is a fraction-free (Bareiss) polynomial
    /// determinant divided by the known column factors. Same values as
    /// [`Matrix::minor_table`], much less gcd work.
    pub fn minor_table_bulk(&self, r: usize) -> Result<MinorTable<RationalFunction>> {
        self.check_minor_shape(r)?;
        let n = self.cols;
        // per-column denominator lcm and cleared polynomial entries
        let mut col_den: Vec<EpsPolynomial> = Vec::with_capacity(n);
        let mut cleared: Vec<Vec<EpsPolynomial>> = vec![Vec::with_capacity(n); r];
        for j in 0..n {
            let mut d = EpsPolynomial::one();
            for v in self.column(j) {
                d = EpsPolynomial::lcm(&d, v.den());
            }
            for (i, v) in self.column(j).enumerate() {
                let factor = d.div_exact(v.den()).expect("lcm is divisible");
                cleared[i].push(v.num() * &factor);
            }
            col_den.push(d);
        }
        let mut values = BTreeMap::new();
        for s in Subset::enumerate(n, r) {
            let idx: Vec<usize> = s.iter().map(|e| e - 1).collect();
            let grid: Vec<Vec<EpsPolynomial>> = (0..r)
                .map(|i| idx.iter().map(|&j| cleared[i][j].clone()).collect())
                .collect();
            let num = bareiss_det(grid);
            let den = idx
                .iter()
                .fold(EpsPolynomial::one(), |acc, &j| acc * &col_den[j]);
            values.insert(s, RationalFunction::new(num, den)?);
        }
        Ok(MinorTable { n, r, values })
    }
}

/// Fraction-free determinant of a polynomial matrix. Every intermediate
/// entry is a minor of the input, so the divisions are exact.
fn bareiss_det(mut grid: Vec<Vec<EpsPolynomial>>) -> EpsPolynomial {
    let m = grid.len();
    if m == 0 {
        return EpsPolynomial::one();
    }
    let mut negate = false;
    let mut prev = EpsPolynomial::one();
    for k in 0..m - 1 {
        if grid[k][k].is_zero() {
            let Some(p) = (k + 1..m).find(|&i| !grid[i][k].is_zero()) else {
                return EpsPolynomial::zero();
            };
            grid.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..m {
            for j in k + 1..m {
                let t = &grid[i][j] * &grid[k][k] - &grid[i][k] * &grid[k][j];
                grid[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            grid[i][k] = EpsPolynomial::zero();
        }
        prev = grid[k][k].clone();
    }
    let det = grid[m - 1][m - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

impl<K: Field> fmt::Display for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr<K> {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<K>>,
}

impl<K: Field + Serialize> Serialize for Matrix<K> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<Vec<K>> = (0..self.rows)
            .map(|i| self.row(i).cloned().collect())
            .collect();
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
        .serialize(s)
    }
}

impl<'de, K: Field + Deserialize<'de>> Deserialize<'de> for Matrix<K> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let repr = MatrixRepr::<K>::deserialize(d)?;
        if repr.entries.len() != repr.rows {
            return Err(D::Error::custom("row count does not match entries"));
        }
        if repr.entries.iter().any(|row| row.len() != repr.cols) {
            return Err(D::Error::custom("column count does not match entries"));
        }
        Matrix::from_rows(repr.entries).map_err(D::Error::custom)
    }
}

/// The table of all maximal (or principal) minors of fixed order `r` on a
/// ground set of `n` columns. Every size-`r` subset is present as a key,
/// zeros included.
#[derive(Debug, Clone, PartialEq)]
pub struct MinorTable<K> {
    n: usize,
    r: usize,
    values: BTreeMap<Subset, K>,
}

impl<K: Field> MinorTable<K> {
    pub fn ground_set_size(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.r
    }

    pub fn get(&self, s: &Subset) -> Option<&K> {
        self.values.get(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Subset, &K)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map<L: Field>(&self, mut f: impl FnMut(&K) -> L) -> MinorTable<L> {
        self.map_with_subset(|_, v| f(v))
    }

    pub fn map_with_subset<L: Field>(&self, mut f: impl FnMut(&Subset, &K) -> L) -> MinorTable<L> {
        MinorTable {
            n: self.n,
            r: self.r,
            values: self
                .values
                .iter()
                .map(|(s, v)| (s.clone(), f(s, v)))
                .collect(),
        }
    }
}

impl MinorTable<RationalFunction> {
    /// Valuation of the minor at `s` (`+inf` off the table or at zeros).
    pub fn valuation(&self, s: &Subset) -> Valuation {
        self.values
            .get(s)
            .map_or(Valuation::Infinite, RationalFunction::valuation)
    }

    /// Minimum valuation over all minors; `Infinite` iff all minors vanish.
    pub fn min_valuation(&self) -> Valuation {
        self.values
            .values()
            .map(RationalFunction::valuation)
            .min()
            .unwrap_or(Valuation::Infinite)
    }
}

#[derive(Serialize, Deserialize)]
struct MinorEntry<K> {
    subset: Subset,
    value: K,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MinorTableRepr<K> {
    n: usize,
    r: usize,
    values: Vec<MinorEntry<K>>,
}

impl<K: Field + Serialize> Serialize for MinorTable<K> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let values = self
            .values
            .iter()
            .map(|(subset, value)| MinorEntry {
                subset: subset.clone(),
                value: value.clone(),
            })
            .collect();
        MinorTableRepr {
            n: self.n,
            r: self.r,
            values,
        }
        .serialize(s)
    }
}

impl<'de, K: Field + Deserialize<'de>> Deserialize<'de> for MinorTable<K> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let repr = MinorTableRepr::<K>::deserialize(d)?;
        let mut values = BTreeMap::new();
        for e in repr.values {
            if e.subset.size() != repr.r || e.subset.max_element().is_some_and(|m| m > repr.n) {
                return Err(D::Error::custom("minor table subset out of range"));
            }
            if values.insert(e.subset, e.value).is_some() {
                return Err(D::Error::custom("duplicate subset in minor table"));
            }
        }
        let expected = Subset::enumerate(repr.n, repr.r).len();
        if values.len() != expected {
            return Err(D::Error::custom("minor table must list every subset"));
        }
        Ok(MinorTable {
            n: repr.n,
            r: repr.r,
            values,
        })
    }
}
