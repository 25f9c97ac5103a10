//! The linear matroid of a full-row-rank matrix over the fraction field,
//! valued by the order of vanishing of its maximal minors, with exchange
//! checking and minimum-weight base search.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, MinorTable};
use crate::scalar::{RationalFunction, Valuation};
use crate::subset::Subset;

/// Integer weights on the ground set, extended additively to subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn zeros(n: usize) -> Self {
        WeightVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `w(S) = sum_{e in S} w(e)` with 1-based elements.
    pub fn subset_weight(&self, s: &Subset) -> i64 {
        s.iter().map(|e| self.0[e - 1]).sum()
    }
}

/// Ground set `[n]`, base family `{B : det(U_B) != 0}`, and the valuation
/// `omega(B) = val(det(U_B))`, finite exactly on bases.
#[derive(Debug, Clone)]
pub struct ValuatedLinearMatroid {
    n: usize,
    r: usize,
    bases: Vec<Subset>,
    omega: BTreeMap<Subset, i64>,
    base_masks: HashSet<u64>,
    source: MinorTable<RationalFunction>,
}

impl ValuatedLinearMatroid {
    /// Requires `U` of full row rank; otherwise the base family would be
    /// empty and no valuation exists.
    pub fn from_matrix(u: &Matrix<RationalFunction>) -> Result<Self> {
        let table = u.minor_table_bulk(u.rows())?;
        Self::from_minor_table(table).map_err(|e| match e {
            Error::RankDeficient { expected, .. } => Error::RankDeficient {
                expected,
                found: u.rank(),
            },
            other => other,
        })
    }

    pub fn from_minor_table(table: MinorTable<RationalFunction>) -> Result<Self> {
        let r = table.order();
        let n = table.ground_set_size();
        let mut bases = Vec::new();
        let mut omega = BTreeMap::new();
        let mut base_masks = HashSet::new();
        for (s, d) in table.iter() {
            if let Valuation::Finite(v) = d.valuation() {
                bases.push(s.clone());
                base_masks.insert(s.mask());
                omega.insert(s.clone(), v);
            }
        }
        if bases.is_empty() {
            // all maximal minors vanish, so the row rank is below r
            return Err(Error::RankDeficient {
                expected: r,
                found: 0,
            });
        }
        Ok(ValuatedLinearMatroid {
            n,
            r,
            bases,
            omega,
            base_masks,
            source: table,
        })
    }

    pub fn ground_set_size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    /// Bases in lexicographic order.
    pub fn bases(&self) -> &[Subset] {
        &self.bases
    }

    pub fn is_base(&self, s: &Subset) -> bool {
        s.size() == self.r && self.base_masks.contains(&s.mask())
    }

    pub fn source(&self) -> &MinorTable<RationalFunction> {
        &self.source
    }

    /// `omega(B)` for bases, `+inf` elsewhere.
    pub fn omega(&self, s: &Subset) -> Valuation {
        match self.omega.get(s) {
            Some(v) => Valuation::Finite(*v),
            None => Valuation::Infinite,
        }
    }

    pub(crate) fn omega_finite(&self, s: &Subset) -> i64 {
        *self.omega.get(s).expect("subset is a base")
    }

    /// Finds `b in B2 \ B1` such that both `B1 - a + b` and `B2 - b + a` are
    /// bases and the exchange inequality
    /// `omega(B1) + omega(B2) >= omega(B1 - a + b) + omega(B2 - b + a)`
    /// holds. Scans candidates in increasing order; the first witness wins.
    pub fn exchange_witness(&self, b1: &Subset, b2: &Subset, a: usize) -> Result<usize> {
        if !self.is_base(b1) || !self.is_base(b2) {
            return Err(Error::InvalidInput(
                "exchange arguments must be bases".into(),
            ));
        }
        if !b1.contains(a) || b2.contains(a) {
            return Err(Error::InvalidInput(format!(
                "element {a} must lie in the first base only"
            )));
        }
        let lhs = self.omega_finite(b1) + self.omega_finite(b2);
        for b in b2.difference(b1) {
            let s1 = b1.exchange(a, b);
            let s2 = b2.exchange(b, a);
            if !self.is_base(&s1) || !self.is_base(&s2) {
                continue;
            }
            if lhs >= self.omega_finite(&s1) + self.omega_finite(&s2) {
                return Ok(b);
            }
        }
        Err(Error::NoWitness)
    }

    /// Minimizes `omega(B) + w(B)` over all bases by enumeration; ties break
    /// to the lexicographically smallest base.
    pub fn min_weight_base(&self, w: &WeightVector) -> Result<(Subset, i64)> {
        if w.len() != self.n {
            return Err(Error::DimensionMismatch("weight vector length".into()));
        }
        let mut best: Option<(&Subset, i64)> = None;
        for b in &self.bases {
            let value = self.omega_finite(b) + w.subset_weight(b);
            match best {
                Some((_, v)) if v <= value => {}
                _ => best = Some((b, value)),
            }
        }
        best.map(|(b, v)| (b.clone(), v))
            .ok_or(Error::EmptyBaseFamily)
    }

    /// Same minimum by steepest exchange descent from the lexicographically
    /// smallest base. Single-exchange local optimality is global for this
    /// valuation, so the value always agrees with enumeration.
    pub fn min_weight_base_greedy(&self, w: &WeightVector) -> Result<(Subset, i64)> {
        if w.len() != self.n {
            return Err(Error::DimensionMismatch("weight vector length".into()));
        }
        let mut current = self.bases.first().ok_or(Error::EmptyBaseFamily)?.clone();
        let mut value = self.omega_finite(&current) + w.subset_weight(&current);
        loop {
            let mut best_step: Option<(Subset, i64)> = None;
            for a in current.iter() {
                for b in 1..=self.n {
                    if current.contains(b) {
                        continue;
                    }
                    let candidate = current.exchange(a, b);
                    if !self.is_base(&candidate) {
                        continue;
                    }
                    let cv = self.omega_finite(&candidate) + w.subset_weight(&candidate);
                    if cv >= value {
                        continue;
                    }
                    match &best_step {
                        Some((bs, bv)) if (*bv, bs) <= (cv, &candidate) => {}
                        _ => best_step = Some((candidate, cv)),
                    }
                }
            }
            match best_step {
                None => return Ok((current, value)),
                Some((next, nv)) => {
                    current = next;
                    value = nv;
                }
            }
        }
    }

    /// One line per base, `"S omega(S)"`, in lexicographic order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for b in &self.bases {
            let _ = writeln!(out, "{} {}", b, self.omega_finite(b));
        }
        out
    }

    /// Exhaustively verifies the base-exchange property of the base family.
    pub fn check_base_exchange_property(&self) -> bool {
        for b1 in &self.bases {
            for b2 in &self.bases {
                for a in b1.difference(b2) {
                    let found = b2
                        .difference(b1)
                        .into_iter()
                        .any(|b| self.is_base(&b1.exchange(a, b)));
                    if !found {
                        return false;
                    }
                }
            }
        }
        true
    }
}
