//! Weight splitting for a pair of valuated matroids on the same ground set:
//! an integer column weighting `z` under which the minimum of
//! `omega1 + omega2` over common bases decomposes into two independent
//! per-matroid minima, and the rescaling of a matrix pair so that every
//! maximal minor of each factor has a limit at `eps = 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, MinorTable};
use crate::matroid::{ValuatedLinearMatroid, WeightVector};
use crate::scalar::{RationalFunction, Valuation};
use crate::subset::Subset;

/// A verified splitting: `f1 + f2 = m_star` where
/// `f1 = min_B (omega1 + z)(B)`, `f2 = min_B (omega2 - z)(B)`, and `m_star`
/// is the exhaustive minimum of `omega1 + omega2` over common bases, attained
/// by `witness_base` (which then attains both per-matroid minima).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitCertificate {
    pub z: WeightVector,
    pub m_star: i64,
    pub witness_base: Subset,
    pub f1: i64,
    pub f2: i64,
}

/// JSON form of a certificate: `{"z": [...], "m_star": ..., "witness": [...]}`.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct SplitCertificateJson {
    pub z: Vec<i64>,
    pub m_star: i64,
    pub witness: Subset,
}

impl SplitCertificate {
    pub fn to_json(&self) -> SplitCertificateJson {
        SplitCertificateJson {
            z: self.z.0.clone(),
            m_star: self.m_star,
            witness: self.witness_base.clone(),
        }
    }
}

/// A rescaled pair with `mval = 0` on both sides and every minor product
/// unchanged (identically, not just in the limit).
#[derive(Debug, Clone)]
pub struct NormalizedPair {
    pub u_tilde: Matrix<RationalFunction>,
    pub v_tilde: Matrix<RationalFunction>,
    pub certificate: SplitCertificate,
}

/// Minimum valuation over all maximal minors of a full-row-rank matrix.
pub fn mval(u: &Matrix<RationalFunction>) -> Result<Valuation> {
    let table = u.minor_table_bulk(u.rows())?;
    match table.min_valuation() {
        Valuation::Infinite => Err(Error::RankDeficient {
            expected: u.rows(),
            found: u.rank(),
        }),
        v => Ok(v),
    }
}

/// The common base minimizing `omega1 + omega2`, ties broken
/// lexicographically; `NoCommonBase` when the families are disjoint.
pub fn common_base_minimum(
    m1: &ValuatedLinearMatroid,
    m2: &ValuatedLinearMatroid,
) -> Result<(Subset, i64)> {
    let mut best: Option<(&Subset, i64)> = None;
    for b in m1.bases() {
        if !m2.is_base(b) {
            continue;
        }
        let value = m1.omega_finite(b) + m2.omega_finite(b);
        match best {
            Some((_, v)) if v <= value => {}
            _ => best = Some((b, value)),
        }
    }
    best.map(|(b, v)| (b.clone(), v)).ok_or(Error::NoCommonBase)
}

/// Weighted minima of one matroid under `omega +/- z` for all bases,
/// as a compact array aligned with `bases()`.
fn base_values(m: &ValuatedLinearMatroid, z: &[i64], sign: i64) -> Vec<i64> {
    m.bases()
        .iter()
        .map(|b| m.omega_finite(b) + sign * b.iter().map(|e| z[e - 1]).sum::<i64>())
        .collect()
}

/// `min_B (a(B) + dir * |B & step|)` over the pruned candidate list.
fn shifted_min(values: &[i64], masks: &[u64], keep: &[usize], step: u64, dir: i64) -> i64 {
    keep.iter()
        .map(|&i| values[i] + dir * (masks[i] & step).count_ones() as i64)
        .min()
        .expect("base family is nonempty")
}

/// Computes an integral weight splitting by steepest ascent on
/// `g(z) = min_B (omega1 + z)(B) + min_B (omega2 - z)(B)`, with candidate
/// steps `z +/- 1_S` over every subset `S`, starting from `z = 0`. The
/// objective is discretely concave, so a local optimum is global; the
/// certificate is still checked against the exhaustive common-base minimum
/// before returning.
pub fn solve_split(
    m1: &ValuatedLinearMatroid,
    m2: &ValuatedLinearMatroid,
) -> Result<SplitCertificate> {
    let n = m1.ground_set_size();
    if n != m2.ground_set_size() {
        return Err(Error::DimensionMismatch(
            "matroids share a ground set".into(),
        ));
    }
    crate::ensure_enumerable(n)?;
    let (witness, m_star) = common_base_minimum(m1, m2)?;

    let masks1: Vec<u64> = m1.bases().iter().map(Subset::mask).collect();
    let masks2: Vec<u64> = m2.bases().iter().map(Subset::mask).collect();
    let r = m1.rank().max(m2.rank()) as i64;
    // lexicographic subset order fixes the tie-break among equal steps
    let steps: Vec<u64> = Subset::enumerate_all(n).iter().map(Subset::mask).collect();

    let mut z = vec![0i64; n];
    loop {
        let a1 = base_values(m1, &z, 1);
        let a2 = base_values(m2, &z, -1);
        let f1 = *a1.iter().min().expect("nonempty");
        let f2 = *a2.iter().min().expect("nonempty");
        if f1 + f2 == m_star {
            break;
        }
        // a base farther than r from the minimum can never attain a
        // +/- |B & S| shifted minimum
        let keep1: Vec<usize> = (0..a1.len()).filter(|&i| a1[i] <= f1 + r).collect();
        let keep2: Vec<usize> = (0..a2.len()).filter(|&i| a2[i] <= f2 + r).collect();
        let g = f1 + f2;
        let mut best: Option<(i64, usize, i64)> = None; // (gain, step index, direction)
        for (si, &step) in steps.iter().enumerate() {
            if step == 0 {
                continue;
            }
            for dir in [1i64, -1] {
                let g1 = shifted_min(&a1, &masks1, &keep1, step, dir);
                let g2 = shifted_min(&a2, &masks2, &keep2, step, -dir);
                let gain = g1 + g2 - g;
                if gain <= 0 {
                    continue;
                }
                // steepest step; ties prefer earlier (lex smaller) subsets,
                // then the +1_S direction
                if best.is_none_or(|(bg, _, _)| gain > bg) {
                    best = Some((gain, si, dir));
                }
            }
        }
        let Some((_, si, dir)) = best else {
            return Err(Error::CertificateFailure(format!(
                "ascent stalled at g = {g}, expected {m_star}"
            )));
        };
        let step = Subset::from_mask(steps[si]);
        for e in step.iter() {
            z[e - 1] += dir;
        }
    }

    let z = WeightVector(z);
    let f1 = m1.min_weight_base(&z)?.1;
    let neg = WeightVector(z.0.iter().map(|v| -v).collect());
    let f2 = m2.min_weight_base(&neg)?.1;
    let cert = SplitCertificate {
        z,
        m_star,
        witness_base: witness,
        f1,
        f2,
    };
    verify_certificate(m1, m2, &cert)?;
    Ok(cert)
}

/// Re-derives every certificate invariant from scratch.
pub fn verify_certificate(
    m1: &ValuatedLinearMatroid,
    m2: &ValuatedLinearMatroid,
    cert: &SplitCertificate,
) -> Result<()> {
    let fail = |msg: String| Err(Error::CertificateFailure(msg));
    if cert.f1 + cert.f2 != cert.m_star {
        return fail(format!(
            "f1 + f2 = {} != m_star = {}",
            cert.f1 + cert.f2,
            cert.m_star
        ));
    }
    let w = &cert.witness_base;
    if !m1.is_base(w) || !m2.is_base(w) {
        return fail("witness is not a common base".into());
    }
    if m1.omega_finite(w) + m2.omega_finite(w) != cert.m_star {
        return fail("witness does not attain m_star".into());
    }
    let zw = cert.z.subset_weight(w);
    if m1.omega_finite(w) + zw != cert.f1 || m2.omega_finite(w) - zw != cert.f2 {
        return fail("witness does not attain the per-matroid minima".into());
    }
    Ok(())
}

/// Rescales `(U, V)` to `(U~, V~)` by `U diag(eps^z)`, `V diag(eps^-z)` and
/// an `eps^{-c}` / `eps^{c}` correction on the first rows, so that
/// `mval(U~) = mval(V~) = 0` while `det(U~_S) det(V~_S) = det(U_S) det(V_S)`
/// for every subset. Requires the common-base minimum of the valuations to
/// be exactly zero.
pub fn normalize_pair(
    u: &Matrix<RationalFunction>,
    v: &Matrix<RationalFunction>,
) -> Result<NormalizedPair> {
    let m1 = ValuatedLinearMatroid::from_matrix(u)?;
    let m2 = ValuatedLinearMatroid::from_matrix(v)?;
    let (pair, _, _) = normalize_with_matroids(u, &m1, v, &m2)?;
    Ok(pair)
}

/// Work-sharing variant: reuses the matroids (hence minor tables) the caller
/// already built, and returns the rescaled minor tables, which are obtained
/// from the originals by exact monomial scaling rather than recomputation.
pub(crate) fn normalize_with_matroids(
    u: &Matrix<RationalFunction>,
    m1: &ValuatedLinearMatroid,
    v: &Matrix<RationalFunction>,
    m2: &ValuatedLinearMatroid,
) -> Result<(
    NormalizedPair,
    MinorTable<RationalFunction>,
    MinorTable<RationalFunction>,
)> {
    let cert = solve_split(m1, m2)?;
    if cert.m_star != 0 {
        return Err(Error::NonzeroCommonMinimum {
            m_star: cert.m_star,
        });
    }
    let c = cert.f1; // = mval(U diag(eps^z)); and -c = f2 = mval(V diag(eps^-z))

    let scale = |m: &Matrix<RationalFunction>, sign: i64, row_shift: i64| {
        let mut out = m.clone();
        for (j, &zj) in cert.z.0.iter().enumerate() {
            if zj != 0 {
                out.scale_column(j, &RationalFunction::one().scale_eps_power(sign * zj));
            }
        }
        if row_shift != 0 {
            out.scale_row(0, &RationalFunction::one().scale_eps_power(row_shift));
        }
        out
    };
    let u_tilde = scale(u, 1, -c);
    let v_tilde = scale(v, -1, c);

    // the scaled minors are the original minors times known eps powers
    let scale_table = |t: &MinorTable<RationalFunction>, sign: i64, row_shift: i64| {
        t.map_with_subset(|s, d| {
            let shift = sign * cert.z.subset_weight(s) + row_shift;
            d.scale_eps_power(shift)
        })
    };
    let u_table = scale_table(m1.source(), 1, -c);
    let v_table = scale_table(m2.source(), -1, c);

    if u_table.min_valuation() != Valuation::Finite(0)
        || v_table.min_valuation() != Valuation::Finite(0)
    {
        return Err(Error::CertificateFailure(
            "rescaled pair does not reach mval 0".into(),
        ));
    }
    Ok((
        NormalizedPair {
            u_tilde,
            v_tilde,
            certificate: cert,
        },
        u_table,
        v_table,
    ))
}
