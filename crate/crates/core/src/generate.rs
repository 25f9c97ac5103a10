//! Seeded random construction of border instances with a known limit
//! polynomial, plus the smaller random builders shared by the test
//! suites.
//!
//! The border construction scales the columns of an exact pair by opposite
//! powers of `eps` and then mixes rows with unimodular rational steps.
//! Column scaling cancels inside every minor product and row mixing
//! preserves all minors outright, so the generated instance provably
//! computes the same polynomial as the exact seed pair, which is recorded
//! as ground truth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::multilinear::{MultilinearPoly, RankOneInstance};
use crate::scalar::{Rational, RationalFunction};

/// Parameters of the deterministic generator; equal specs produce
/// byte-identical instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub n: usize,
    pub r: usize,
    pub seed: u64,
    /// Column scaling exponents are drawn from `[-z_range, z_range]`.
    pub z_range: i64,
    /// Number of unimodular row operations applied to each factor.
    pub mixing_steps: usize,
    /// Also sample a constant block.
    pub include_a0: bool,
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub instance: RankOneInstance<RationalFunction>,
    /// The limit polynomial the instance computes, known by construction.
    pub ground_truth: MultilinearPoly<Rational>,
}

/// Uniform small integer as a rational.
pub fn random_small_rational(rng: &mut impl Rng, bound: i64) -> Rational {
    Rational::from_int(rng.gen_range(-bound..=bound))
}

pub fn random_rational_matrix(
    rng: &mut impl Rng,
    rows: usize,
    cols: usize,
    bound: i64,
) -> Matrix<Rational> {
    let data: Vec<Vec<Rational>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| random_small_rational(rng, bound))
                .collect()
        })
        .collect();
    Matrix::from_rows(data).expect("nonempty shape")
}

/// Retries until the sampled matrix has full row rank.
pub fn random_full_rank_rational(
    rng: &mut impl Rng,
    rows: usize,
    cols: usize,
    bound: i64,
) -> Matrix<Rational> {
    loop {
        let m = random_rational_matrix(rng, rows, cols, bound);
        if m.rank() == rows {
            return m;
        }
    }
}

/// A random fraction-field entry: a small polynomial in `eps`, optionally
/// divided by `eps`.
pub fn random_eps_entry(rng: &mut impl Rng, bound: i64) -> RationalFunction {
    let deg = rng.gen_range(0..=2u32);
    let mut p = RationalFunction::zero();
    for e in 0..=deg {
        let c = random_small_rational(rng, bound);
        p = p + RationalFunction::constant(c).scale_eps_power(e as i64);
    }
    if rng.gen_bool(0.3) {
        p = p.scale_eps_power(-1);
    }
    p
}

pub fn random_eps_matrix(
    rng: &mut impl Rng,
    rows: usize,
    cols: usize,
    bound: i64,
) -> Matrix<RationalFunction> {
    Matrix::from_fn(rows, cols, |_, _| random_eps_entry(rng, bound))
}

/// Retries until full row rank over the fraction field.
pub fn random_full_rank_eps(
    rng: &mut impl Rng,
    rows: usize,
    cols: usize,
    bound: i64,
) -> Matrix<RationalFunction> {
    loop {
        let m = random_eps_matrix(rng, rows, cols, bound);
        if m.rank() == rows {
            return m;
        }
    }
}

/// Applies `steps` random elementary row operations `row_i += c * row_j`
/// with small nonzero rational `c`; all minors are preserved exactly.
pub fn mix_rows<K: Field>(rng: &mut impl Rng, m: &mut Matrix<K>, steps: usize) {
    if m.rows() < 2 {
        return;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..m.rows());
        let mut j = rng.gen_range(0..m.rows());
        while j == i {
            j = rng.gen_range(0..m.rows());
        }
        let mut c = rng.gen_range(-2i64..=2);
        if c == 0 {
            c = 1;
        }
        m.add_scaled_row(i, j, &K::from_int(c));
    }
}

/// Builds a border instance from the spec; see the module docs for why the
/// recorded ground truth is exact.
pub fn generate(spec: &GeneratorSpec) -> Result<GeneratedInstance> {
    if spec.r == 0 || spec.n < spec.r {
        return Err(Error::InvalidInput(format!(
            "generator needs n >= r >= 1, got n = {}, r = {}",
            spec.n, spec.r
        )));
    }
    crate::ensure_enumerable(spec.n)?;
    if spec.include_a0 {
        crate::ensure_enumerable(2 * spec.n + spec.r)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let bound = 3;

    let u_seed = random_full_rank_rational(&mut rng, spec.r, spec.n, bound);
    let v_seed = random_full_rank_rational(&mut rng, spec.r, spec.n, bound);
    let a0_seed = spec.include_a0.then(|| loop {
        let m = random_rational_matrix(&mut rng, spec.r, spec.r, bound);
        if !m.is_zero() {
            break m;
        }
    });

    // ground truth before any scaling or mixing
    let exact = RankOneInstance::new(
        a0_seed.as_ref().map(Matrix::from_base),
        Matrix::from_base(&u_seed),
        Matrix::from_base(&v_seed),
    )?;
    let ground_truth = exact
        .extract_coefficients()?
        .limit_entrywise()
        .expect("exact instance has constant coefficients");

    let z: Vec<i64> = (0..spec.n)
        .map(|_| rng.gen_range(-spec.z_range..=spec.z_range))
        .collect();
    let mut u = Matrix::from_base(&u_seed);
    let mut v = Matrix::from_base(&v_seed);
    for (j, &zj) in z.iter().enumerate() {
        if zj != 0 {
            u.scale_column(j, &RationalFunction::one().scale_eps_power(-zj));
            v.scale_column(j, &RationalFunction::one().scale_eps_power(zj));
        }
    }

    // mixing must act through the full determinant: with a constant block
    // present, the same left factors multiply it on both sides
    let mut e_mix = Matrix::<RationalFunction>::identity(spec.r);
    let mut f_mix = Matrix::<RationalFunction>::identity(spec.r);
    mix_rows(&mut rng, &mut e_mix, spec.mixing_steps);
    mix_rows(&mut rng, &mut f_mix, spec.mixing_steps);
    let u = e_mix.matmul(&u)?;
    let v = f_mix.matmul(&v)?;
    let a0 = match a0_seed {
        None => None,
        Some(a0) => Some(
            e_mix
                .matmul(&Matrix::from_base(&a0))?
                .matmul(&f_mix.transpose())?,
        ),
    };

    Ok(GeneratedInstance {
        instance: RankOneInstance::new(a0, u, v)?,
        ground_truth,
    })
}
