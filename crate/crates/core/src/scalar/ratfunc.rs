//! The fraction field of `eps`-polynomials, with the order-of-vanishing
//! valuation and the limit operator at `eps = 0`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::poly::EpsPolynomial;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Order of vanishing at `eps = 0`; the zero function has valuation
/// `Infinite`, which absorbs addition and is maximal in comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn is_nonnegative(self) -> bool {
        match self {
            Valuation::Finite(v) => v >= 0,
            Valuation::Infinite => true,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("+inf"),
        }
    }
}

/// An element of the fraction field in canonical form: numerator and
/// denominator coprime, denominator nonzero with lowest-order coefficient 1.
/// Structural equality therefore agrees with field equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: EpsPolynomial,
    den: EpsPolynomial,
}

impl RationalFunction {
    pub fn new(num: EpsPolynomial, den: EpsPolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction::zero());
        }
        // strip the shared eps power so at most one side is divisible by eps
        let shared = num.mindeg().unwrap().min(den.mindeg().unwrap());
        let mut num = num.shift_down(shared);
        let mut den = den.shift_down(shared);
        let g = EpsPolynomial::gcd(&num, &den);
        if !g.is_one() {
            num = num.div_exact(&g).expect("gcd divides numerator");
            den = den.div_exact(&g).expect("gcd divides denominator");
        }
        Ok(Self::normalized(num, den))
    }

    /// Unit normalization only: assumes `num`, `den` already coprime with no
    /// shared eps power.
    fn normalized(num: EpsPolynomial, den: EpsPolynomial) -> Self {
        if num.is_zero() {
            return RationalFunction::zero();
        }
        let c = den.lowest_coeff().expect("nonzero denominator").clone();
        if c.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = c.inv().expect("nonzero");
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: EpsPolynomial::zero(),
            den: EpsPolynomial::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction {
            num: EpsPolynomial::one(),
            den: EpsPolynomial::one(),
        }
    }

    pub fn eps() -> Self {
        RationalFunction {
            num: EpsPolynomial::eps(),
            den: EpsPolynomial::one(),
        }
    }

    pub fn from_poly(p: EpsPolynomial) -> Self {
        RationalFunction {
            num: p,
            den: EpsPolynomial::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunction::from_poly(EpsPolynomial::constant(c))
    }

    pub fn from_int(v: i64) -> Self {
        RationalFunction::constant(Rational::from_int(v))
    }

    pub fn num(&self) -> &EpsPolynomial {
        &self.num
    }

    pub fn den(&self) -> &EpsPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `Some(c)` when the value lies in the base field.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // already coprime; only the unit normalization changes
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// `val(f) = mindeg(num) - mindeg(den)`, `+inf` for the zero function.
    pub fn valuation(&self) -> Valuation {
        match self.num.mindeg() {
            None => Valuation::Infinite,
            Some(mn) => {
                let md = self.den.mindeg().expect("nonzero denominator");
                Valuation::Finite(mn as i64 - md as i64)
            }
        }
    }

    /// The limit at `eps = 0`: defined exactly when `val >= 0`, zero exactly
    /// when `val > 0`.
    pub fn limit0(&self) -> Result<Rational> {
        match self.valuation() {
            Valuation::Infinite => Ok(Rational::zero()),
            Valuation::Finite(v) if v > 0 => Ok(Rational::zero()),
            Valuation::Finite(0) => {
                let m = self.num.mindeg().unwrap();
                debug_assert_eq!(self.den.mindeg().unwrap(), m);
                Ok(self.num.coeff(m) / self.den.coeff(m))
            }
            Valuation::Finite(_) => Err(Error::LimitUndefined { subset: None }),
        }
    }

    /// Multiplies by `eps^k`; the valuation shifts by exactly `k`.
    pub fn scale_eps_power(&self, k: i64) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        if k > 0 {
            RationalFunction::new(self.num.shift_up(k as usize), self.den.clone())
        } else {
            RationalFunction::new(self.num.clone(), self.den.shift_up((-k) as usize))
        }
        .expect("denominator stays nonzero")
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut acc = RationalFunction::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        Ok(acc)
    }
}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> Self {
        RationalFunction::constant(c)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            return RationalFunction::new(num, self.den.clone()).expect("nonzero denominator");
        }
        let g = EpsPolynomial::gcd(&self.den, &rhs.den);
        if g.is_one() {
            // result is already coprime: any common prime factor would have
            // to divide both denominators
            let num = &self.num * &rhs.den + &rhs.num * &self.den;
            let den = &self.den * &rhs.den;
            return RationalFunction::normalized(num, den);
        }
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &self.num * &d1 + &rhs.num * &b1;
        let den = &b1 * &rhs.den;
        if num.is_zero() {
            return RationalFunction::zero();
        }
        // the only factors shared with den lie in g
        let h = EpsPolynomial::gcd(&num, &g);
        if h.is_one() {
            RationalFunction::normalized(num, den)
        } else {
            RationalFunction::normalized(
                num.div_exact(&h).expect("gcd divides"),
                den.div_exact(&h).expect("gcd divides"),
            )
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        // cross-cancel so the remaining product is coprime by construction
        let g1 = EpsPolynomial::gcd(&self.num, &rhs.den);
        let g2 = EpsPolynomial::gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RationalFunction::normalized(n1 * n2, d1 * d2)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

macro_rules! forward_rf_binop {
    ($imp:ident, $method:ident) => {
        impl $imp for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $imp<&'a RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &'a RationalFunction) -> RationalFunction {
                (&self).$method(rhs)
            }
        }
        impl<'a> $imp<RationalFunction> for &'a RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                self.$method(&rhs)
            }
        }
    };
}

forward_rf_binop!(Add, add);
forward_rf_binop!(Sub, sub);
forward_rf_binop!(Mul, mul);

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

// JSON form: a bare rational string for base-field constants, otherwise
// `{"num": [[exp, "p/q"], ...], "den": [...]}` with ascending exponents.

type PairList = Vec<(usize, Rational)>;

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RationalFunctionRepr {
    Constant(Rational),
    Full { num: PairList, den: PairList },
}

fn poly_to_pairs(p: &EpsPolynomial) -> PairList {
    p.iter().map(|(e, c)| (e, c.clone())).collect()
}

pub(crate) fn poly_from_pairs_strict(pairs: PairList) -> Result<EpsPolynomial> {
    for w in pairs.windows(2) {
        if w[0].0 >= w[1].0 {
            return Err(Error::Parse(
                "polynomial exponents must be strictly ascending".into(),
            ));
        }
    }
    if pairs.iter().any(|(_, c)| c.is_zero()) {
        return Err(Error::Parse("polynomial stores a zero coefficient".into()));
    }
    Ok(EpsPolynomial::from_pairs(pairs))
}

impl Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.as_constant() {
            Some(c) => RationalFunctionRepr::Constant(c).serialize(s),
            None => RationalFunctionRepr::Full {
                num: poly_to_pairs(&self.num),
                den: poly_to_pairs(&self.den),
            }
            .serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        match RationalFunctionRepr::deserialize(d)? {
            RationalFunctionRepr::Constant(c) => Ok(RationalFunction::constant(c)),
            RationalFunctionRepr::Full { num, den } => {
                let num = poly_from_pairs_strict(num).map_err(D::Error::custom)?;
                let den = poly_from_pairs_strict(den).map_err(D::Error::custom)?;
                let f =
                    RationalFunction::new(num.clone(), den.clone()).map_err(D::Error::custom)?;
                if f.num != num || f.den != den {
                    return Err(D::Error::custom(
                        "rational function is not in canonical form (coprime, lowest \
                         denominator coefficient 1)",
                    ));
                }
                Ok(f)
            }
        }
    }
}
