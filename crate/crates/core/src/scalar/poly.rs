//! Sparse univariate polynomials in the degeneration parameter `eps` over
//! the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::rational::Rational;

/// A polynomial in `eps` with exact rational coefficients. The map never
/// stores zero coefficients; the zero polynomial is the empty map.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EpsPolynomial {
    coeffs: BTreeMap<usize, Rational>,
}

impl EpsPolynomial {
    pub fn zero() -> Self {
        EpsPolynomial {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        EpsPolynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        EpsPolynomial::monomial(0, c)
    }

    /// The monomial `c * eps^k`.
    pub fn monomial(exponent: usize, c: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exponent, c);
        }
        EpsPolynomial { coeffs }
    }

    pub fn eps() -> Self {
        EpsPolynomial::monomial(1, Rational::one())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut p = EpsPolynomial::zero();
        for (e, c) in pairs {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exponent: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.remove(&exponent) {
            None => {
                self.coeffs.insert(exponent, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.coeffs.insert(exponent, s);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// Lowest exponent with a nonzero coefficient; `None` for zero.
    pub fn mindeg(&self) -> Option<usize> {
        self.coeffs.keys().next().copied()
    }

    /// Highest exponent with a nonzero coefficient; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, exponent: usize) -> Rational {
        self.coeffs
            .get(&exponent)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn lowest_coeff(&self) -> Option<&Rational> {
        self.coeffs.values().next()
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.values().next_back()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.coeff(0)),
            Some(_) => None,
        }
    }

    /// `Some((k, c))` when the polynomial is the single term `c * eps^k`.
    pub fn as_monomial(&self) -> Option<(usize, &Rational)> {
        if self.coeffs.len() == 1 {
            self.coeffs.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return EpsPolynomial::zero();
        }
        EpsPolynomial {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiplies by `eps^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        EpsPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, v)| (e + k, v.clone()))
                .collect(),
        }
    }

    /// Divides by `eps^k`; requires `mindeg >= k`.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.is_zero() || self.mindeg().unwrap() >= k);
        EpsPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, v)| (e - k, v.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        // Horner over the sparse representation, highest exponent first.
        let mut acc = Rational::zero();
        let mut prev_exp: Option<usize> = None;
        for (e, c) in self.coeffs.iter().rev() {
            if let Some(p) = prev_exp {
                for _ in 0..(p - e) {
                    acc = acc * x;
                }
            }
            acc = acc + c;
            prev_exp = Some(*e);
        }
        if let Some(p) = prev_exp {
            for _ in 0..p {
                acc = acc * x;
            }
        }
        acc
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn make_monic(&self) -> Self {
        match self.leading_coeff() {
            None => EpsPolynomial::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division: returns `(q, r)` with `self = q * d + r` and
    /// `deg r < deg d`. Panics when `d` is zero.
    pub fn div_rem(&self, d: &EpsPolynomial) -> (EpsPolynomial, EpsPolynomial) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let dl = d.leading_coeff().unwrap().clone();
        let mut r = self.clone();
        let mut q = EpsPolynomial::zero();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let t = r.leading_coeff().unwrap() / &dl;
            let shift = rd - dd;
            q.add_term(shift, t.clone());
            for (e, c) in d.coeffs.iter() {
                r.add_term(e + shift, -(c * &t));
            }
        }
        (q, r)
    }

    /// Exact quotient; `None` when the remainder is nonzero.
    pub fn div_exact(&self, d: &EpsPolynomial) -> Option<EpsPolynomial> {
        if self.is_zero() {
            return Some(EpsPolynomial::zero());
        }
        // fast path: divisor is a monomial
        if let Some((k, c)) = d.as_monomial() {
            if self.mindeg().unwrap() < k {
                return None;
            }
            let inv = c.inv().expect("nonzero");
            return Some(self.shift_down(k).scale(&inv));
        }
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic gcd. The common `eps` power is split off first so that the
    /// Euclidean loop only runs on polynomials with nonzero constant term.
    pub fn gcd(a: &EpsPolynomial, b: &EpsPolynomial) -> EpsPolynomial {
        if a.is_zero() {
            return b.make_monic();
        }
        if b.is_zero() {
            return a.make_monic();
        }
        let ma = a.mindeg().unwrap();
        let mb = b.mindeg().unwrap();
        let shared = ma.min(mb);
        let mut x = a.shift_down(ma);
        let mut y = b.shift_down(mb);
        // constant factors are units
        if x.as_constant().is_some() || y.as_constant().is_some() {
            return EpsPolynomial::monomial(shared, Rational::one());
        }
        if y.degree() > x.degree() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            // monic remainders keep coefficient growth in check
            y = r.make_monic();
        }
        x.make_monic().shift_up(shared)
    }

    /// Least common multiple, monic.
    pub fn lcm(a: &EpsPolynomial, b: &EpsPolynomial) -> EpsPolynomial {
        if a.is_zero() || b.is_zero() {
            return EpsPolynomial::zero();
        }
        let g = EpsPolynomial::gcd(a, b);
        let q = a.div_exact(&g).expect("gcd divides");
        (q * b).make_monic()
    }
}

impl Add for &EpsPolynomial {
    type Output = EpsPolynomial;
    fn add(self, rhs: &EpsPolynomial) -> EpsPolynomial {
        let mut out = self.clone();
        for (e, c) in rhs.coeffs.iter() {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &EpsPolynomial {
    type Output = EpsPolynomial;
    fn sub(self, rhs: &EpsPolynomial) -> EpsPolynomial {
        let mut out = self.clone();
        for (e, c) in rhs.coeffs.iter() {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &EpsPolynomial {
    type Output = EpsPolynomial;
    fn mul(self, rhs: &EpsPolynomial) -> EpsPolynomial {
        let mut out = EpsPolynomial::zero();
        for (e1, c1) in self.coeffs.iter() {
            for (e2, c2) in rhs.coeffs.iter() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_poly_binop {
    ($imp:ident, $method:ident) => {
        impl $imp for EpsPolynomial {
            type Output = EpsPolynomial;
            fn $method(self, rhs: EpsPolynomial) -> EpsPolynomial {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $imp<&'a EpsPolynomial> for EpsPolynomial {
            type Output = EpsPolynomial;
            fn $method(self, rhs: &'a EpsPolynomial) -> EpsPolynomial {
                (&self).$method(rhs)
            }
        }
        impl<'a> $imp<EpsPolynomial> for &'a EpsPolynomial {
            type Output = EpsPolynomial;
            fn $method(self, rhs: EpsPolynomial) -> EpsPolynomial {
                self.$method(&rhs)
            }
        }
    };
}

forward_poly_binop!(Add, add);
forward_poly_binop!(Sub, sub);
forward_poly_binop!(Mul, mul);

impl Neg for &EpsPolynomial {
    type Output = EpsPolynomial;
    fn neg(self) -> EpsPolynomial {
        EpsPolynomial {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for EpsPolynomial {
    type Output = EpsPolynomial;
    fn neg(self) -> EpsPolynomial {
        -&self
    }
}

impl fmt::Display for EpsPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            let (sign, mag) = if c.is_negative() {
                ("-", c.abs())
            } else {
                ("+", c.clone())
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (*e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "eps")?,
                (1, false) => write!(f, "{mag}*eps")?,
                (_, true) => write!(f, "eps^{e}")?,
                (_, false) => write!(f, "{mag}*eps^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(pairs: &[(usize, i64)]) -> EpsPolynomial {
        EpsPolynomial::from_pairs(pairs.iter().map(|&(e, c)| (e, Rational::from_int(c))))
    }

    #[test]
    fn arithmetic_basics() {
        let a = p(&[(0, 1), (2, 3)]);
        let b = p(&[(0, -1), (1, 2)]);
        assert_eq!(&a + &b, p(&[(1, 2), (2, 3)]));
        assert_eq!(&a - &a, EpsPolynomial::zero());
        assert_eq!(&a * &b, p(&[(0, -1), (1, 2), (2, -3), (3, 6)]));
    }

    #[test]
    fn div_rem_exact() {
        let a = p(&[(0, -1), (2, 1)]); // eps^2 - 1
        let b = p(&[(0, 1), (1, 1)]); // eps + 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[(0, -1), (1, 1)]));
        assert!(r.is_zero());
        assert_eq!(a.div_exact(&b).unwrap(), q);
        assert!(b.div_exact(&a).is_none());
    }

    #[test]
    fn gcd_with_shared_eps_power() {
        // gcd(eps^2(eps+1), eps(eps+1)(eps-1)) = eps(eps+1)
        let a = p(&[(2, 1), (3, 1)]);
        let b = p(&[(1, -1), (3, 1)]);
        assert_eq!(EpsPolynomial::gcd(&a, &b), p(&[(1, 1), (2, 1)]));
    }

    #[test]
    fn gcd_monomial_fast_path() {
        let a = EpsPolynomial::monomial(3, Rational::from_int(4));
        let b = p(&[(1, 2), (2, 2)]);
        assert_eq!(EpsPolynomial::gcd(&a, &b), p(&[(1, 1)]));
    }

    #[test]
    fn display_reads_naturally() {
        assert_eq!(
            p(&[(0, 1), (1, -2), (3, 1)]).to_string(),
            "1 - 2*eps + eps^3"
        );
        assert_eq!(p(&[]).to_string(), "0");
        assert_eq!(
            EpsPolynomial::monomial(2, Rational::ratio(1, 2)).to_string(),
            "1/2*eps^2"
        );
    }

    #[test]
    fn eval_horner() {
        let a = p(&[(0, 1), (2, 3)]);
        assert_eq!(a.eval(&Rational::from_int(2)), Rational::from_int(13));
    }
}
