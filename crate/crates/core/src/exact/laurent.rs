use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::{pow_rat, QSqrtP, Rational};
use crate::error::{Error, Result};

/// Finite sum of `c_e t^e` with `t = p^{-s}` and coefficients in Q(sqrt p).
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    p: u32,
    terms: BTreeMap<i32, QSqrtP>,
}

impl LaurentPoly {
    pub fn zero(p: u32) -> Self {
        LaurentPoly { p, terms: BTreeMap::new() }
    }

    pub fn one(p: u32) -> Self {
        Self::constant(QSqrtP::one(p))
    }

    pub fn constant(c: QSqrtP) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(e: i32, c: QSqrtP) -> Self {
        let mut out = Self::zero(c.p);
        out.add_term(e, c);
        out
    }

    /// The variable `t = p^{-s}`.
    pub fn t(p: u32) -> Self {
        Self::monomial(1, QSqrtP::one(p))
    }

    /// `X = p^{s - 1/2} = p^{-1/2} t^{-1}`.
    pub fn x(p: u32) -> Self {
        Self::monomial(-1, QSqrtP::p_half_power(p, -1))
    }

    /// Builds a polynomial with rational coefficients from `(exponent, coefficient)` pairs.
    pub fn from_rational_terms<I>(p: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, Rational)>,
    {
        let mut out = Self::zero(p);
        for (e, c) in terms {
            out.add_term(e, QSqrtP::rational(c, p));
        }
        out
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn add_term(&mut self, e: i32, c: QSqrtP) {
        assert_eq!(c.p, self.p, "coefficient from a different quadratic field");
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&e) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    pub fn coeff(&self, e: i32) -> QSqrtP {
        self.terms.get(&e).cloned().unwrap_or_else(|| QSqrtP::zero(self.p))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &QSqrtP)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(QSqrtP::is_rational)
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.p, other.p))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let mut out = Self::zero(self.p);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &QSqrtP) -> Self {
        let mut out = Self::zero(self.p);
        for (e, v) in self.terms() {
            out.add_term(e, v * c);
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&QSqrtP::rational(r.clone(), self.p))
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            p: self.p,
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.p), |acc, _| &acc * self)
    }

    /// The substitution `s -> 1 - s`, i.e. `t -> 1/(p t)`.
    pub fn fe_substitute(&self) -> Self {
        LaurentPoly {
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (-e, c.scale(&pow_rat(self.p, -e))))
                .collect(),
        }
    }

    /// Evaluates at a complex value of `t`.
    pub fn eval_t(&self, t: Complex64) -> Complex64 {
        self.terms()
            .map(|(e, c)| t.powi(e) * c.to_f64())
            .sum()
    }

    /// Evaluates at `t = p^{-s}`.
    pub fn eval_s(&self, s: Complex64) -> Complex64 {
        self.eval_t(t_of_s(self.p, s))
    }

    /// Exact value at a rational `t`.
    pub fn eval_rational(&self, t: &Rational) -> Result<QSqrtP> {
        if t.is_zero() && self.min_exp().is_some_and(|e| e < 0) {
            return Err(Error::InvalidInput("negative power evaluated at t = 0".into()));
        }
        let mut acc = QSqrtP::zero(self.p);
        for (e, c) in self.terms() {
            let tp = if e >= 0 {
                num_traits::pow(t.clone(), e as usize)
            } else {
                num_traits::pow(t.recip(), (-e) as usize)
            };
            acc = acc + c.scale(&tp);
        }
        Ok(acc)
    }

    /// Rescales by a unit `c t^k` so the lowest exponent is 0 with coefficient 1.
    pub fn normalize_unit(&self) -> Result<Self> {
        let (e0, c0) = self
            .terms
            .iter()
            .next()
            .ok_or_else(|| Error::InvalidInput("cannot normalize the zero polynomial".into()))?;
        let inv = c0.inverse()?;
        Ok(self.shift(-e0).scale(&inv))
    }

    /// Dense rational coefficients `c_0..c_d` when all exponents are nonnegative
    /// and all coefficients rational.
    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        if self.min_exp().is_some_and(|e| e < 0) || !self.is_rational() {
            return None;
        }
        let deg = self.max_exp().unwrap_or(0);
        Some(
            (0..=deg)
                .map(|e| self.terms.get(&e).map(|c| c.a.clone()).unwrap_or_else(Rational::zero))
                .collect(),
        )
    }

    /// True when `c_e` and `c_{m-e}` agree for the symmetry centre `m = min + max`.
    pub fn is_palindromic(&self) -> bool {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => self
                .terms()
                .all(|(e, c)| self.terms.get(&(lo + hi - e)) == Some(c)),
            _ => true,
        }
    }
}

/// `t = p^{-s}` for complex `s`.
pub fn t_of_s(p: u32, s: Complex64) -> Complex64 {
    (-s * (p as f64).ln()).exp()
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let (negative, mag) = if c.is_rational() && c.a.is_negative() {
                (true, QSqrtP::rational(-c.a.clone(), c.p))
            } else {
                (false, c.clone())
            };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let var = match e {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            };
            if e == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_rational() && mag.a.is_one() {
                write!(f, "{var}")?;
            } else if mag.is_rational() && mag.a.is_integer() {
                write!(f, "{mag}{var}")?;
            } else {
                write!(f, "({mag}){var}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    p: u32,
    terms: BTreeMap<i32, String>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentRepr {
            p: self.p,
            terms: self.terms().map(|(e, c)| (e, c.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = LaurentRepr::deserialize(d)?;
        let mut out = LaurentPoly::zero(repr.p);
        for (e, text) in repr.terms {
            let c = QSqrtP::parse(&text, repr.p).map_err(de::Error::custom)?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}

macro_rules! forward_poly_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).expect("Laurent arithmetic across different primes")
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_poly_binop!(Add, add, try_add);
forward_poly_binop!(Sub, sub, try_sub);
forward_poly_binop!(Mul, mul, try_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-QSqrtP::one(self.p))
    }
}
