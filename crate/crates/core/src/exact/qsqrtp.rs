use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{parse_rational, pow_rat, to_f64, Rational};
use crate::error::{Error, Result};

/// An element `a + b*sqrt(p)` of Q(sqrt p), p prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrtP {
    pub a: Rational,
    pub b: Rational,
    pub p: u32,
}

impl QSqrtP {
    pub fn new(a: Rational, b: Rational, p: u32) -> Self {
        QSqrtP { a, b, p }
    }

    pub fn rational(a: Rational, p: u32) -> Self {
        QSqrtP::new(a, Rational::zero(), p)
    }

    pub fn zero(p: u32) -> Self {
        QSqrtP::rational(Rational::zero(), p)
    }

    pub fn one(p: u32) -> Self {
        QSqrtP::rational(Rational::one(), p)
    }

    pub fn sqrt_p(p: u32) -> Self {
        QSqrtP::new(Rational::zero(), Rational::one(), p)
    }

    /// `p^(e/2)`.
    pub fn p_half_power(p: u32, e: i32) -> Self {
        if e.rem_euclid(2) == 0 {
            QSqrtP::rational(pow_rat(p, e / 2), p)
        } else {
            QSqrtP::new(Rational::zero(), pow_rat(p, (e - 1) / 2), p)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// Field norm `a^2 - p b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(self.p.into()) * &self.b * &self.b
    }

    pub fn conjugate(&self) -> Self {
        QSqrtP::new(self.a.clone(), -self.b.clone(), self.p)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QSqrtP::new(&self.a * r, &self.b * r, self.p)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.p, other.p))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(QSqrtP::new(&self.a + &other.a, &self.b + &other.b, self.p))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(QSqrtP::new(&self.a - &other.a, &self.b - &other.b, self.p))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let p = Rational::from_integer(self.p.into());
        Ok(QSqrtP::new(
            &self.a * &other.a + p * &self.b * &other.b,
            &self.a * &other.b + &self.b * &other.a,
            self.p,
        ))
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidInput("division by zero in Q(sqrt p)".into()));
        }
        let n = self.norm();
        Ok(QSqrtP::new(&self.a / &n, -&self.b / &n, self.p))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        self.try_mul(&other.inverse()?)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * (self.p as f64).sqrt()
    }

    /// Parses the display form, e.g. `"1/2 - 3*sqrt(5)"`, `"sqrt(2)"`, `"-1/3"`.
    pub fn parse(s: &str, p: u32) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse {s:?} as an element of Q(sqrt {p})"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut out = QSqrtP::zero(p);
        // split into signed terms
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'(' && bytes[i - 1] != b'/' {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let radical = format!("sqrt({p})");
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-Rational::one(), rest),
                None => (Rational::one(), term.strip_prefix('+').unwrap_or(term)),
            };
            if let Some(coef) = body.strip_suffix(&radical) {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let c = if coef.is_empty() {
                    Rational::one()
                } else {
                    parse_rational(coef).ok_or_else(bad)?
                };
                out.b += sign * c;
            } else if body.contains("sqrt") {
                return Err(bad());
            } else {
                out.a += sign * parse_rational(body).ok_or_else(bad)?;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for QSqrtP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let radical = |b: &Rational| {
            if b.is_one() {
                format!("sqrt({})", self.p)
            } else {
                format!("{}*sqrt({})", b, self.p)
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) if self.b.is_negative() => write!(f, "-{}", radical(&-self.b.clone())),
            (true, false) => write!(f, "{}", radical(&self.b)),
            (false, false) if self.b.is_negative() => {
                write!(f, "{} - {}", self.a, radical(&-self.b.clone()))
            }
            (false, false) => write!(f, "{} + {}", self.a, radical(&self.b)),
        }
    }
}

impl Serialize for QSqrtP {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&QSqrtP> for &QSqrtP {
            type Output = QSqrtP;
            fn $method(self, rhs: &QSqrtP) -> QSqrtP {
                self.$checked(rhs).expect("arithmetic across different quadratic fields")
            }
        }
        impl $tr<QSqrtP> for QSqrtP {
            type Output = QSqrtP;
            fn $method(self, rhs: QSqrtP) -> QSqrtP {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QSqrtP> for QSqrtP {
            type Output = QSqrtP;
            fn $method(self, rhs: &QSqrtP) -> QSqrtP {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for QSqrtP {
    type Output = QSqrtP;
    fn neg(self) -> QSqrtP {
        QSqrtP::new(-self.a, -self.b, self.p)
    }
}

impl Neg for &QSqrtP {
    type Output = QSqrtP;
    fn neg(self) -> QSqrtP {
        -self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn field_arithmetic() {
        let x = QSqrtP::new(rat(1, 2), int(1), 3);
        let y = QSqrtP::new(int(2), rat(-1, 3), 3);
        // (1/2 + r)(2 - r/3) = 1 - 1 + (-1/6 + 2) r with r^2 = 3
        assert_eq!(&x * &y, QSqrtP::new(int(0), rat(11, 6), 3));
        assert_eq!(&(&x * &y) / &y, x);
        assert_eq!(QSqrtP::sqrt_p(5) * QSqrtP::sqrt_p(5), QSqrtP::rational(int(5), 5));
    }

    #[test]
    fn half_powers() {
        assert_eq!(QSqrtP::p_half_power(2, 3), QSqrtP::new(int(0), int(2), 2));
        assert_eq!(QSqrtP::p_half_power(2, -1), QSqrtP::new(int(0), rat(1, 2), 2));
        assert_eq!(QSqrtP::p_half_power(3, -4), QSqrtP::rational(rat(1, 9), 3));
    }

    #[test]
    fn mismatched_primes_rejected() {
        let err = QSqrtP::one(2).try_add(&QSqrtP::one(3)).unwrap_err();
        assert_eq!(err, Error::PrimeMismatch(2, 3));
    }

    #[test]
    fn display_round_trip() {
        for (q, text) in [
            (QSqrtP::new(rat(1, 2), rat(-3, 4), 5), "1/2 - 3/4*sqrt(5)"),
            (QSqrtP::new(int(0), int(1), 2), "sqrt(2)"),
            (QSqrtP::new(int(0), int(-2), 2), "-2*sqrt(2)"),
            (QSqrtP::rational(rat(-7, 3), 7), "-7/3"),
        ] {
            assert_eq!(q.to_string(), text);
            assert_eq!(QSqrtP::parse(text, q.p).unwrap(), q);
        }
        assert!(QSqrtP::parse("sqrt(3)", 2).is_err());
    }
}
