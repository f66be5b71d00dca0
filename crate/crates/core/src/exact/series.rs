use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{LaurentPoly, QSqrtP, Rational};
use crate::error::{Error, Result};

/// Laurent series in `t` known exactly for every exponent below `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    p: u32,
    terms: BTreeMap<i32, QSqrtP>,
    order: i32,
}

impl PowerSeries {
    /// Truncates a polynomial, keeping exponents `< order`.
    pub fn from_poly(poly: &LaurentPoly, order: i32) -> Self {
        PowerSeries {
            p: poly.p(),
            terms: poly
                .terms()
                .filter(|(e, _)| *e < order)
                .map(|(e, c)| (e, c.clone()))
                .collect(),
            order,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    /// Coefficient of `t^e`; `None` beyond the truncation order.
    pub fn coeff(&self, e: i32) -> Option<QSqrtP> {
        (e < self.order).then(|| self.terms.get(&e).cloned().unwrap_or_else(|| QSqrtP::zero(self.p)))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &QSqrtP)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn valuation(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    /// The known part as a polynomial.
    pub fn truncated(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.p);
        for (e, c) in self.terms() {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let sum = self.truncated().try_add(&other.truncated())?;
        Ok(Self::from_poly(&sum, self.order.min(other.order)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let prod = self.truncated().try_mul(&other.truncated())?;
        let order = match (self.valuation(), other.valuation()) {
            (Some(va), Some(vb)) => (self.order + vb).min(other.order + va),
            _ => self.order.min(other.order),
        };
        Ok(Self::from_poly(&prod, order))
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "O(t^{})", self.order)
        } else {
            write!(f, "{} + O(t^{})", self.truncated(), self.order)
        }
    }
}

/// Quotient `num / den`; `den` has rational coefficients, lowest exponent 0
/// and constant term 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if num.p() != den.p() {
            return Err(Error::PrimeMismatch(num.p(), den.p()));
        }
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        if !den.is_rational() {
            return Err(Error::InvalidInput("denominator must have rational coefficients".into()));
        }
        let (e0, c0) = den.terms().next().map(|(e, c)| (e, c.clone())).unwrap();
        let inv = c0.inverse()?;
        Ok(RationalFunc {
            num: num.shift(-e0).scale(&inv),
            den: den.shift(-e0).scale(&inv),
        })
    }

    pub fn from_poly(num: LaurentPoly) -> Self {
        let p = num.p();
        RationalFunc { num, den: LaurentPoly::one(p) }
    }

    /// `1 / den` for a rational polynomial `den`.
    pub fn reciprocal(den: LaurentPoly) -> Result<Self> {
        Self::new(LaurentPoly::one(den.p()), den)
    }

    pub fn p(&self) -> u32 {
        self.num.p()
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        Self::new(self.num.try_mul(&other.num)?, self.den.try_mul(&other.den)?)
    }

    pub fn mul_poly(&self, poly: &LaurentPoly) -> Result<Self> {
        Self::new(self.num.try_mul(poly)?, self.den.clone())
    }

    pub fn eval_t(&self, t: Complex64) -> Complex64 {
        self.num.eval_t(t) / self.den.eval_t(t)
    }

    pub fn eval_s(&self, s: Complex64) -> Complex64 {
        self.eval_t(super::laurent::t_of_s(self.p(), s))
    }

    /// Exact value at a rational point; errors at a pole.
    pub fn eval_rational(&self, t: &Rational) -> Result<QSqrtP> {
        let d = self.den.eval_rational(t)?;
        if d.is_zero() {
            return Err(Error::InvalidInput(format!("pole at t = {t}")));
        }
        self.num.eval_rational(t)?.try_div(&d)
    }

    /// Coefficients of `1/den` for exponents `0..len`.
    fn inverse_den(&self, len: usize) -> Result<Vec<Rational>> {
        let d = self.den.rational_coeffs().expect("normalized denominator");
        if d[0].is_zero() {
            return Err(Error::InvalidInput("denominator has zero constant term".into()));
        }
        let mut inv: Vec<Rational> = Vec::with_capacity(len);
        for j in 0..len {
            let mut acc = if j == 0 { Rational::one() } else { Rational::zero() };
            for (l, dl) in d.iter().enumerate().skip(1).take_while(|(l, _)| *l <= j) {
                acc -= dl * &inv[j - l];
            }
            inv.push(acc / &d[0]);
        }
        Ok(inv)
    }

    /// Expansion in `t` valid for all exponents `< order`.
    pub fn series(&self, order: i32) -> Result<PowerSeries> {
        let p = self.p();
        let lo = match self.num.min_exp() {
            Some(lo) => lo,
            None => return Ok(PowerSeries::from_poly(&LaurentPoly::zero(p), order)),
        };
        let len = (order - lo).max(0) as usize;
        let inv = self.inverse_den(len)?;
        let inv_poly = LaurentPoly::from_rational_terms(
            p,
            inv.into_iter().enumerate().map(|(j, c)| (j as i32, c)),
        );
        Ok(PowerSeries::from_poly(&self.num.try_mul(&inv_poly)?, order))
    }

    /// Exact division; errors when `den` does not divide `num`.
    pub fn to_laurent(&self) -> Result<LaurentPoly> {
        let (Some(lo), Some(hi)) = (self.num.min_exp(), self.num.max_exp()) else {
            return Ok(LaurentPoly::zero(self.p()));
        };
        let ddeg = self.den.max_exp().unwrap_or(0);
        let q = self.series(hi - ddeg + 1)?.truncated();
        let back = q.try_mul(&self.den)?;
        if back != self.num || hi - ddeg + 1 < lo {
            return Err(Error::invariant(
                "exact division",
                format!("({}) / ({}) is not a Laurent polynomial", self.num, self.den),
            ));
        }
        Ok(q)
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}
