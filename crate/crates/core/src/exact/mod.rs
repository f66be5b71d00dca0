//! Exact arithmetic: rationals, the quadratic field Q(sqrt p), Laurent
//! polynomials in t = p^{-s}, truncated power series and rational functions.

mod laurent;
mod qsqrtp;
mod series;

pub use laurent::LaurentPoly;
pub use qsqrtp::QSqrtP;
pub use series::{PowerSeries, RationalFunc};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p^e` for any integer exponent.
pub fn pow_rat(p: u32, e: i32) -> Rational {
    let base = Rational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"a"`, `"a/b"` or a decimal literal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = whole.starts_with('-');
        let w: BigInt = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            whole.parse().ok()?
        };
        let f: BigInt = frac.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part = Rational::new(f, scale);
        let w = Rational::from_integer(w.abs());
        let v = w + frac_part;
        return Some(if neg { -v } else { v });
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

pub fn is_one(r: &Rational) -> bool {
    r.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("5/2"), Some(rat(5, 2)));
        assert_eq!(parse_rational("-3"), Some(int(-3)));
        assert_eq!(parse_rational("-0.25"), Some(rat(-1, 4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn powers() {
        assert_eq!(pow_rat(3, -2), rat(1, 9));
        assert_eq!(pow_rat(2, 5), int(32));
        assert_eq!(pow_rat(7, 0), int(1));
    }
}
