//! Local L-factors as rational functions of `t = p^{-s}`.

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, pow_rat, LaurentPoly, Rational, RationalFunc};
use crate::rep::{RepDescriptor, RepKind, Type3Param};

fn poly(p: u32, terms: &[(i32, Rational)]) -> LaurentPoly {
    LaurentPoly::from_rational_terms(p, terms.iter().cloned())
}

/// `1 - c t`.
fn linear(p: u32, c: Rational) -> LaurentPoly {
    poly(p, &[(0, Rational::one()), (1, -c)])
}

/// `1 - c t + t^2`.
fn quadratic(p: u32, c: &Rational) -> LaurentPoly {
    poly(p, &[(0, Rational::one()), (1, -c.clone()), (2, Rational::one())])
}

/// `zeta_p(s + shift) = 1 / (1 - p^{-shift} t)`.
pub fn zeta_factor(p: u32, shift: i32) -> RationalFunc {
    RationalFunc::reciprocal(linear(p, pow_rat(p, -shift))).expect("nonzero denominator")
}

/// `zeta_p(2s) = 1 / (1 - t^2)`.
pub fn zeta_2s(p: u32) -> RationalFunc {
    RationalFunc::reciprocal(poly(p, &[(0, int(1)), (2, int(-1))])).expect("nonzero denominator")
}

fn exact_b(rep: &RepDescriptor) -> Result<&Rational> {
    match &rep.kind {
        RepKind::Type3 { b: Type3Param::Exact(b), .. } => Ok(b),
        RepKind::Type3 { b: Type3Param::Numeric(_), .. } => Err(Error::Unsupported(
            "exact L-factors need a rational b; use the numeric evaluators".into(),
        )),
        _ => unreachable!(),
    }
}

fn satake(rep: &RepDescriptor) -> Result<&Rational> {
    match &rep.kind {
        RepKind::Spherical { satake_trace: Some(c) } => Ok(c),
        _ => Err(Error::Unsupported(
            "unramified representation without Satake data".into(),
        )),
    }
}

/// `zeta_p(2s) / L(pi x pi, s)`.
pub fn column(rep: &RepDescriptor) -> Result<RationalFunc> {
    rep.validate()?;
    let p = rep.p;
    let one_plus_t = poly(p, &[(0, int(1)), (1, int(1))]);
    let one_minus_t = linear(p, int(1));
    let num = match &rep.kind {
        RepKind::Type1 { .. } => return Ok(RationalFunc::from_poly(LaurentPoly::one(p))),
        RepKind::Type2 { .. } => LaurentPoly::one(p),
        RepKind::Type3 { .. } => &one_minus_t * &quadratic(p, exact_b(rep)?),
        RepKind::Type4 { .. } => one_minus_t,
        RepKind::Type5 { .. } | RepKind::Level1 => linear(p, pow_rat(p, -1)),
        RepKind::Spherical { .. } => &one_minus_t * &quadratic(p, satake(rep)?),
    };
    RationalFunc::new(num, one_plus_t)
}

/// `L(pi x pi, s)`.
pub fn l_pi_pi(rep: &RepDescriptor) -> Result<RationalFunc> {
    rep.validate()?;
    let p = rep.p;
    let one_minus_t = linear(p, int(1));
    let den = match &rep.kind {
        RepKind::Type1 { .. } => return Ok(zeta_2s(p)),
        RepKind::Type2 { .. } => one_minus_t,
        RepKind::Type3 { .. } => &one_minus_t.pow(2) * &quadratic(p, exact_b(rep)?),
        RepKind::Type4 { .. } => one_minus_t.pow(2),
        RepKind::Type5 { .. } | RepKind::Level1 => &one_minus_t * &linear(p, pow_rat(p, -1)),
        RepKind::Spherical { .. } => &one_minus_t.pow(2) * &quadratic(p, satake(rep)?),
    };
    RationalFunc::reciprocal(den)
}

/// `L(ad pi, s) = L(pi x pi, s) / zeta_p(s)`.
pub fn l_adjoint(rep: &RepDescriptor) -> Result<RationalFunc> {
    l_pi_pi(rep)?.mul_poly(&linear(rep.p, int(1)))
}

/// `L(ad pi, 1)`, exact.
pub fn l_adjoint_at_1(rep: &RepDescriptor) -> Result<Rational> {
    let v = l_adjoint(rep)?.eval_rational(&pow_rat(rep.p, -1))?;
    Ok(v.as_rational().expect("rational L-factor").clone())
}

/// `L(ad pi, 1)` in floating point; also covers a numeric Type 3 parameter.
pub fn l_adjoint_at_1_f64(rep: &RepDescriptor) -> Result<f64> {
    if let RepKind::Type3 { b: Type3Param::Numeric(b), .. } = &rep.kind {
        rep.validate()?;
        let x = 1.0 / rep.p as f64;
        return Ok(1.0 / ((1.0 - x) * (1.0 - b * x + x * x)));
    }
    Ok(crate::exact::to_f64(&l_adjoint_at_1(rep)?))
}

/// The closed form of J for squarefree level:
/// `p^{-1} t^{-1} zeta_p(s) zeta_p(s+1) / (zeta_p(2s) zeta_p(1))`.
pub fn j_squarefree(p: u32) -> RationalFunc {
    let num = poly(p, &[(-1, int(1)), (1, int(-1))]).scale_rational(&(pow_rat(p, -1) * (int(1) - pow_rat(p, -1))));
    let den = &linear(p, int(1)) * &linear(p, pow_rat(p, -1));
    RationalFunc::new(num, den).expect("nonzero denominator")
}

/// The pair of local L-factors attached to a representation.
#[derive(Clone, Debug, Serialize)]
pub struct LocalLFactor {
    pub rep: RepDescriptor,
    pub rankin_selberg: String,
    pub adjoint: String,
    #[serde(skip)]
    pub rankin_selberg_fn: RationalFunc,
    #[serde(skip)]
    pub adjoint_fn: RationalFunc,
}

impl LocalLFactor {
    pub fn of(rep: &RepDescriptor) -> Result<Self> {
        let rs = l_pi_pi(rep)?;
        let ad = l_adjoint(rep)?;
        Ok(LocalLFactor {
            rep: rep.clone(),
            rankin_selberg: rs.to_string(),
            adjoint: ad.to_string(),
            rankin_selberg_fn: rs,
            adjoint_fn: ad,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::rep::enumerate_reps;
    use num_complex::Complex64;

    fn rep(p: u32, kind: RepKind) -> RepDescriptor {
        RepDescriptor::new(p, kind)
    }

    #[test]
    fn zeta_factors() {
        assert_eq!(zeta_factor(2, 0).den(), &linear(2, int(1)));
        assert_eq!(zeta_factor(2, 1).den(), &linear(2, rat(1, 2)));
        assert_eq!(zeta_2s(2).den(), &poly(2, &[(0, int(1)), (2, int(-1))]));
    }

    #[test]
    fn documented_l_factors() {
        assert_eq!(l_pi_pi(&rep(2, RepKind::Type1 { a_xi: 1, a_xi_sq: 1 })).unwrap(), zeta_2s(2));
        assert_eq!(l_pi_pi(&rep(7, RepKind::Type2 { n: 2, big_n: 2 })).unwrap(), zeta_factor(7, 0));
        let t5 = l_pi_pi(&rep(3, RepKind::Type5 { a_beta: 1 })).unwrap();
        assert_eq!(t5, zeta_factor(3, 0).try_mul(&zeta_factor(3, 1)).unwrap());
    }

    #[test]
    fn adjoint_values() {
        assert_eq!(l_adjoint_at_1(&rep(2, RepKind::Type1 { a_xi: 1, a_xi_sq: 1 })).unwrap(), rat(2, 3));
        for p in [2, 3, 5] {
            assert_eq!(l_adjoint_at_1(&rep(p, RepKind::Type2 { n: 3, big_n: 4 })).unwrap(), int(1));
        }
        assert_eq!(l_adjoint_at_1(&rep(3, RepKind::Type5 { a_beta: 1 })).unwrap(), rat(9, 8));
        assert!(l_pi_pi(&rep(3, RepKind::Spherical { satake_trace: None })).is_err());
    }

    fn rf_equal(a: &RationalFunc, b: &RationalFunc) -> bool {
        a.num().try_mul(b.den()).unwrap() == b.num().try_mul(a.den()).unwrap()
    }

    #[test]
    fn factorizations_hold_for_every_type() {
        for p in [2, 3, 5, 7] {
            let mut reps = enumerate_reps(p, 6, &[int(-2), int(0), rat(5, 2)]);
            reps.retain(|r| !matches!(r.kind, RepKind::Spherical { .. }));
            reps.push(rep(p, RepKind::Spherical { satake_trace: Some(rat(1, 2)) }));
            for r in reps {
                let col = column(&r).unwrap();
                let lhs = l_pi_pi(&r).unwrap().try_mul(&col).unwrap();
                assert!(rf_equal(&lhs, &zeta_2s(p)), "{r}");
                let ad = l_adjoint(&r).unwrap().try_mul(&zeta_factor(p, 0)).unwrap();
                assert!(rf_equal(&ad, &l_pi_pi(&r).unwrap()), "{r}");
                assert!(l_adjoint_at_1(&r).unwrap() > int(0), "{r}");
            }
        }
    }

    #[test]
    fn squarefree_j() {
        for p in [2, 3, 5] {
            let j = j_squarefree(p);
            assert_eq!(j.eval_rational(&pow_rat(p, -1)).unwrap().a, int(1));
        }
        // numeric value at s = 1/2, p = 2
        let z = |x: f64| 1.0 / (1.0 - x);
        let expect = 2f64.powf(-0.5) * z(2f64.powf(-0.5)) * z(2f64.powf(-1.5)) / (z(0.5) * z(0.5));
        let got = j_squarefree(2).eval_s(Complex64::new(0.5, 0.0));
        assert!((got.re - expect).abs() < 1e-14 && got.im.abs() < 1e-14);
    }
}
