//! Floating-point views of J*, Q and I*, including Type 3 with a numeric `b`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::local::{jstar, q_factor};
use crate::error::Result;
use crate::exact::{int, LaurentPoly};
use crate::lfactors::l_adjoint_at_1_f64;
use crate::rep::{RepDescriptor, RepInvariants, RepKind, Type3Param};

/// Laurent polynomial in t with real coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatLaurent {
    pub p: u32,
    pub terms: BTreeMap<i32, f64>,
}

impl FloatLaurent {
    pub fn from_exact(a: &LaurentPoly) -> Self {
        FloatLaurent {
            p: a.p(),
            terms: a.terms().map(|(e, c)| (e, c.to_f64())).collect(),
        }
    }

    /// `a + x (b - a)`.
    fn lerp(a: &Self, b: &Self, x: f64) -> Self {
        let mut terms = BTreeMap::new();
        for e in a.terms.keys().chain(b.terms.keys()) {
            let va = a.terms.get(e).copied().unwrap_or(0.0);
            let vb = b.terms.get(e).copied().unwrap_or(0.0);
            terms.insert(*e, va + x * (vb - va));
        }
        terms.retain(|_, v| *v != 0.0);
        FloatLaurent { p: a.p, terms }
    }

    pub fn eval_t(&self, t: Complex64) -> Complex64 {
        self.terms.iter().map(|(e, c)| t.powi(*e) * *c).sum()
    }

    pub fn eval_s(&self, s: Complex64) -> Complex64 {
        self.eval_t((-s * (self.p as f64).ln()).exp())
    }

    /// Coefficients of `t^{-lo} * self` as a dense list from degree 0.
    pub fn dense(&self) -> Vec<f64> {
        let lo = self.terms.keys().next().copied().unwrap_or(0);
        let hi = self.terms.keys().next_back().copied().unwrap_or(0);
        (lo..=hi).map(|e| self.terms.get(&e).copied().unwrap_or(0.0)).collect()
    }
}

/// J*, Q and L(ad, 1) in floating point.
#[derive(Clone, Debug)]
pub struct NumericLocal {
    pub rep: RepDescriptor,
    pub invariants: RepInvariants,
    pub jstar: FloatLaurent,
    pub q: Option<FloatLaurent>,
    pub l_ad_1: f64,
}

impl NumericLocal {
    pub fn new(rep: &RepDescriptor) -> Result<Self> {
        let invariants = rep.validate()?;
        let l_ad_1 = l_adjoint_at_1_f64(rep)?;
        if let RepKind::Type3 { a_beta, b: Type3Param::Numeric(b) } = &rep.kind {
            // J* and Q are affine in b: interpolate between b = 0 and b = 1.
            let at = |v: i64| RepDescriptor::new(rep.p, RepKind::Type3 { a_beta: *a_beta, b: Type3Param::Exact(int(v)) });
            let (r0, r1) = (at(0), at(1));
            let j = FloatLaurent::lerp(
                &FloatLaurent::from_exact(&jstar(&r0)?),
                &FloatLaurent::from_exact(&jstar(&r1)?),
                *b,
            );
            let q = FloatLaurent::lerp(
                &FloatLaurent::from_exact(&q_factor(&r0)?),
                &FloatLaurent::from_exact(&q_factor(&r1)?),
                *b,
            );
            return Ok(NumericLocal { rep: rep.clone(), invariants, jstar: j, q: Some(q), l_ad_1 });
        }
        let q = if invariants.n >= 2 { Some(FloatLaurent::from_exact(&q_factor(rep)?)) } else { None };
        Ok(NumericLocal {
            rep: rep.clone(),
            invariants,
            jstar: FloatLaurent::from_exact(&jstar(rep)?),
            q,
            l_ad_1,
        })
    }

    pub fn jstar_at(&self, s: Complex64) -> Complex64 {
        self.jstar.eval_s(s)
    }

    /// `I*(s) = p^{-n} L(ad,1)^2 Q(s)^2`, or `p^{-n}` for `n <= 1`.
    pub fn istar_at(&self, s: Complex64) -> Complex64 {
        let base = (self.rep.p as f64).powi(-(self.invariants.n as i32));
        match &self.q {
            Some(q) => {
                let v = q.eval_s(s);
                v * v * base * self.l_ad_1 * self.l_ad_1
            }
            None => Complex64::new(base, 0.0),
        }
    }
}
