//! The coefficients T_m of J* and R_m of J, computed two independent ways.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, pow_rat, LaurentPoly, PowerSeries, QSqrtP, Rational};
use crate::lfactors::{column, l_pi_pi};
use crate::rep::{RepDescriptor, RepInvariants, RepKind};

/// T_m (coefficients of J* in `p^{ms}`) and R_m for m >= 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TRTable {
    pub rep: RepDescriptor,
    pub invariants: RepInvariants,
    /// Nonzero T_m only.
    #[serde(serialize_with = "ser_map")]
    pub t: BTreeMap<i32, Rational>,
    /// R_m for 1 <= m <= n.
    #[serde(serialize_with = "ser_map")]
    pub r_pos: BTreeMap<i32, Rational>,
}

fn ser_map<S: serde::Serializer>(m: &BTreeMap<i32, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(&k.to_string(), &v.to_string())?;
    }
    map.end()
}

impl TRTable {
    pub fn t_coeff(&self, m: i32) -> Rational {
        self.t.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    /// `J* = sum_m T_m t^{-m}`.
    pub fn jstar(&self) -> LaurentPoly {
        LaurentPoly::from_rational_terms(self.rep.p, self.t.iter().map(|(m, v)| (-m, v.clone())))
    }
}

fn require_ramified(rep: &RepDescriptor) -> Result<RepInvariants> {
    let inv = rep.validate()?;
    if inv.n < 2 {
        return Err(Error::Unsupported(format!(
            "{rep}: coefficient tables need conductor exponent n >= 2 (use the squarefree or unramified formulas)"
        )));
    }
    Ok(inv)
}

/// `1 / (1 + p^{-1})`.
fn v(p: u32) -> Rational {
    (int(1) + pow_rat(p, -1)).recip()
}

fn beta(rep: &RepDescriptor) -> Result<Rational> {
    match rep.exact_b() {
        Some(b) => Ok(b + int(2)),
        None => Err(Error::Unsupported(format!("{rep}: exact tables need a rational b"))),
    }
}

/// `sum_m T_m p^m`, which must equal `zeta_p(2) / L(pi x pi, 1)`.
pub fn sumtm_target(rep: &RepDescriptor) -> Result<Rational> {
    let value = column(rep)?.eval_rational(&pow_rat(rep.p, -1))?;
    Ok(value.as_rational().expect("rational column").clone())
}

pub fn weighted_sum(p: u32, t: &BTreeMap<i32, Rational>) -> Rational {
    t.iter().map(|(m, v)| v * pow_rat(p, *m)).sum()
}

/// R_m for `m >= 1` in closed form.
pub fn r_closed(rep: &RepDescriptor, m: i32) -> Result<Rational> {
    let inv = require_ramified(rep)?;
    if m < 1 {
        return Err(Error::InvalidInput(format!("r_closed needs m >= 1 (got {m})")));
    }
    let (p, n) = (rep.p, inv.n as i32);
    Ok(if m > n || (m - n) % 2 != 0 {
        Rational::zero()
    } else if m == n {
        pow_rat(p, -n) * v(p)
    } else {
        pow_rat(p, (-n - m) / 2) * (int(1) - pow_rat(p, -1)) * v(p)
    })
}

/// T_m for `m >= 1` via the finite alternating sums over R_{m+r}.
fn t_from_r(rep: &RepDescriptor, n: i32, r: &dyn Fn(i32) -> Rational, m: i32) -> Result<Rational> {
    let p = rep.p;
    // sum_{k >= start} (-1)^k R_{m+k}; R vanishes beyond n
    let alt = |start: i32| -> Rational {
        (start..=(n - m).max(start - 1))
            .map(|k| if k % 2 == 0 { r(m + k) } else { -r(m + k) })
            .sum()
    };
    Ok(match &rep.kind {
        RepKind::Type1 { .. } => r(m),
        RepKind::Type2 { .. } => alt(0),
        RepKind::Type3 { .. } => {
            let b = beta(rep)?;
            r(m) - &b * r(m + 1) - r(m + 2) + int(2) * &b * alt(2)
        }
        RepKind::Type4 { .. } => r(m) + int(2) * alt(1),
        RepKind::Type5 { .. } => r(m) + (int(1) + pow_rat(p, -1)) * alt(1),
        RepKind::Spherical { .. } | RepKind::Level1 => unreachable!(),
    })
}

/// T_m from R_m, then the functional equation `T_{N-m} = p^{m - N/2} T_m`,
/// then the sum rule for T_0 when N = 0.
pub fn t_pipeline(rep: &RepDescriptor) -> Result<TRTable> {
    let inv = require_ramified(rep)?;
    let (p, n, big_n) = (rep.p, inv.n as i32, inv.big_n as i32);
    let mut r_pos = BTreeMap::new();
    for m in 1..=n {
        r_pos.insert(m, r_closed(rep, m)?);
    }
    for m in n + 1..=n + 2 {
        let tail = r_closed(rep, m)?;
        if !tail.is_zero() {
            return Err(Error::invariant("R tail", format!("R_{m} = {tail} beyond n = {n}")));
        }
    }
    let r = |k: i32| r_pos.get(&k).cloned().unwrap_or_else(Rational::zero);

    let mut t: BTreeMap<i32, Rational> = BTreeMap::new();
    for m in 1..=n {
        t.insert(m, t_from_r(rep, n, &r, m)?);
    }
    for m in 1..=n {
        let idx = big_n - m;
        let val = pow_rat(p, m - big_n / 2) * &t[&m];
        if idx >= 1 {
            if t[&idx] != val {
                return Err(Error::invariant(
                    "functional equation on T",
                    format!("{rep}: T_{idx} = {} but p^(m-N/2) T_{m} = {val}", t[&idx]),
                ));
            }
        } else {
            t.insert(idx, val);
        }
    }
    let target = sumtm_target(rep)?;
    if big_n == 0 {
        let rest: Rational = t.iter().filter(|(m, _)| **m != 0).map(|(m, v)| v * pow_rat(p, *m)).sum();
        t.insert(0, &target - rest);
    } else {
        let total = weighted_sum(p, &t);
        if total != target {
            return Err(Error::invariant(
                "sum rule",
                format!("{rep}: sum T_m p^m = {total}, expected {target}"),
            ));
        }
    }
    t.retain(|_, v| !v.is_zero());
    if let Some((m, _)) = t.iter().find(|(m, _)| **m < big_n - n || **m > n) {
        return Err(Error::invariant("T support", format!("{rep}: T_{m} nonzero outside [N-n, n]")));
    }
    Ok(TRTable { rep: rep.clone(), invariants: inv, t, r_pos })
}

/// The explicit per-type formulas for T_m.
pub fn t_closed(rep: &RepDescriptor) -> Result<TRTable> {
    let inv = require_ramified(rep)?;
    let (p, n, big_n) = (rep.p, inv.n as i32, inv.big_n as i32);
    let v = v(p);
    let pw = |e: i32| pow_rat(p, e);
    let mut t = BTreeMap::new();
    match &rep.kind {
        RepKind::Type1 { .. } => {
            for m in big_n - n..=n {
                let val = if (m - n) % 2 != 0 {
                    Rational::zero()
                } else if m == n {
                    pw(-n) * &v
                } else if m == big_n - n {
                    pw(-big_n / 2) * &v
                } else {
                    pw((-n - m) / 2) * (int(1) - pw(-1)) * &v
                };
                t.insert(m, val);
            }
        }
        RepKind::Type2 { .. } => {
            for m in big_n - n..=n {
                let sign = if (m + n).rem_euclid(2) == 0 { int(1) } else { int(-1) };
                t.insert(m, sign * pw((-m - n).div_euclid(2)) * &v);
            }
        }
        RepKind::Type4 { .. } | RepKind::Type5 { .. } => {
            let type4 = matches!(rep.kind, RepKind::Type4 { .. });
            t.insert(n, pw(-n) * &v);
            t.insert(big_n - n, pw(-big_n / 2) * &v);
            for m in (big_n - n + 1)..n {
                let val = match ((m - n) % 2 == 0, type4) {
                    (true, true) => pw((-n - m) / 2),
                    (true, false) => pw((-n - m) / 2) * (int(1) + pw(-2)) * &v,
                    (false, true) => int(-2) * pw((-n - m - 1) / 2) * &v,
                    (false, false) => -pw((-n - m - 1) / 2),
                };
                t.insert(m, val);
            }
        }
        RepKind::Type3 { .. } => {
            let b = beta(rep)?;
            if p != 2 {
                t.insert(2, pw(-2) * &v);
                t.insert(1, -&b * pw(-2) * &v);
                t.insert(-1, -&b * pw(-1) * &v);
                t.insert(-2, v.clone());
                t.insert(0, pw(-1) * (int(1) - int(2) * pw(-1) - pw(-2) + int(2) * &b * pw(-1)) * &v);
            } else {
                // R_m = p^{-(n+m)/2} (1-1/p) v for even m < n, R_n = p^{-n} v,
                // S_m = sum_{j>=1} R_{m+2j} = p^{-(n+m)/2 - 1} v for even m < n.
                let r = |m: i32| -> Rational {
                    if m > n || (m - n) % 2 != 0 {
                        Rational::zero()
                    } else if m == n {
                        pw(-n) * &v
                    } else {
                        pw((-n - m) / 2) * (int(1) - pw(-1)) * &v
                    }
                };
                let s = |m: i32| if m < n { pw((-n - m) / 2 - 1) * &v } else { Rational::zero() };
                for m in 1..=n {
                    let val = if m % 2 == 0 {
                        r(m) - r(m + 2) + int(2) * &b * s(m)
                    } else {
                        -&b * (r(m + 1) + int(2) * s(m + 1))
                    };
                    t.insert(-m, pw(m) * &val);
                    t.insert(m, val);
                }
                let rest = weighted_sum(p, &t);
                t.insert(0, sumtm_target(rep)? - rest);
            }
        }
        RepKind::Spherical { .. } | RepKind::Level1 => unreachable!(),
    }
    t.retain(|_, v| !v.is_zero());
    let mut r_pos = BTreeMap::new();
    for m in 1..=n {
        r_pos.insert(m, r_closed(rep, m)?);
    }
    Ok(TRTable { rep: rep.clone(), invariants: inv, t, r_pos })
}

/// `J = J* L(pi x pi, s) / zeta_p(2s)` expanded in t; the coefficient of `t^k` is `R_{-k}`.
pub fn j_series(rep: &RepDescriptor, jstar: &LaurentPoly, order: i32) -> Result<PowerSeries> {
    let one_minus_t2 = LaurentPoly::from_rational_terms(rep.p, [(0, int(1)), (2, int(-1))]);
    let f = l_pi_pi(rep)?.mul_poly(&jstar.try_mul(&one_minus_t2)?)?;
    f.series(order)
}

/// R_m for `0 >= m >= -depth`, read off the expansion of J.
pub fn r_negative(rep: &RepDescriptor, jstar: &LaurentPoly, depth: i32) -> Result<Vec<Rational>> {
    let series = j_series(rep, jstar, depth + 1)?;
    (0..=depth)
        .map(|k| {
            let c = series.coeff(k).expect("within order");
            c.as_rational()
                .cloned()
                .ok_or_else(|| Error::invariant("R rationality", format!("R_{} = {c}", -k)))
        })
        .collect()
}

/// Value of `J` at `s = 1`.
pub fn j_at_one(rep: &RepDescriptor, jstar: &LaurentPoly) -> Result<QSqrtP> {
    let one_minus_t2 = LaurentPoly::from_rational_terms(rep.p, [(0, int(1)), (2, int(-1))]);
    l_pi_pi(rep)?
        .mul_poly(&jstar.try_mul(&one_minus_t2)?)?
        .eval_rational(&pow_rat(rep.p, -1))
}

pub fn is_one(q: &QSqrtP) -> bool {
    q.is_rational() && q.a.is_one()
}
