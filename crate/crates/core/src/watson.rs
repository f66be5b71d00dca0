//! Level-wide assembly: the local constant of the Watson-type formula and
//! the conductor-dependent bound factor.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{exact_sqrt, factorize, omega, tau};
use crate::error::{Error, Result};
use crate::exact::{int, parse_rational, LaurentPoly, QSqrtP, Rational};
use crate::lfactors::{l_adjoint_at_1, l_adjoint_at_1_f64};
use crate::rankin_selberg::{q_factor, NumericLocal};
use crate::rep::{RepDescriptor, RepKind, Type3Param};

/// One local representation per prime dividing the level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelSpec {
    pub reps: BTreeMap<u32, RepDescriptor>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelInvariants {
    pub q: u64,
    /// Largest squarefree divisor.
    pub q0: u64,
    /// Largest integer whose square divides q.
    pub q_diamond: u64,
    /// Product of the adjoint conductors.
    #[serde(rename = "C")]
    pub big_c: u64,
    pub sqrt_c: u64,
}

fn parse_u32(s: &str, what: &str) -> Result<u32> {
    s.trim().parse().map_err(|_| Error::InvalidInput(format!("bad {what}: {s:?}")))
}

/// Parses one descriptor such as `type1,1,1`, `level1`, `type3,1,5/2`, `spherical,1/2`.
pub fn parse_descriptor(p: u32, text: &str) -> Result<RepDescriptor> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let arg = |i: usize, what: &str| -> Result<u32> {
        parts
            .get(i)
            .ok_or_else(|| Error::InvalidInput(format!("{text:?}: missing {what}")))
            .and_then(|s| parse_u32(s, what))
    };
    let expect_len = |n: usize| -> Result<()> {
        if parts.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("{text:?}: expected {} parameters", n - 1)))
        }
    };
    let kind = match parts[0].to_ascii_lowercase().as_str() {
        "level1" => {
            expect_len(1)?;
            RepKind::Level1
        }
        "spherical" => RepKind::Spherical {
            satake_trace: match parts.get(1) {
                Some(s) => Some(parse_rational(s).ok_or_else(|| Error::InvalidInput(format!("bad trace {s:?}")))?),
                None => None,
            },
        },
        "type1" => {
            expect_len(3)?;
            RepKind::Type1 { a_xi: arg(1, "a_xi")?, a_xi_sq: arg(2, "a_xi_sq")? }
        }
        "type2" => {
            expect_len(3)?;
            RepKind::Type2 { n: arg(1, "n")?, big_n: arg(2, "N")? }
        }
        "type3" => {
            expect_len(3)?;
            let b = parse_rational(parts[2]).ok_or_else(|| Error::InvalidInput(format!("bad b {:?}", parts[2])))?;
            RepKind::Type3 { a_beta: arg(1, "a_beta")?, b: Type3Param::Exact(b) }
        }
        "type4" => {
            expect_len(3)?;
            RepKind::Type4 { a_beta: arg(1, "a_beta")?, a_beta_sq: arg(2, "a_beta_sq")? }
        }
        "type5" => {
            expect_len(2)?;
            RepKind::Type5 { a_beta: arg(1, "a_beta")? }
        }
        other => return Err(Error::InvalidInput(format!("unknown kind {other:?}"))),
    };
    let rep = RepDescriptor::new(p, kind);
    rep.validate()?;
    Ok(rep)
}

impl LevelSpec {
    pub fn new(reps: impl IntoIterator<Item = RepDescriptor>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for rep in reps {
            let inv = rep.validate()?;
            if inv.n == 0 {
                return Err(Error::InvalidInput(format!("{rep}: unramified primes do not belong in a level")));
            }
            if map.insert(rep.p, rep.clone()).is_some() {
                return Err(Error::InvalidInput(format!("prime {} given twice", rep.p)));
            }
        }
        Ok(LevelSpec { reps: map })
    }

    /// Grammar: `p:kind[,params];p:kind[,params];...`, e.g. `2:type1,1,1;3:level1`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut reps = Vec::new();
        for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (p, desc) = item
                .split_once(':')
                .ok_or_else(|| Error::InvalidInput(format!("{item:?}: expected p:kind")))?;
            reps.push(parse_descriptor(parse_u32(p, "prime")?, desc)?);
        }
        Self::new(reps)
    }

    /// The level `q` with the given ramified data; primes exactly dividing `q`
    /// without a descriptor are taken to be `Level1`.
    pub fn for_level(q: u64, reps: impl IntoIterator<Item = RepDescriptor>) -> Result<Self> {
        let mut spec = Self::new(reps)?;
        for (p, e) in factorize(q) {
            let p32 = p as u32;
            match spec.reps.get(&p32) {
                Some(rep) => {
                    let n = rep.validate()?.n;
                    if n != e {
                        return Err(Error::InvalidInput(format!("{rep}: conductor p^{n} but p^{e} || q")));
                    }
                }
                None if e == 1 => {
                    spec.reps.insert(p32, RepDescriptor::new(p32, RepKind::Level1));
                }
                None => return Err(Error::InvalidInput(format!("missing descriptor at p = {p} (p^{e} || q)"))),
            }
        }
        if let Some(p) = spec.reps.keys().find(|p| !q.is_multiple_of(**p as u64)) {
            return Err(Error::InvalidInput(format!("descriptor at p = {p} but p does not divide q = {q}")));
        }
        Ok(spec)
    }

    pub fn invariants(&self) -> Result<LevelInvariants> {
        let (mut q, mut q0, mut qd, mut big_c) = (1u64, 1u64, 1u64, 1u64);
        let overflow = || Error::InvalidInput("level does not fit in 64 bits".into());
        for rep in self.reps.values() {
            let inv = rep.validate()?;
            let p = rep.p as u64;
            q = q.checked_mul(inv.conductor).ok_or_else(overflow)?;
            q0 *= p;
            qd *= p.pow(inv.n / 2);
            big_c = big_c.checked_mul(inv.ad_conductor).ok_or_else(overflow)?;
        }
        let sqrt_c = exact_sqrt(big_c)
            .ok_or_else(|| Error::invariant("C is a square", format!("C = {big_c}")))?;
        if q % sqrt_c != 0 {
            return Err(Error::invariant("sqrt(C) divides q", format!("q = {q}, sqrt C = {sqrt_c}")));
        }
        Ok(LevelInvariants { q, q0, q_diamond: qd, big_c, sqrt_c })
    }

    /// Primes with `p^2 | q`.
    pub fn diamond_primes(&self) -> impl Iterator<Item = &RepDescriptor> {
        self.reps.values().filter(|r| r.validate().map(|i| i.n >= 2).unwrap_or(false))
    }
}

/// `(1/(8q)) prod_{p | q_diamond} (L_p(ad, 1) Q_p(s))^2`.
pub fn watson_constant(level: &LevelSpec, s: Complex64) -> Result<Complex64> {
    let inv = level.invariants()?;
    let mut acc = Complex64::new(1.0 / (8.0 * inv.q as f64), 0.0);
    for rep in level.diamond_primes() {
        let local = NumericLocal::new(rep)?;
        let q = local.q.as_ref().expect("n >= 2").eval_s(s);
        let l = l_adjoint_at_1_f64(rep)?;
        acc *= (q * l) * (q * l);
    }
    Ok(acc)
}

/// `f(t)` at `t = p^{-1/2}`, exactly.
pub fn eval_at_half(f: &LaurentPoly) -> QSqrtP {
    let p = f.p();
    f.terms().fold(QSqrtP::zero(p), |acc, (e, c)| acc + c * &QSqrtP::p_half_power(p, -e))
}

/// Exact per-prime factors `(L_p(ad,1) Q_p(1/2))^2` and, when they are all
/// rational, the full constant at `s = 1/2`.
#[derive(Clone, Debug, Serialize)]
pub struct ExactWatson {
    pub local_factors: BTreeMap<u32, QSqrtP>,
    pub constant: Option<String>,
}

pub fn watson_constant_at_half(level: &LevelSpec) -> Result<ExactWatson> {
    let inv = level.invariants()?;
    let mut local_factors = BTreeMap::new();
    let mut total = Rational::new(1.into(), (8 * inv.q as i64).into());
    let mut rational = true;
    for rep in level.diamond_primes() {
        let l = l_adjoint_at_1(rep)?;
        let q = eval_at_half(&q_factor(rep)?).scale(&l);
        let sq = &q * &q;
        match sq.as_rational() {
            Some(r) => total *= r,
            None => rational = false,
        }
        local_factors.insert(rep.p, sq);
    }
    Ok(ExactWatson { local_factors, constant: rational.then(|| total.to_string()) })
}

/// Exact part of the bound factor: `q^{-1} 30^{omega(m)} tau(m)` and `m = q / sqrt C`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundFactor {
    pub prefactor: String,
    pub base: u64,
    #[serde(skip)]
    pub prefactor_exact: Rational,
}

impl BoundFactor {
    pub fn value(&self, theta: f64) -> f64 {
        crate::exact::to_f64(&self.prefactor_exact) * (self.base as f64).powf(2.0 * theta)
    }
}

pub fn bound_factor_exact(level: &LevelSpec) -> Result<BoundFactor> {
    let inv = level.invariants()?;
    let m = inv.q / inv.sqrt_c;
    let pre = num_traits::pow(int(30), omega(m) as usize) * int(tau(m) as i64)
        / int(inv.q as i64);
    Ok(BoundFactor { prefactor: pre.to_string(), base: m, prefactor_exact: pre })
}

/// `q^{-1} 30^{omega(q/sqrt C)} tau(q/sqrt C) (q/sqrt C)^{2 theta}`.
pub fn bound_factor(level: &LevelSpec, theta: f64) -> Result<f64> {
    if !(0.0..=7.0 / 64.0).contains(&theta) {
        return Err(Error::InvalidInput(format!("theta = {theta} outside [0, 7/64]")));
    }
    Ok(bound_factor_exact(level)?.value(theta))
}
