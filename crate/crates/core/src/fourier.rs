//! Mean-square Fourier coefficients of a newform at the cusps of Gamma0(q)
//! and the reconstruction of J from cusp data.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{valuation, factorize};
use crate::cusps::enumerate_cusps;
use crate::error::{Error, Result};
use crate::exact::{int, pow_rat, to_f64, LaurentPoly, PowerSeries, QSqrtP, Rational};
use crate::rankin_selberg::{j_series, jstar, Check};
use crate::rep::RepDescriptor;
use crate::watson::LevelSpec;

/// `lambda_{[c],p}(p^k)^2` for `0 <= k <= k_max` at a cusp whose denominator has p-part `p^c_exp`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuspFourierProfile {
    pub rep: RepDescriptor,
    pub q_exp: u32,
    pub c_exp: u32,
    #[serde(serialize_with = "ser_values")]
    pub values_sq: BTreeMap<u32, Rational>,
}

fn ser_values<S: serde::Serializer>(m: &BTreeMap<u32, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(&k.to_string(), &v.to_string())?;
    }
    map.end()
}

impl CuspFourierProfile {
    pub fn get(&self, k: u32) -> Rational {
        self.values_sq.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `(k, lambda^2, lambda)` rows.
    pub fn rows(&self) -> Vec<(u32, Rational, f64)> {
        self.values_sq.iter().map(|(k, v)| (*k, v.clone(), to_f64(v).sqrt())).collect()
    }
}

/// The profile for `k = 0..=k_max`; computes the J expansion at most once.
pub fn fourier_profile(rep: &RepDescriptor, c_exp: u32, k_max: u32) -> Result<CuspFourierProfile> {
    let inv = rep.validate()?;
    let (p, n) = (rep.p, inv.n);
    if n == 0 {
        return Err(Error::InvalidInput(format!("{rep}: p does not divide the level")));
    }
    if c_exp > n {
        return Err(Error::InvalidInput(format!("c_p = p^{c_exp} does not divide q_p = p^{n}")));
    }
    let mut values_sq = BTreeMap::new();
    if n == 1 {
        for k in 0..=k_max {
            values_sq.insert(k, pow_rat(p, -(k as i32)));
        }
    } else if 2 * c_exp != n {
        for k in 0..=k_max {
            values_sq.insert(k, if k == 0 { int(1) } else { Rational::zero() });
        }
    } else {
        let series = j_series(rep, &jstar(rep)?, k_max as i32 + 1)?;
        let ratio = (int(1) + pow_rat(p, -1)) / (int(1) - pow_rat(p, -1));
        let sqrt_q = pow_rat(p, (n / 2) as i32);
        for k in 0..=k_max {
            let r = series.coeff(k as i32).expect("within order");
            let r = r.as_rational().expect("rational R").clone();
            let inner = if k == 0 { &sqrt_q * r - int(1) / int(p as i64 + 1) } else { &sqrt_q * r };
            values_sq.insert(k, &ratio * inner);
        }
    }
    Ok(CuspFourierProfile { rep: rep.clone(), q_exp: n, c_exp, values_sq })
}

/// `lambda_{[c],p}(p^k)^2` with `q_p = p^q_exp` and `c_p = p^c_exp`.
pub fn lambda_sq_local(rep: &RepDescriptor, q_exp: u32, c_exp: u32, k: u32) -> Result<Rational> {
    let n = rep.validate()?.n;
    if n != q_exp {
        return Err(Error::InvalidInput(format!("{rep}: conductor exponent {n} differs from q_p = p^{q_exp}")));
    }
    Ok(fourier_profile(rep, c_exp, k)?.get(k))
}

/// `lambda_{[c]}(m)^2` as a product of local factors. `unramified` supplies
/// `lambda_f(p^k)^2`, keyed by the prime power, at primes not dividing q.
pub fn lambda_sq_composite(level: &LevelSpec, c: u64, m: u64, unramified: &BTreeMap<u64, Rational>) -> Result<Rational> {
    let q = level.invariants()?.q;
    if c == 0 || q % c != 0 {
        return Err(Error::InvalidInput(format!("{c} does not divide q = {q}")));
    }
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let mut acc = int(1);
    for (p, k) in factorize(m) {
        match level.reps.get(&(p as u32)) {
            Some(rep) => {
                let n = rep.validate()?.n;
                acc *= lambda_sq_local(rep, n, valuation(c, p), k)?;
            }
            None => {
                let pk = p.pow(k);
                let v = unramified
                    .get(&pk)
                    .ok_or_else(|| Error::InvalidInput(format!("missing unramified coefficient at p = {p} (p^k = {pk})")))?;
                acc *= v;
            }
        }
    }
    Ok(acc)
}

/// Nonnegativity, Atkin-Lehner symmetry and purity of the local profiles.
pub fn purity_and_symmetry_check(rep: &RepDescriptor, k_max: u32) -> Result<Vec<Check>> {
    let n = rep.validate()?.n;
    if n < 2 {
        return Ok(vec![Check::new("purity", true, "skipped: p^2 does not divide q")]);
    }
    let profiles: Vec<CuspFourierProfile> = (0..=n).map(|j| fourier_profile(rep, j, k_max)).collect::<Result<_>>()?;
    let mut negatives = Vec::new();
    let mut asym = Vec::new();
    let mut impure = Vec::new();
    for prof in &profiles {
        for (k, v) in &prof.values_sq {
            if *v < Rational::zero() {
                negatives.push(format!("c=p^{} k={k}: {v}", prof.c_exp));
            }
            let expected = if *k == 0 { int(1) } else { Rational::zero() };
            if 2 * prof.c_exp != n && *v != expected {
                impure.push(format!("c=p^{} k={k}: {v}", prof.c_exp));
            }
        }
        let dual = &profiles[(n - prof.c_exp) as usize];
        if dual.values_sq != prof.values_sq {
            asym.push(format!("p^{} vs p^{}", prof.c_exp, dual.c_exp));
        }
    }
    Ok(vec![
        Check::new("lambda^2 nonnegative", negatives.is_empty(), negatives.join(", ")),
        Check::new("Atkin-Lehner symmetry", asym.is_empty(), asym.join(", ")),
        Check::new("purity", impure.is_empty(), impure.join(", ")),
    ])
}

/// J assembled from cusp widths and mean-square Fourier coefficients:
/// `psi(q)^{-1} sum_cusps width^s sum_k lambda_{[c],p}(p^k)^2 t^k`, valid for exponents `< depth`.
pub fn iwasawa_j(rep: &RepDescriptor, depth: i32) -> Result<PowerSeries> {
    let inv = rep.validate()?;
    if inv.n < 2 {
        return Err(Error::Unsupported(format!("{rep}: reconstruction needs n >= 2")));
    }
    let (p, n) = (rep.p, inv.n);
    let q = inv.conductor;
    let cusps = enumerate_cusps(q)?;
    let k_max = (depth + n as i32).max(0) as u32;
    let profiles: Vec<CuspFourierProfile> = (0..=n).map(|j| fourier_profile(rep, j, k_max)).collect::<Result<_>>()?;
    let mut acc = LaurentPoly::zero(p);
    for cusp in &cusps {
        let j = valuation(cusp.c, p as u64);
        let w = valuation(cusp.width, p as u64) as i32;
        for (k, v) in &profiles[j as usize].values_sq {
            acc.add_term(*k as i32 - w, QSqrtP::rational(v.clone(), p));
        }
    }
    let acc = acc.scale_rational(&Rational::new(1.into(), (crate::cusps::index_psi(q) as i64).into()));
    Ok(PowerSeries::from_poly(&acc, depth))
}

/// Compares the cusp reconstruction with the expansion of J through `depth`.
pub fn iwasawa_check(rep: &RepDescriptor, depth: i32) -> Result<Check> {
    let from_cusps = iwasawa_j(rep, depth)?;
    let direct = j_series(rep, &jstar(rep)?, depth)?;
    let lo = -(rep.validate()?.n as i32) - 1;
    for e in lo..depth {
        let (a, b) = (from_cusps.coeff(e).unwrap(), direct.coeff(e).unwrap());
        if a != b {
            return Err(Error::invariant(
                "cusp reconstruction of J",
                format!("{rep}: coefficient of t^{e}: {a} from cusps vs {b} from J*"),
            ));
        }
    }
    Ok(Check::new("cusp reconstruction of J", true, "0"))
}

#[derive(Clone, Debug, Serialize)]
pub struct DeligneRow {
    pub k: u32,
    /// Maximum of `lambda^2` over all denominators.
    pub lambda_sq_max: String,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub normalized: f64,
    pub tau_sq: u64,
    pub exceeds_deligne: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeligneReport {
    pub descriptor: RepDescriptor,
    pub rows: Vec<DeligneRow>,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub max_normalized: f64,
}

/// `lambda^2 p^{-k/2}` for `0 <= k <= n - N` with failures of `lambda^2 <= tau(p^k)^2` flagged.
pub fn deligne_violation_report(rep: &RepDescriptor) -> Result<DeligneReport> {
    let inv = rep.validate()?;
    if inv.n < 2 {
        return Err(Error::InvalidInput(format!("{rep}: needs p^2 | q")));
    }
    let k_max = inv.n.saturating_sub(inv.big_n);
    let profiles: Vec<CuspFourierProfile> = (0..=inv.n).map(|j| fourier_profile(rep, j, k_max)).collect::<Result<_>>()?;
    let rows: Vec<DeligneRow> = (0..=k_max)
        .map(|k| {
            let max = profiles.iter().map(|pr| pr.get(k)).max().unwrap();
            let normalized = to_f64(&max) * (rep.p as f64).powf(-(k as f64) / 2.0);
            let tau_sq = (k as u64 + 1).pow(2);
            DeligneRow {
                k,
                exceeds_deligne: max > int(tau_sq as i64),
                lambda_sq_max: max.to_string(),
                normalized,
                tau_sq,
            }
        })
        .collect();
    let max_normalized = rows.iter().map(|r| r.normalized).fold(0.0, f64::max);
    Ok(DeligneReport { descriptor: rep.clone(), rows, max_normalized })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::rep::{RepKind, Type3Param};

    fn rep(p: u32, kind: RepKind) -> RepDescriptor {
        RepDescriptor::new(p, kind)
    }

    #[test]
    fn documented_local_values() {
        for p in [2, 3, 5] {
            assert_eq!(lambda_sq_local(&rep(p, RepKind::Level1), 1, 1, 2).unwrap(), pow_rat(p, -2));
            let t2 = rep(p, RepKind::Type2 { n: 3, big_n: 4 });
            assert_eq!(lambda_sq_local(&t2, 3, 1, 1).unwrap(), int(0));
            let t1 = rep(p, RepKind::Type1 { a_xi: 1, a_xi_sq: 1 });
            let got: Vec<Rational> = (0..=2).map(|k| lambda_sq_local(&t1, 2, 1, k).unwrap()).collect();
            assert_eq!(got, vec![int(1), int(0), int(0)]);
        }
        let t1 = rep(2, RepKind::Type1 { a_xi: 1, a_xi_sq: 1 });
        assert!(lambda_sq_local(&t1, 2, 3, 0).is_err());
    }

    #[test]
    fn documented_composites() {
        let l = LevelSpec::parse("3:type1,1,1").unwrap();
        assert_eq!(lambda_sq_composite(&l, 3, 1, &BTreeMap::new()).unwrap(), int(1));
        let l = LevelSpec::parse("2:level1;3:type1,1,1").unwrap();
        assert_eq!(lambda_sq_composite(&l, 6, 2, &BTreeMap::new()).unwrap(), rat(1, 2));
        let sq = LevelSpec::for_level(30, []).unwrap();
        assert_eq!(lambda_sq_composite(&sq, 30, 30, &BTreeMap::new()).unwrap(), rat(1, 30));
        let err = lambda_sq_composite(&sq, 30, 7, &BTreeMap::new()).unwrap_err();
        assert!(err.to_string().contains("p = 7"));
        let mut un = BTreeMap::new();
        un.insert(7, rat(4, 1));
        assert_eq!(lambda_sq_composite(&sq, 30, 14, &un).unwrap(), rat(2, 1));
    }

    #[test]
    fn documented_reconstructions() {
        for r in [
            rep(2, RepKind::Type1 { a_xi: 1, a_xi_sq: 1 }),
            rep(3, RepKind::Type5 { a_beta: 1 }),
            rep(3, RepKind::Type3 { a_beta: 1, b: Type3Param::Exact(int(2)) }),
        ] {
            assert!(iwasawa_check(&r, 10).unwrap().passed, "{r}");
        }
    }

    #[test]
    fn documented_deligne_reports() {
        let t1 = deligne_violation_report(&rep(3, RepKind::Type1 { a_xi: 2, a_xi_sq: 2 })).unwrap();
        assert!(t1.rows.iter().all(|r| !r.exceeds_deligne));
        let t4 = deligne_violation_report(&rep(3, RepKind::Type4 { a_beta: 2, a_beta_sq: 1 })).unwrap();
        assert_eq!(t4.rows.len(), 3);
        assert!(t4.rows[1..].iter().any(|r| r.lambda_sq_max != "0"));
    }
}
