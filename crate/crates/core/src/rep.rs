//! Descriptors for generic irreducible unitarizable representations of
//! PGL2(Q_p), validation, and the conductor invariants n, N and n'.

use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::exact::{int, parse_rational, to_f64, Rational};

/// The parameter `b = p^{2 s0} + p^{-2 s0}` of an irreducible principal series.
#[derive(Clone, Debug, PartialEq)]
pub enum Type3Param {
    Exact(Rational),
    Numeric(f64),
}

impl Type3Param {
    /// `b` from a real `s0`.
    pub fn from_s0(p: u32, s0: f64) -> Self {
        let lp = (p as f64).ln();
        Type3Param::Numeric((2.0 * s0 * lp).exp() + (-2.0 * s0 * lp).exp())
    }

    /// `b` from a purely imaginary `s0 = i y`.
    pub fn from_imaginary_s0(p: u32, y: f64) -> Self {
        Type3Param::Numeric(2.0 * (2.0 * y * (p as f64).ln()).cos())
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Type3Param::Exact(b) => to_f64(b),
            Type3Param::Numeric(b) => *b,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RepKind {
    /// Unramified. `satake_trace` is `alpha^2 + alpha^-2` for Satake parameters `alpha^{+-1}`.
    Spherical { satake_trace: Option<Rational> },
    /// Steinberg or its unramified quadratic twist.
    Level1,
    /// Dihedral supercuspidal from the unramified quadratic extension.
    Type1 { a_xi: u32, a_xi_sq: u32 },
    /// Supercuspidal from a ramified quadratic extension.
    Type2 { n: u32, big_n: u32 },
    /// Principal series from an unramified character times a ramified one, unitary twist.
    Type3 { a_beta: u32, b: Type3Param },
    /// Principal series `beta`, `beta^-1` with `beta` ramified.
    Type4 { a_beta: u32, a_beta_sq: u32 },
    /// Ramified quadratic twist of Steinberg.
    Type5 { a_beta: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepDescriptor {
    pub p: u32,
    pub kind: RepKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepInvariants {
    pub n: u32,
    #[serde(rename = "N")]
    pub big_n: u32,
    pub n_prime: i32,
    pub conductor: u64,
    pub ad_conductor: u64,
}

fn violated(constraint: impl Into<String>) -> Error {
    Error::InvalidDescriptor(constraint.into())
}

impl RepDescriptor {
    pub fn new(p: u32, kind: RepKind) -> Self {
        RepDescriptor { p, kind }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            RepKind::Spherical { .. } => "Spherical",
            RepKind::Level1 => "Level1",
            RepKind::Type1 { .. } => "Type1",
            RepKind::Type2 { .. } => "Type2",
            RepKind::Type3 { .. } => "Type3",
            RepKind::Type4 { .. } => "Type4",
            RepKind::Type5 { .. } => "Type5",
        }
    }

    /// The pair (n, N) before any validation.
    fn raw_exponents(&self) -> (u32, u32) {
        match &self.kind {
            RepKind::Spherical { .. } => (0, 0),
            RepKind::Level1 => (1, 2),
            RepKind::Type1 { a_xi, a_xi_sq } => (2 * a_xi, 2 * a_xi_sq),
            RepKind::Type2 { n, big_n } => (*n, *big_n),
            RepKind::Type3 { a_beta, .. } => (2 * a_beta, 0),
            RepKind::Type4 { a_beta, a_beta_sq } => (2 * a_beta, 2 * a_beta_sq),
            RepKind::Type5 { a_beta } => (2 * a_beta, 2),
        }
    }

    pub fn validate(&self) -> Result<RepInvariants> {
        let p = self.p;
        if !is_prime(p as u64) {
            return Err(violated(format!("p = {p} is not prime")));
        }
        let ramified_ok = |a: u32, what: &str| -> Result<()> {
            if p == 2 && !(a == 2 || a == 3) {
                Err(violated(format!("{what} must be 2 or 3 when p = 2 (got {a})")))
            } else if p != 2 && a != 1 {
                Err(violated(format!("{what} must be 1 when p is odd (got {a})")))
            } else {
                Ok(())
            }
        };
        match &self.kind {
            RepKind::Spherical { satake_trace: Some(c) } => {
                let upper = int(p as i64) + Rational::new(1.into(), (p as i64).into());
                if *c < int(-2) || *c >= upper {
                    return Err(violated(format!("-2 <= satake_trace < p + 1/p (got {c})")));
                }
            }
            RepKind::Spherical { satake_trace: None } | RepKind::Level1 => {}
            RepKind::Type1 { a_xi, a_xi_sq } => {
                if *a_xi < 1 {
                    return Err(violated("a_xi >= 1"));
                }
                if a_xi_sq > a_xi {
                    return Err(violated(format!("N <= n (N = {}, n = {})", 2 * a_xi_sq, 2 * a_xi)));
                }
            }
            RepKind::Type2 { n, big_n } => {
                if *n < 2 {
                    return Err(violated("n >= 2"));
                }
                if big_n % 2 != 0 {
                    return Err(violated(format!("N even (N = {big_n})")));
                }
                if n % 2 == 1 && *big_n != n + 1 {
                    return Err(violated(format!("N = n + 1 for odd n (n = {n}, N = {big_n})")));
                }
                if n % 2 == 0 && !(2..=*n).contains(big_n) {
                    return Err(violated(format!("2 <= N <= n for even n (n = {n}, N = {big_n})")));
                }
            }
            RepKind::Type3 { a_beta, b } => {
                ramified_ok(*a_beta, "a_beta")?;
                let upper = int(p as i64) + Rational::new(1.into(), (p as i64).into());
                let ok = match b {
                    Type3Param::Exact(b) => *b >= int(-2) && *b < upper,
                    Type3Param::Numeric(b) => b.is_finite() && *b >= -2.0 && *b < to_f64(&upper),
                };
                if !ok {
                    return Err(violated(format!(
                        "-2 <= b < p + 1/p for an irreducible unitarizable principal series (b = {})",
                        b.as_f64()
                    )));
                }
            }
            RepKind::Type4 { a_beta, a_beta_sq } => {
                if *a_beta < 1 {
                    return Err(violated("a_beta >= 1"));
                }
                if *a_beta_sq < 1 {
                    return Err(violated("a_beta_sq >= 1"));
                }
                if a_beta_sq > a_beta {
                    return Err(violated(format!("N <= n (N = {}, n = {})", 2 * a_beta_sq, 2 * a_beta)));
                }
                // squaring a ramified character of Q_2^x always lowers its conductor
                if self.p == 2 && a_beta_sq == a_beta {
                    return Err(violated("a(beta^2) < a(beta) when p = 2"));
                }
            }
            RepKind::Type5 { a_beta } => ramified_ok(*a_beta, "a_beta")?,
        }
        let (n, big_n) = self.raw_exponents();
        let overflow = || violated("conductor does not fit in 64 bits");
        Ok(RepInvariants {
            n,
            big_n,
            n_prime: n as i32 - (big_n / 2) as i32,
            conductor: (p as u64).checked_pow(n).ok_or_else(overflow)?,
            ad_conductor: (p as u64).checked_pow(big_n).ok_or_else(overflow)?,
        })
    }

    /// Exact `b` for Type 3 (None for other types or numeric `b`).
    pub fn exact_b(&self) -> Option<&Rational> {
        match &self.kind {
            RepKind::Type3 { b: Type3Param::Exact(b), .. } => Some(b),
            _ => None,
        }
    }

    /// Type 3 with `|Re s0| <= 1/4`, i.e. `b <= sqrt p + 1/sqrt p`; every other type is tempered-like here.
    pub fn within_ramanujan_range(&self) -> bool {
        let p = self.p as i64;
        match &self.kind {
            RepKind::Type3 { b: Type3Param::Exact(b), .. } => {
                // b <= sqrt p + 1/sqrt p  <=>  b <= 0 or b^2 p <= (p + 1)^2
                !b.is_positive() || b * b * int(p) <= int((p + 1) * (p + 1))
            }
            RepKind::Type3 { b: Type3Param::Numeric(b), .. } => {
                let sp = (p as f64).sqrt();
                *b <= sp + 1.0 / sp
            }
            _ => true,
        }
    }

    /// Stable key used to order reports.
    pub fn sort_key(&self) -> String {
        serde_json::to_string(self).unwrap_or_default()
    }

    /// Compact label such as `p=3 Type2(n=2,N=2)`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RepDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} ", self.p)?;
        match &self.kind {
            RepKind::Spherical { satake_trace: Some(c) } => write!(f, "Spherical(trace={c})"),
            RepKind::Spherical { satake_trace: None } => write!(f, "Spherical"),
            RepKind::Level1 => write!(f, "Level1"),
            RepKind::Type1 { a_xi, a_xi_sq } => write!(f, "Type1(a_xi={a_xi},a_xi_sq={a_xi_sq})"),
            RepKind::Type2 { n, big_n } => write!(f, "Type2(n={n},N={big_n})"),
            RepKind::Type3 { a_beta, b: Type3Param::Exact(b) } => write!(f, "Type3(a_beta={a_beta},b={b})"),
            RepKind::Type3 { a_beta, b: Type3Param::Numeric(b) } => write!(f, "Type3(a_beta={a_beta},b~{b:.6})"),
            RepKind::Type4 { a_beta, a_beta_sq } => write!(f, "Type4(a_beta={a_beta},a_beta_sq={a_beta_sq})"),
            RepKind::Type5 { a_beta } => write!(f, "Type5(a_beta={a_beta})"),
        }
    }
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct DescriptorRepr {
    p: u32,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    big_n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a_xi: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a_xi_sq: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a_beta: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a_beta_sq: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b_float: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    satake_trace: Option<String>,
}

impl Serialize for RepDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut r = DescriptorRepr {
            p: self.p,
            kind: self.kind_name().to_string(),
            ..Default::default()
        };
        match &self.kind {
            RepKind::Spherical { satake_trace } => r.satake_trace = satake_trace.as_ref().map(|c| c.to_string()),
            RepKind::Level1 => {}
            RepKind::Type1 { a_xi, a_xi_sq } => (r.a_xi, r.a_xi_sq) = (Some(*a_xi), Some(*a_xi_sq)),
            RepKind::Type2 { n, big_n } => (r.n, r.big_n) = (Some(*n), Some(*big_n)),
            RepKind::Type3 { a_beta, b } => {
                r.a_beta = Some(*a_beta);
                match b {
                    Type3Param::Exact(b) => r.b = Some(b.to_string()),
                    Type3Param::Numeric(b) => r.b_float = Some(*b),
                }
            }
            RepKind::Type4 { a_beta, a_beta_sq } => (r.a_beta, r.a_beta_sq) = (Some(*a_beta), Some(*a_beta_sq)),
            RepKind::Type5 { a_beta } => r.a_beta = Some(*a_beta),
        }
        r.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RepDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = DescriptorRepr::deserialize(d)?;
        let need = |v: Option<u32>, name: &str| v.ok_or_else(|| D::Error::custom(format!("missing field {name}")));
        let kind = match r.kind.to_ascii_lowercase().as_str() {
            "spherical" => RepKind::Spherical {
                satake_trace: match &r.satake_trace {
                    Some(text) => Some(parse_rational(text).ok_or_else(|| D::Error::custom("bad satake_trace"))?),
                    None => None,
                },
            },
            "level1" => RepKind::Level1,
            "type1" => RepKind::Type1 { a_xi: need(r.a_xi, "a_xi")?, a_xi_sq: need(r.a_xi_sq, "a_xi_sq")? },
            "type2" => RepKind::Type2 { n: need(r.n, "n")?, big_n: need(r.big_n, "N")? },
            "type3" => {
                let b = match (&r.b, r.b_float, r.s0) {
                    (Some(text), None, None) => {
                        Type3Param::Exact(parse_rational(text).ok_or_else(|| D::Error::custom("bad b"))?)
                    }
                    (None, Some(b), None) => Type3Param::Numeric(b),
                    (None, None, Some(s0)) => Type3Param::from_s0(r.p, s0),
                    _ => return Err(D::Error::custom("Type3 needs exactly one of b, b_float, s0")),
                };
                RepKind::Type3 { a_beta: need(r.a_beta, "a_beta")?, b }
            }
            "type4" => RepKind::Type4 { a_beta: need(r.a_beta, "a_beta")?, a_beta_sq: need(r.a_beta_sq, "a_beta_sq")? },
            "type5" => RepKind::Type5 { a_beta: need(r.a_beta, "a_beta")? },
            other => return Err(D::Error::custom(format!("unknown kind {other}"))),
        };
        Ok(RepDescriptor { p: r.p, kind })
    }
}

/// All valid descriptors with conductor exponent at most `n_max`, one Type 3
/// descriptor per supplied `b`. Spherical is emitted without Satake data.
pub fn enumerate_reps(p: u32, n_max: u32, b_samples: &[Rational]) -> Vec<RepDescriptor> {
    let mut out = vec![RepDescriptor::new(p, RepKind::Spherical { satake_trace: None })];
    if n_max >= 1 {
        out.push(RepDescriptor::new(p, RepKind::Level1));
    }
    for a in 1..=n_max / 2 {
        for a_sq in 1..=a {
            out.push(RepDescriptor::new(p, RepKind::Type1 { a_xi: a, a_xi_sq: a_sq }));
            out.push(RepDescriptor::new(p, RepKind::Type4 { a_beta: a, a_beta_sq: a_sq }));
        }
    }
    for n in 2..=n_max {
        if n % 2 == 1 {
            out.push(RepDescriptor::new(p, RepKind::Type2 { n, big_n: n + 1 }));
        } else {
            for big_n in (2..=n).step_by(2) {
                out.push(RepDescriptor::new(p, RepKind::Type2 { n, big_n }));
            }
        }
    }
    let ramified: &[u32] = if p == 2 { &[2, 3] } else { &[1] };
    for &a in ramified.iter().filter(|&&a| 2 * a <= n_max) {
        for b in b_samples {
            out.push(RepDescriptor::new(p, RepKind::Type3 { a_beta: a, b: Type3Param::Exact(b.clone()) }));
        }
        out.push(RepDescriptor::new(p, RepKind::Type5 { a_beta: a }));
    }
    out.retain(|d| d.validate().is_ok());
    out
}

/// Default rational `b` samples for Type 3: the lower end of the unitarizable
/// range, a point just below its open upper end, a few tempered values, and 21/10 (inside the Ramanujan range for every p).
pub fn default_b_samples(p: u32) -> Vec<Rational> {
    let p = p as i64;
    let mut out = vec![
        int(-2),
        int(-1),
        int(0),
        int(1),
        int(2),
        Rational::new(21.into(), 10.into()),
        Rational::new((p * p + 1).into(), p.into()) - Rational::new(1.into(), 100.into()),
    ];
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn documented_validation_cases() {
        let t2 = RepDescriptor::new(2, RepKind::Type2 { n: 3, big_n: 4 });
        let inv = t2.validate().unwrap();
        assert_eq!((inv.n, inv.big_n, inv.n_prime), (3, 4, 1));
        let t5 = RepDescriptor::new(3, RepKind::Type5 { a_beta: 1 });
        let inv = t5.validate().unwrap();
        assert_eq!((inv.n, inv.big_n, inv.n_prime), (2, 2, 1));
        let bad = RepDescriptor::new(2, RepKind::Type1 { a_xi: 1, a_xi_sq: 2 });
        assert!(matches!(bad.validate(), Err(Error::InvalidDescriptor(m)) if m.contains("N <= n")));
        let bad = RepDescriptor::new(5, RepKind::Type3 { a_beta: 2, b: Type3Param::Exact(int(0)) });
        assert!(matches!(bad.validate(), Err(Error::InvalidDescriptor(m)) if m.contains("a_beta must be 1")));
    }

    #[test]
    fn enumeration_matches_manual_list() {
        let kinds = |v: Vec<RepDescriptor>| v.iter().map(|d| d.to_string()).collect::<Vec<_>>();
        assert_eq!(kinds(enumerate_reps(3, 1, &[int(0)])), vec!["p=3 Spherical", "p=3 Level1"]);
        let got = kinds(enumerate_reps(3, 2, &[int(0)]));
        assert_eq!(
            got,
            vec![
                "p=3 Spherical",
                "p=3 Level1",
                "p=3 Type1(a_xi=1,a_xi_sq=1)",
                "p=3 Type4(a_beta=1,a_beta_sq=1)",
                "p=3 Type2(n=2,N=2)",
                "p=3 Type3(a_beta=1,b=0)",
                "p=3 Type5(a_beta=1)",
            ]
        );
        let p2 = kinds(enumerate_reps(2, 2, &[int(0)]));
        assert!(p2.iter().all(|k| !k.contains("Type3") && !k.contains("Type5")));
    }

    #[test]
    fn descriptor_json() {
        let d = RepDescriptor::new(2, RepKind::Type2 { n: 3, big_n: 4 });
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"p":2,"kind":"Type2","n":3,"N":4}"#);
        let e: RepDescriptor = serde_json::from_str(r#"{"p":3,"kind":"Type3","a_beta":1,"b":"5/2"}"#).unwrap();
        assert_eq!(e.exact_b(), Some(&rat(5, 2)));
        assert!(serde_json::from_str::<RepDescriptor>(r#"{"p":3,"kind":"Type3","a_beta":1}"#).is_err());
    }

    #[test]
    fn ramanujan_range() {
        let t3 = |p, b| RepDescriptor::new(p, RepKind::Type3 { a_beta: if p == 2 { 2 } else { 1 }, b: Type3Param::Exact(b) });
        assert!(t3(3, int(2)).within_ramanujan_range());
        assert!(!t3(3, rat(10, 3)).within_ramanujan_range());
        assert!(!t3(2, rat(12, 5)).within_ramanujan_range());
        assert!(t3(2, rat(5, 2)).validate().is_err());
        assert!(t3(2, rat(21, 10)).within_ramanujan_range());
    }
}
