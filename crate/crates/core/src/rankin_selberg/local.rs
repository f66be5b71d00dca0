//! J*, the factor Q, the normalized integral I*, and the identity checks
//! that tie them together.

use num_traits::Zero;
use serde::Serialize;

use super::tables::{is_one, j_at_one, r_closed, r_negative, sumtm_target, t_closed, t_pipeline, weighted_sum};
use crate::error::{Error, Result};
use crate::exact::{int, pow_rat, LaurentPoly, QSqrtP, Rational, RationalFunc};
use crate::lfactors::{column, j_squarefree, l_adjoint_at_1};
use crate::rep::{RepDescriptor, RepInvariants, RepKind};

/// A named identity check with its exact discrepancy (`"0"` on success).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, witness: impl Into<String>) -> Self {
        Check { name: name.to_string(), passed, witness: witness.into() }
    }

    /// Passes iff `discrepancy` is zero.
    pub fn zero(name: &str, discrepancy: &LaurentPoly) -> Self {
        Check::new(name, discrepancy.is_zero(), discrepancy.to_string())
    }

    pub fn from_result(name: &str, r: Result<()>) -> Self {
        match r {
            Ok(()) => Check::new(name, true, "0"),
            Err(e) => Check::new(name, false, e.to_string()),
        }
    }
}

/// `lambda_{s,m} = sum_{j=0}^{m} X^{m-2j}` with `X = p^{-1/2} t^{-1}`; zero for `m < 0`.
pub fn lambda_sm(m: i32, p: u32) -> LaurentPoly {
    let mut out = LaurentPoly::zero(p);
    for j in 0..=m {
        let k = m - 2 * j;
        out.add_term(-k, QSqrtP::p_half_power(p, -k));
    }
    out
}

/// `J*(s) = J(s) zeta_p(2s) / L(pi x pi, s)` as a Laurent polynomial in t.
pub fn jstar(rep: &RepDescriptor) -> Result<LaurentPoly> {
    let inv = rep.validate()?;
    match (&rep.kind, inv.n) {
        (RepKind::Level1, _) => j_squarefree(rep.p).try_mul(&column(rep)?)?.to_laurent(),
        (RepKind::Spherical { .. }, _) => {
            let l1 = l_adjoint_at_1(rep)?;
            let c = ((int(1) + pow_rat(rep.p, -1)) * l1).recip();
            Ok(LaurentPoly::constant(QSqrtP::rational(c, rep.p)))
        }
        _ => Ok(t_pipeline(rep)?.jstar()),
    }
}

/// Unit normalization: lowest exponent 0 and constant term 1.
pub fn normalize_unit(a: &LaurentPoly) -> Result<LaurentPoly> {
    a.normalize_unit()
}

fn sqrt_p_power(p: u32, e: i32) -> QSqrtP {
    QSqrtP::p_half_power(p, e)
}

fn rat_q(p: u32, r: Rational) -> QSqrtP {
    QSqrtP::rational(r, p)
}

/// The factor `Q_{pi,p}(s)` as a combination of `lambda_{s,m}`.
pub fn q_factor(rep: &RepDescriptor) -> Result<LaurentPoly> {
    let inv = rep.validate()?;
    if inv.n < 2 {
        return Err(Error::Unsupported(format!("{rep}: Q is defined for n >= 2")));
    }
    let p = rep.p;
    let np = inv.n_prime;
    let lam = |m: i32| lambda_sm(m, p);
    let pinv = pow_rat(p, -1);
    let terms: Vec<(i32, QSqrtP)> = match &rep.kind {
        RepKind::Type1 { .. } => vec![(np, QSqrtP::one(p)), (np - 2, rat_q(p, -pinv))],
        RepKind::Type2 { .. } => vec![(np, QSqrtP::one(p)), (np - 1, -sqrt_p_power(p, -1))],
        RepKind::Type4 { .. } => vec![
            (np, QSqrtP::one(p)),
            (np - 1, sqrt_p_power(p, -1).scale(&int(-2))),
            (np - 2, rat_q(p, pinv)),
        ],
        RepKind::Type5 { .. } => vec![
            (np, QSqrtP::one(p)),
            (np - 1, sqrt_p_power(p, -1).scale(&-(int(1) + &pinv))),
            (np - 2, rat_q(p, pow_rat(p, -2))),
        ],
        RepKind::Type3 { .. } => {
            let b = rep
                .exact_b()
                .ok_or_else(|| Error::Unsupported(format!("{rep}: exact Q needs a rational b")))?;
            let beta = b + int(2);
            if p != 2 {
                let constant = &pinv * (int(2) * &beta - int(2) - &pinv);
                return Ok(&(&lam(2) - &lam(1).scale(&sqrt_p_power(p, -1).scale(&beta)))
                    + &LaurentPoly::constant(rat_q(p, constant)));
            }
            let n = inv.n as i32;
            vec![
                (n, QSqrtP::one(p)),
                (n - 1, sqrt_p_power(p, -1).scale(&-beta.clone())),
                (n - 2, rat_q(p, int(2) * &pinv * (&beta - int(1)))),
                (n - 3, sqrt_p_power(p, -3).scale(&-beta)),
                (n - 4, rat_q(p, pow_rat(p, -2))),
            ]
        }
        RepKind::Spherical { .. } | RepKind::Level1 => unreachable!(),
    };
    let mut out = LaurentPoly::zero(p);
    for (m, c) in terms {
        out = &out + &lam(m).scale(&c);
    }
    Ok(out)
}

/// Both expressions for `I*`.
#[derive(Clone, Debug)]
pub struct IStarRoutes {
    /// `p^{-n} L(ad,1)^2 Q^2`, or `p^{-n}` when `n <= 1`.
    pub route_a: LaurentPoly,
    /// `(1+p^{-1})^2 L(ad,1)^2 J*(s) J*(1-s)`, when J* is available.
    pub route_b: Option<LaurentPoly>,
}

impl IStarRoutes {
    pub fn discrepancy(&self) -> Option<LaurentPoly> {
        self.route_b.as_ref().map(|b| &self.route_a - b)
    }
}

fn route_b(rep: &RepDescriptor, js: &LaurentPoly) -> Result<LaurentPoly> {
    let p = rep.p;
    let l1 = l_adjoint_at_1(rep)?;
    let k = num_traits::pow(int(1) + pow_rat(p, -1), 2) * &l1 * &l1;
    Ok(js.try_mul(&js.fe_substitute())?.scale_rational(&k))
}

pub fn istar_routes(rep: &RepDescriptor) -> Result<IStarRoutes> {
    let inv = rep.validate()?;
    let p = rep.p;
    if inv.n <= 1 {
        let route_a = LaurentPoly::constant(rat_q(p, pow_rat(p, -(inv.n as i32))));
        let route_b = match jstar(rep) {
            Ok(js) => Some(route_b(rep, &js)?),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        };
        return Ok(IStarRoutes { route_a, route_b });
    }
    let l1 = l_adjoint_at_1(rep)?;
    let q = q_factor(rep)?;
    let route_a = q.pow(2).scale_rational(&(pow_rat(p, -(inv.n as i32)) * &l1 * &l1));
    let route_b = Some(route_b(rep, &jstar(rep)?)?);
    Ok(IStarRoutes { route_a, route_b })
}

/// `I*` by the Q-factor route, after confirming it agrees with the J* route.
pub fn istar(rep: &RepDescriptor) -> Result<LaurentPoly> {
    let routes = istar_routes(rep)?;
    if let Some(d) = routes.discrepancy() {
        if !d.is_zero() {
            return Err(Error::invariant("two-route I*", format!("{rep}: difference {d}")));
        }
    }
    Ok(routes.route_a)
}

/// `J* - p^{-N/2} t^{-N} J*(1-s)`; zero exactly when the local functional equation holds.
pub fn fe_discrepancy(js: &LaurentPoly, big_n: u32) -> LaurentPoly {
    let p = js.p();
    let factor = QSqrtP::rational(pow_rat(p, -(big_n as i32) / 2), p);
    js - &js.fe_substitute().shift(-(big_n as i32)).scale(&factor)
}

pub fn verify_fe(rep: &RepDescriptor) -> Result<Check> {
    let inv = rep.validate()?;
    Ok(Check::zero("functional equation", &fe_discrepancy(&jstar(rep)?, inv.big_n)))
}

/// Exhaustive exact identity checks for one descriptor.
pub fn identity_checks(rep: &RepDescriptor, r_depth: i32) -> Result<Vec<Check>> {
    let inv = rep.validate()?;
    let p = rep.p;
    let mut checks = Vec::new();
    let js = jstar(rep)?;
    checks.push(Check::new(
        "conductor exponents",
        inv.big_n % 2 == 0 && inv.big_n <= inv.n + 1 && (inv.big_n == inv.n + 1) == (inv.n % 2 == 1),
        format!("n = {}, N = {}", inv.n, inv.big_n),
    ));
    if inv.n >= 1 {
        checks.push(Check::zero("functional equation", &fe_discrepancy(&js, inv.big_n)));
    }
    let sum_at_one = js.eval_rational(&pow_rat(p, -1))?;
    let target = sumtm_target(rep)?;
    let diff = &sum_at_one - &QSqrtP::rational(target.clone(), p);
    checks.push(Check::new("sum rule", diff.is_zero(), diff.to_string()));
    let j1 = j_at_one(rep, &js)?;
    checks.push(Check::new("J(1) = 1", is_one(&j1), (&j1 - &QSqrtP::one(p)).to_string()));

    let routes = istar_routes(rep)?;
    if let Some(d) = routes.discrepancy() {
        checks.push(Check::zero("two-route I*", &d));
    }
    if inv.n <= 1 {
        let expect = LaurentPoly::constant(QSqrtP::rational(pow_rat(p, -(inv.n as i32)), p));
        checks.push(Check::zero("I* = p^-n", &(&routes.route_a - &expect)));
        return Ok(checks);
    }

    let pipeline = t_pipeline(rep)?;
    let lo = inv.big_n as i32 - inv.n as i32;
    let outside: Vec<i32> = pipeline.t.keys().copied().filter(|m| *m < lo || *m > inv.n as i32).collect();
    checks.push(Check::new("T support", outside.is_empty(), format!("{outside:?}")));
    checks.push(Check::new(
        "sum rule on T",
        weighted_sum(p, &pipeline.t) == target,
        (weighted_sum(p, &pipeline.t) - &target).to_string(),
    ));
    let closed = t_closed(rep)?;
    let closed_diff = &pipeline.jstar() - &closed.jstar();
    checks.push(Check::zero("closed form = pipeline", &closed_diff));

    let mut negatives = Vec::new();
    for m in 1..=inv.n as i32 + 2 {
        let r = r_closed(rep, m)?;
        if r < Rational::zero() {
            negatives.push(format!("R_{m} = {r}"));
        }
    }
    let r_neg = r_negative(rep, &js, r_depth)?;
    for (k, r) in r_neg.iter().enumerate() {
        if *r < Rational::zero() {
            negatives.push(format!("R_-{k} = {r}"));
        }
    }
    checks.push(Check::new("R nonnegative", negatives.is_empty(), negatives.join(", ")));

    // positive-index coefficients of the J expansion must reproduce R_m
    let series = super::tables::j_series(rep, &js, 1)?;
    let mut mismatch = Vec::new();
    for m in 1..=inv.n as i32 + 1 {
        let from_series = series.coeff(-m).expect("within order");
        let closed = QSqrtP::rational(r_closed(rep, m)?, p);
        if from_series != closed {
            mismatch.push(format!("R_{m}: {from_series} vs {closed}"));
        }
    }
    checks.push(Check::new("R from J expansion", mismatch.is_empty(), mismatch.join(", ")));

    let f = js.normalize_unit()?;
    let f_dual = f.fe_substitute().normalize_unit()?;
    checks.push(Check::zero("palindromic F", &(&f - &f_dual)));
    Ok(checks)
}

/// Everything computed for one descriptor.
#[derive(Clone, Debug, Serialize)]
pub struct LocalReport {
    pub descriptor: RepDescriptor,
    pub invariants: RepInvariants,
    pub jstar: LaurentPoly,
    pub jstar_text: String,
    pub normalized: String,
    pub q_poly: Option<LaurentPoly>,
    pub istar: LaurentPoly,
    pub istar_text: String,
    pub l_adjoint_at_1: String,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub l_adjoint_at_1_float: f64,
    pub t: Option<super::TRTable>,
    /// R_0, R_-1, R_-2, ... from the expansion of J.
    pub r_neg: Vec<String>,
    pub checks: Vec<Check>,
}

impl LocalReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn local_report(rep: &RepDescriptor, r_depth: i32) -> Result<LocalReport> {
    let invariants = rep.validate()?;
    let js = jstar(rep)?;
    let routes = istar_routes(rep)?;
    let l1 = l_adjoint_at_1(rep)?;
    let (t, q_poly, r_neg) = if invariants.n >= 2 {
        let r = r_negative(rep, &js, r_depth)?;
        (Some(t_pipeline(rep)?), Some(q_factor(rep)?), r.iter().map(|x| x.to_string()).collect())
    } else {
        (None, None, Vec::new())
    };
    Ok(LocalReport {
        descriptor: rep.clone(),
        invariants,
        jstar_text: js.to_string(),
        normalized: js.normalize_unit()?.to_string(),
        jstar: js,
        q_poly,
        istar_text: routes.route_a.to_string(),
        istar: routes.route_a,
        l_adjoint_at_1_float: crate::exact::to_f64(&l1),
        l_adjoint_at_1: l1.to_string(),
        t,
        r_neg,
        checks: identity_checks(rep, r_depth)?,
    })
}

/// Rational function view of J used by the cusp expansions.
pub fn j_function(rep: &RepDescriptor) -> Result<RationalFunc> {
    let js = jstar(rep)?;
    let one_minus_t2 = LaurentPoly::from_rational_terms(rep.p, [(0, int(1)), (2, int(-1))]);
    crate::lfactors::l_pi_pi(rep)?.mul_poly(&js.try_mul(&one_minus_t2)?)
}
