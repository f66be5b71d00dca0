//! End-to-end acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use rslocal::cusps::{enumerate_cusps, reduce_fraction, CuspClass};
use rslocal::exact::{int, pow_rat, rat, LaurentPoly, QSqrtP, Rational};
use rslocal::fourier::{fourier_profile, iwasawa_check, purity_and_symmetry_check};
use rslocal::rankin_selberg::{identity_checks, jstar, rh_roots};
use rslocal::rep::{default_b_samples, enumerate_reps, RepDescriptor, RepKind, Type3Param};
use rslocal::scan::{run_scan, ScanConfig, ScanSummary};
use rslocal::watson::{bound_factor_exact, watson_constant_at_half, LevelSpec};

const PRIMES: [u32; 4] = [2, 3, 5, 7];

// bypasses the test harness capture so the line is always shown
fn report(n: u32, passed: bool, detail: impl AsRef<str>) {
    let line = format!("criterion {n}: {} {}\n", if passed { "PASS" } else { "FAIL" }, detail.as_ref());
    std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
}

fn scan() -> &'static ScanSummary {
    static SCAN: OnceLock<ScanSummary> = OnceLock::new();
    SCAN.get_or_init(|| {
        let cfg = ScanConfig { primes: PRIMES.to_vec(), n_max: 12, type3_s0_samples: vec![0.1, 0.3], ..Default::default() };
        run_scan(&cfg).expect("scan runs")
    })
}

fn phi(n: u64) -> u64 {
    (1..=n).filter(|k| gcd(*k, n) == 1).count() as u64
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `zeta(2s) / L(pi x pi, s)` as dense coefficients in `t`, written out per type.
fn column_oracle(rep: &RepDescriptor) -> (Vec<Rational>, Vec<Rational>) {
    let p = rep.p as i64;
    let one_plus_t = vec![int(1), int(1)];
    match &rep.kind {
        RepKind::Type1 { .. } | RepKind::Type2 { .. } if rep.validate().unwrap().big_n > 0 => match rep.kind {
            RepKind::Type1 { a_xi_sq: 0, .. } => (vec![int(1), int(-1)], one_plus_t),
            RepKind::Type2 { .. } => (vec![int(1)], one_plus_t),
            _ => (vec![int(1)], vec![int(1)]),
        },
        RepKind::Type3 { .. } => {
            let b = rep.exact_b().unwrap().clone();
            // (1 - t)(1 - b t + t^2)
            (vec![int(1), -int(1) - &b, int(1) + &b, int(-1)], one_plus_t)
        }
        RepKind::Type4 { .. } => (vec![int(1), int(-1)], one_plus_t),
        RepKind::Type5 { .. } | RepKind::Level1 => (vec![int(1), rat(-1, p)], one_plus_t),
        _ => (vec![int(1)], vec![int(1)]),
    }
}

fn horner(c: &[Rational], t: &Rational) -> Rational {
    c.iter().rev().fold(Rational::zero(), |acc, x| acc * t + x)
}

#[test]
fn criterion_1_exact_identities() {
    let b: Vec<Rational> = vec![int(-2), int(-1), int(0), int(1), int(2), rat(5, 2)];
    let wanted = [
        "functional equation",
        "sum rule",
        "J(1) = 1",
        "T support",
        "closed form = pipeline",
        "two-route I*",
    ];
    let mut failures = Vec::new();
    let (mut total, mut checks) = (0, 0);
    for p in PRIMES {
        for rep in enumerate_reps(p, 12, &b) {
            let inv = rep.validate().unwrap();
            if inv.n == 0 {
                continue;
            }
            total += 1;
            let cs = identity_checks(&rep, 12).unwrap_or_else(|e| panic!("{rep}: {e}"));
            for c in cs.iter().filter(|c| wanted.contains(&c.name.as_str())) {
                checks += 1;
                if !c.passed {
                    failures.push(format!("{rep}: {} ({})", c.name, c.witness));
                }
            }
            // independent evaluation at rational points
            let js = jstar(&rep).unwrap();
            for t in [rat(2, 3), rat(-5, 7), rat(3, 1)] {
                let lhs = js.eval_rational(&t).unwrap();
                let dual = js.eval_rational(&(int(1) / (int(p as i64) * &t))).unwrap();
                let factor = pow_rat(p, -(inv.big_n as i32 / 2)) * num_traits::pow(int(1) / &t, inv.big_n as usize);
                checks += 1;
                if lhs != dual.scale(&factor) {
                    failures.push(format!("{rep}: functional equation at t = {t}"));
                }
            }
            let (num, den) = column_oracle(&rep);
            let t = pow_rat(p, -1);
            let target = horner(&num, &t) / horner(&den, &t);
            checks += 1;
            if js.eval_rational(&t).unwrap() != QSqrtP::rational(target.clone(), p) {
                failures.push(format!("{rep}: sum rule oracle, expected {target}"));
            }
        }
    }
    let ok = failures.is_empty();
    report(
        1,
        ok,
        format!("{total} descriptors, {checks} exact checks, {} failures (b = 5/2 lies outside the unitary range at p = 2 and is not a valid descriptor there)", failures.len()),
    );
    assert!(ok, "{failures:#?}");
}

#[test]
fn criterion_2_printed_f() {
    let mut bad = Vec::new();
    let mut count = 0;
    for p in [2u32, 3, 5] {
        let pi = p as i64;
        for g in 1..=5u32 {
            // Type 1 twist-minimal: 1 + sum (p^j - p^{j-1}) t^{2j} + p^g t^{2g}
            let mut f1 = vec![(0, int(1)), (2 * g as i32, int(pi.pow(g)))];
            for j in 1..g {
                f1.push((2 * j as i32, int(pi.pow(j) - pi.pow(j - 1))));
            }
            let t1 = RepDescriptor::new(p, RepKind::Type1 { a_xi: g, a_xi_sq: g });
            // Type 2 with n = 2g + 1: sum p^j t^{2j} - sum p^j t^{2j+1}
            let mut f2 = Vec::new();
            for j in 0..=g {
                f2.push((2 * j as i32, int(pi.pow(j))));
            }
            for j in 0..g {
                f2.push((2 * j as i32 + 1, int(-pi.pow(j))));
            }
            let t2 = RepDescriptor::new(p, RepKind::Type2 { n: 2 * g + 1, big_n: 2 * g + 2 });
            for (rep, terms) in [(t1, f1), (t2, f2)] {
                count += 1;
                let expected = LaurentPoly::from_rational_terms(p, terms);
                let got = jstar(&rep).unwrap().normalize_unit().unwrap();
                if got != expected {
                    bad.push(format!("{rep}: got {got}, expected {expected}"));
                }
            }
        }
    }
    report(2, bad.is_empty(), format!("{count} polynomials compared"));
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn criterion_3_conductor_exponents() {
    let mut bad = Vec::new();
    let mut count = 0;
    for p in PRIMES {
        for rep in enumerate_reps(p, 12, &default_b_samples(p)) {
            let inv = rep.validate().unwrap();
            count += 1;
            let ok = inv.big_n % 2 == 0 && inv.big_n <= inv.n + 1 && ((inv.big_n == inv.n + 1) == (inv.n % 2 == 1));
            if !ok {
                bad.push(rep.to_string());
            }
        }
    }
    report(3, bad.is_empty(), format!("{count} descriptors"));
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn criterion_4_local_lindelof() {
    let s = scan();
    // the bound is asserted only for Type 3 inside the Ramanujan range
    let classical: Vec<_> = s.lindelof.violations.iter().filter(|v| v.classical).collect();
    let worst = classical.iter().map(|v| v.worst_ratio).fold(0.0, f64::max);
    let ok = classical.is_empty();
    let mut detail = format!(
        "{} descriptors on 31 grid points, {} violate |I*| <= 30 p^-n tau(p^n') (+1e-9), worst |I*|/budget = {worst:.4}",
        s.lindelof.checked,
        classical.len()
    );
    if let Some(v) = classical.iter().max_by(|a, b| a.worst_ratio.total_cmp(&b.worst_ratio)) {
        detail.push_str(&format!(" at {} s = 1/2 + {}i", v.descriptor, v.worst_s_im));
    }
    report(4, ok, detail);
    assert!(ok, "{classical:#?}");
}

#[test]
fn criterion_5_local_rh() {
    let s = scan();
    let mut exception = 0.0f64;
    for p in PRIMES {
        for a in if p == 2 { vec![2, 3] } else { vec![1] } {
            let rep = RepDescriptor::new(p, RepKind::Type3 { a_beta: a, b: Type3Param::from_s0(p, 0.3) });
            exception = exception.max(rh_roots(&rep).unwrap().max_deviation);
        }
    }
    let ok = s.rh.unexpected == 0 && s.rh.max_deviation < 1e-8 && exception > 1e-3;
    report(
        5,
        ok,
        format!(
            "{} root scans, max classical deviation {:.3e}; largest deviation over Type 3 with s0 = 0.3 is {exception:.3e} (need > 1e-3)",
            s.rh.scanned, s.rh.max_deviation
        ),
    );
    assert!(ok, "{:#?}", s.rh);
}

/// Orbits of `Gamma0(q) \ SL2(Z) / Gamma_infinity` computed from bottom rows in `P^1(Z/q)`.
struct OrbitOracle {
    q: u64,
    parent: Vec<usize>,
}

impl OrbitOracle {
    fn new(q: u64) -> Self {
        let n = (q * q) as usize;
        let mut o = OrbitOracle { q, parent: (0..n).collect() };
        let units: Vec<u64> = (1..=q).filter(|u| gcd(*u, q) == 1).map(|u| u % q).collect();
        let gens = generators(q, &units);
        for c in 0..q {
            for d in 0..q {
                if gcd(gcd(c, d), q) != 1 {
                    continue;
                }
                let i = o.index(c, d);
                let j = o.index(c, (c + d) % q);
                o.union(i, j);
                for &u in &gens {
                    let k = o.index(u * c % q, u * d % q);
                    o.union(i, k);
                }
            }
        }
        o
    }

    fn index(&self, c: u64, d: u64) -> usize {
        (c * self.q + d) as usize
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Orbit of `a / c` with `gcd(a, c) = 1`: the bottom row `(c, d)` of any `[[a, b], [c, d]]` in SL2(Z).
    fn orbit(&mut self, a: i64, c: u64) -> usize {
        let d = if c == 0 {
            a.rem_euclid(self.q as i64) as u64
        } else {
            let ci = c as i64;
            (1..=ci).find(|d| (a * d - 1).rem_euclid(ci) == 0).unwrap() as u64
        };
        let i = self.index(c % self.q, d % self.q);
        self.find(i)
    }
}

fn generators(q: u64, units: &[u64]) -> Vec<u64> {
    let mut gens = Vec::new();
    let mut group = vec![1 % q.max(1)];
    for &u in units {
        if group.contains(&u) {
            continue;
        }
        gens.push(u);
        let mut i = 0;
        while i < group.len() {
            for &g in &gens {
                let x = group[i] * g % q;
                if !group.contains(&x) {
                    group.push(x);
                }
            }
            i += 1;
        }
    }
    gens
}

#[test]
fn criterion_6_cusp_atlas() {
    let mut bad = Vec::new();
    for q in 1..=2000u64 {
        let cusps = enumerate_cusps(q).unwrap();
        let sum: u64 = cusps.iter().map(|c| c.width).sum();
        // q prod (1 + 1/p) as an integer
        let psi = prime_divisors(q).iter().fold(q, |acc, p| acc / p * (p + 1));
        if sum != psi {
            bad.push(format!("q = {q}: width sum {sum} vs {psi}"));
        }
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for c in &cusps {
            *counts.entry(c.c).or_default() += 1;
        }
        for c in (1..=q).filter(|c| q % c == 0) {
            let want = phi(gcd(c, q / c));
            if counts.get(&c).copied().unwrap_or(0) != want {
                bad.push(format!("q = {q}, c = {c}: count"));
            }
        }
    }
    let mut fractions = 0u64;
    for q in 1..=200u64 {
        let mut oracle = OrbitOracle::new(q);
        let mut to_class: HashMap<usize, CuspClass> = HashMap::new();
        let mut to_orbit: HashMap<CuspClass, usize> = HashMap::new();
        for c in 1..=q {
            for a in 0..c as i64 {
                if gcd(a as u64, c) != 1 {
                    continue;
                }
                fractions += 1;
                let class = reduce_fraction(q, a, c).unwrap();
                let orbit = oracle.orbit(a, c);
                let c1 = *to_class.entry(orbit).or_insert(class);
                let o1 = *to_orbit.entry(class).or_insert(orbit);
                if c1 != class || o1 != orbit {
                    bad.push(format!("q = {q}: {a}/{c} disagrees with the orbit oracle"));
                }
            }
        }
        if to_class.len() != enumerate_cusps(q).unwrap().len() {
            bad.push(format!("q = {q}: {} orbits reached", to_class.len()));
        }
    }
    report(6, bad.is_empty(), format!("q <= 2000 widths and counts, {fractions} fractions against the orbit oracle"));
    assert!(bad.is_empty(), "{:#?}", &bad[..bad.len().min(20)]);
}

#[test]
fn criterion_7_fourier_profiles() {
    let mut bad = Vec::new();
    let mut profiles = 0;
    for p in PRIMES {
        for rep in enumerate_reps(p, 12, &default_b_samples(p)) {
            let inv = rep.validate().unwrap();
            if inv.n < 2 {
                continue;
            }
            for c in purity_and_symmetry_check(&rep, 12).unwrap() {
                profiles += 1;
                if !c.passed {
                    bad.push(format!("{rep}: {} ({})", c.name, c.witness));
                }
            }
            // the corner case: twist-minimal Type 1 at q = p^2
            if matches!(rep.kind, RepKind::Type1 { a_xi: 1, a_xi_sq: 1 }) {
                let v = fourier_profile(&rep, 1, 0).unwrap().get(0);
                if !v.is_one() {
                    bad.push(format!("{rep}: middle cusp lambda(1)^2 = {v}"));
                }
                for c_exp in 0..=2 {
                    let prof = fourier_profile(&rep, c_exp, 12).unwrap();
                    if (1..=12).any(|k| !prof.get(k).is_zero()) {
                        bad.push(format!("{rep}: nonzero k >= 1 at c = p^{c_exp}"));
                    }
                }
            }
        }
    }
    let f = &scan().fourier;
    let ok = bad.is_empty() && f.empirical_bound_holds;
    report(
        7,
        ok,
        format!(
            "{profiles} exact checks; empirical max lambda^2 p^-k/2 = {:.4} at {} (constant 30)",
            f.max_normalized, f.max_normalized_at
        ),
    );
    assert!(ok, "{bad:#?}");
}

#[test]
fn criterion_8_iwasawa_reconstruction() {
    let mut bad = Vec::new();
    let mut count = 0;
    for p in [2u32, 3, 5] {
        for m in 1..=4u32 {
            for rep in enumerate_reps(p, 2 * m, &default_b_samples(p)) {
                if rep.validate().unwrap().n != 2 * m {
                    continue;
                }
                count += 1;
                if let Err(e) = iwasawa_check(&rep, 12) {
                    bad.push(e.to_string());
                }
            }
        }
    }
    report(8, bad.is_empty(), format!("{count} descriptors through depth 12"));
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn criterion_9_watson() {
    let mut bad = Vec::new();
    for q in (1..=300u64).filter(|q| prime_divisors(*q).iter().product::<u64>() == *q) {
        let level = LevelSpec::for_level(q, []).unwrap();
        let got = watson_constant_at_half(&level).unwrap().constant;
        let want = Rational::new(1.into(), (8 * q as i64).into()).to_string();
        if got.as_deref() != Some(want.as_str()) {
            bad.push(format!("q = {q}: {got:?}"));
        }
    }
    let four = LevelSpec::parse("2:type1,1,1").unwrap();
    let w = watson_constant_at_half(&four).unwrap().constant;
    if w.as_deref() != Some("1/18") {
        bad.push(format!("q = 4: {w:?}"));
    }
    let b = bound_factor_exact(&LevelSpec::parse("2:type5,2").unwrap()).unwrap();
    if b.prefactor_exact != rat(15, 2) {
        bad.push(format!("q = 16: {}", b.prefactor));
    }
    report(9, bad.is_empty(), "squarefree q <= 300 give 1/(8q); q = 4 gives 1/18; q = 16 bound factor 15/2");
    assert!(bad.is_empty(), "{bad:#?}");
}
