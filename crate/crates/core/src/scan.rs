//! Verification driver: runs every exact identity, the root scan, the
//! Lindelof comparison and the Fourier checks over an enumeration of descriptors.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{to_f64, Rational};
use crate::fourier::{fourier_profile, iwasawa_check, purity_and_symmetry_check};
use crate::rankin_selberg::{bounds_report, critical_line_grid, identity_checks, rh_roots};
use crate::rep::{default_b_samples, enumerate_reps, RepDescriptor, RepKind, Type3Param};

/// Environment variable overriding the default root deviation tolerance.
pub const TOLERANCE_ENV: &str = "RSLOCAL_TOL";

/// Constant in the empirical bound `lambda^2(k) <= 30 p^{k/2}`.
pub const FOURIER_CONSTANT: f64 = 30.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub rh_deviation: f64,
    /// Absolute slack in floating comparisons against the Lindelof budget.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub eval_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let rh_deviation = std::env::var(TOLERANCE_ENV).ok().and_then(|v| v.parse().ok()).unwrap_or(1e-8);
        Tolerances { rh_deviation, eval_rel: 1e-9 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanConfig {
    pub primes: Vec<u32>,
    pub n_max: u32,
    /// Exact Type 3 samples; `None` uses [`default_b_samples`] per prime.
    #[serde(serialize_with = "ser_b_samples")]
    pub type3_b_samples: Option<Vec<Rational>>,
    /// Real `s0` for numeric Type 3 descriptors (root scan and bounds only).
    #[serde(serialize_with = "crate::report::ser_f64_seq")]
    pub type3_s0_samples: Vec<f64>,
    #[serde(skip)]
    pub s_grid: Vec<Complex64>,
    pub tolerances: Tolerances,
    /// Number of `R_{-k}` checked for nonnegativity.
    pub r_depth: i32,
    /// Largest `k` in the Fourier profiles.
    pub fourier_k_max: u32,
    /// Cusp reconstruction of J runs for `p^n` up to this bound.
    pub iwasawa_max_q: u64,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

fn ser_b_samples<S: serde::Serializer>(b: &Option<Vec<Rational>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match b {
        None => s.serialize_none(),
        Some(v) => s.collect_seq(v.iter().map(|x| x.to_string())),
    }
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            primes: vec![2, 3, 5, 7],
            n_max: 12,
            type3_b_samples: None,
            type3_s0_samples: vec![0.1, 0.3],
            s_grid: critical_line_grid(),
            tolerances: Tolerances::default(),
            r_depth: 12,
            fourier_k_max: 12,
            iwasawa_max_q: 390_625,
            jobs: 0,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        if !(t.rh_deviation > 0.0 && t.eval_rel > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        if let Some(p) = self.primes.iter().find(|p| !crate::arith::is_prime(**p as u64)) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if self.type3_s0_samples.iter().any(|s| !s.is_finite() || *s < 0.0 || *s >= 0.5) {
            return Err(Error::InvalidInput("s0 samples must lie in [0, 1/2)".into()));
        }
        Ok(())
    }

    /// The descriptors scanned, in serialization order.
    pub fn descriptors(&self) -> Vec<RepDescriptor> {
        let mut out = Vec::new();
        for &p in &self.primes {
            let b = self.type3_b_samples.clone().unwrap_or_else(|| default_b_samples(p));
            out.extend(enumerate_reps(p, self.n_max, &b).into_iter().filter(|d| d.validate().map(|i| i.n >= 1).unwrap_or(false)));
            let ramified: &[u32] = if p == 2 { &[2, 3] } else { &[1] };
            for &a in ramified.iter().filter(|&&a| 2 * a <= self.n_max) {
                for &s0 in &self.type3_s0_samples {
                    let d = RepDescriptor::new(p, RepKind::Type3 { a_beta: a, b: Type3Param::from_s0(p, s0) });
                    if d.validate().is_ok() {
                        out.push(d);
                    }
                }
            }
        }
        out.sort_by_cached_key(|d| d.sort_key());
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub descriptor: String,
    pub check: String,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RhException {
    pub descriptor: String,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub max_deviation: f64,
    /// True for Type 3 outside the Ramanujan range, where roots may leave the circle.
    pub expected: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RhSummary {
    pub scanned: usize,
    /// Largest deviation among descriptors inside the Ramanujan range.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub max_deviation: f64,
    pub exceptions: Vec<RhException>,
    pub unexpected: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LindelofViolation {
    pub descriptor: String,
    pub violating_points: usize,
    /// Largest `|I*| / budget` on the grid.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub worst_ratio: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub worst_s_im: f64,
    /// False for Type 3 outside the Ramanujan range, where no bound is asserted.
    pub classical: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LindelofSummary {
    pub checked: usize,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub max_ratio: f64,
    pub violations: Vec<LindelofViolation>,
    /// Violations by descriptors inside the Ramanujan range.
    pub classical_violations: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FourierSummary {
    pub profiles_checked: usize,
    /// `max lambda^2(k) p^{-k/2}` over every descriptor, denominator and `k`.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub max_normalized: f64,
    pub max_normalized_at: String,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub empirical_constant: f64,
    pub empirical_bound_holds: bool,
    pub iwasawa_checked: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanSummary {
    pub config: ScanConfig,
    pub descriptors: usize,
    pub identity_checks: usize,
    pub failures: Vec<Failure>,
    pub rh: RhSummary,
    pub lindelof: LindelofSummary,
    pub fourier: FourierSummary,
    pub passed: bool,
    /// 0 when everything passes, 3 on an invariant failure, 4 on non-convergence.
    pub exit_code: i32,
}

#[derive(Default)]
struct Outcome {
    checks: usize,
    failures: Vec<Failure>,
    non_converged: bool,
    rh: Option<(f64, bool)>,
    lindelof: Option<(usize, f64, f64)>,
    fourier: Option<(f64, String)>,
    fourier_profiles: usize,
    iwasawa: bool,
}

impl Outcome {
    fn fail(&mut self, rep: &RepDescriptor, check: &str, witness: impl Into<String>) {
        self.failures.push(Failure { descriptor: rep.to_string(), check: check.into(), witness: witness.into() });
    }

    fn error(&mut self, rep: &RepDescriptor, check: &str, e: Error) {
        if matches!(e, Error::NotConverged { .. }) {
            self.non_converged = true;
        }
        self.fail(rep, check, e.to_string());
    }
}

fn scan_one(cfg: &ScanConfig, rep: &RepDescriptor) -> Outcome {
    let mut out = Outcome::default();
    let n = match rep.validate() {
        Ok(inv) => inv.n,
        Err(e) => {
            out.error(rep, "validate", e);
            return out;
        }
    };
    let exact = !matches!(rep.kind, RepKind::Type3 { b: Type3Param::Numeric(_), .. });

    if exact {
        match identity_checks(rep, cfg.r_depth) {
            Ok(checks) => {
                out.checks += checks.len();
                for c in checks.into_iter().filter(|c| !c.passed) {
                    out.fail(rep, &c.name, c.witness);
                }
            }
            Err(e) => out.error(rep, "identities", e),
        }
    }

    if n >= 2 {
        match rh_roots(rep) {
            Ok(scan) => out.rh = Some((scan.max_deviation, rep.within_ramanujan_range())),
            Err(e) => out.error(rep, "root scan", e),
        }
    }

    match bounds_report(rep, &cfg.s_grid) {
        Ok(report) => {
            let mut bad = 0;
            let (mut worst, mut worst_im) = (0.0f64, 0.0);
            for row in &report.rows {
                if row.istar_abs > row.lindelof_budget + cfg.tolerances.eval_rel {
                    bad += 1;
                }
                let ratio = row.istar_abs / row.lindelof_budget;
                if ratio > worst {
                    worst = ratio;
                    worst_im = row.s_im;
                }
            }
            out.lindelof = Some((bad, worst, worst_im));
        }
        Err(e) => out.error(rep, "bounds", e),
    }

    if exact && n >= 2 {
        match purity_and_symmetry_check(rep, cfg.fourier_k_max) {
            Ok(checks) => {
                out.checks += checks.len();
                for c in checks.into_iter().filter(|c| !c.passed) {
                    out.fail(rep, &c.name, c.witness);
                }
            }
            Err(e) => out.error(rep, "fourier", e),
        }
        let mut best = (0.0f64, String::new());
        for c_exp in 0..=n {
            match fourier_profile(rep, c_exp, cfg.fourier_k_max) {
                Ok(prof) => {
                    out.fourier_profiles += 1;
                    for (k, v) in &prof.values_sq {
                        let x = to_f64(v) * (rep.p as f64).powf(-(*k as f64) / 2.0);
                        if x > best.0 {
                            best = (x, format!("{rep} c=p^{c_exp} k={k}"));
                        }
                    }
                }
                Err(e) => out.error(rep, "fourier profile", e),
            }
        }
        out.fourier = Some(best);
        let q = (rep.p as u64).checked_pow(n);
        if q.is_some_and(|q| q <= cfg.iwasawa_max_q) {
            out.checks += 1;
            out.iwasawa = true;
            if let Err(e) = iwasawa_check(rep, cfg.r_depth) {
                out.error(rep, "cusp reconstruction of J", e);
            }
        }
    }
    out
}

/// Runs the scan with at most `config.jobs` workers; the summary does not depend on scheduling.
pub fn run_scan(config: &ScanConfig) -> Result<ScanSummary> {
    config.validate()?;
    let reps = config.descriptors();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let outcomes: Vec<Outcome> = pool.install(|| reps.par_iter().map(|r| scan_one(config, r)).collect());

    let mut failures = Vec::new();
    let mut rh = RhSummary::default();
    let mut lindelof = LindelofSummary::default();
    let mut fourier = FourierSummary { empirical_constant: FOURIER_CONSTANT, ..Default::default() };
    let mut identity = 0;
    let mut non_converged = false;
    for (rep, o) in reps.iter().zip(outcomes) {
        identity += o.checks;
        non_converged |= o.non_converged;
        failures.extend(o.failures);
        if let Some((dev, classical)) = o.rh {
            rh.scanned += 1;
            if classical {
                rh.max_deviation = rh.max_deviation.max(dev);
            }
            if dev > config.tolerances.rh_deviation {
                rh.exceptions.push(RhException { descriptor: rep.to_string(), max_deviation: dev, expected: !classical });
                if classical {
                    rh.unexpected += 1;
                }
            }
        }
        if let Some((bad, worst, worst_im)) = o.lindelof {
            lindelof.checked += 1;
            lindelof.max_ratio = lindelof.max_ratio.max(worst);
            if bad > 0 {
                lindelof.violations.push(LindelofViolation {
                    descriptor: rep.to_string(),
                    violating_points: bad,
                    worst_ratio: worst,
                    worst_s_im: worst_im,
                    classical: rep.within_ramanujan_range(),
                });
                lindelof.classical_violations += rep.within_ramanujan_range() as usize;
            }
        }
        if let Some((x, at)) = o.fourier {
            if x > fourier.max_normalized {
                fourier.max_normalized = x;
                fourier.max_normalized_at = at;
            }
        }
        fourier.profiles_checked += o.fourier_profiles;
        fourier.iwasawa_checked += o.iwasawa as usize;
    }
    fourier.empirical_bound_holds = fourier.max_normalized <= FOURIER_CONSTANT;

    let passed = failures.is_empty()
        && rh.unexpected == 0
        && lindelof.classical_violations == 0
        && fourier.empirical_bound_holds;
    let exit_code = if passed {
        0
    } else if non_converged {
        4
    } else {
        3
    };
    Ok(ScanSummary {
        config: config.clone(),
        descriptors: reps.len(),
        identity_checks: identity,
        failures,
        rh,
        lindelof,
        fourier,
        passed,
        exit_code,
    })
}
