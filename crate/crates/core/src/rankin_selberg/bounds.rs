//! Convexity and local Lindelof comparisons on the critical strip.

use num_complex::Complex64;
use serde::Serialize;

use super::numeric::NumericLocal;
use crate::error::Result;
use crate::rep::RepDescriptor;

/// Numeric slack for the Lindelof comparison.
pub const LINDELOF_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub s_re: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub s_im: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub jstar_abs: f64,
    /// `C^{-1/2 + Re(s)/2}` with `C = p^N`.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub convexity_ref: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub istar_abs: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub theta: f64,
    /// `30 p^{-n} tau(p^{n'}) p^{2 theta n'}`.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub lindelof_budget: f64,
    pub lindelof_violation: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub descriptor: RepDescriptor,
    pub rows: Vec<BoundRow>,
    pub violations: usize,
}

/// `30 p^{-n} (n'+1) p^{2 theta n'}`.
pub fn lindelof_budget(p: u32, n: u32, n_prime: i32, theta: f64) -> f64 {
    let p = p as f64;
    let np = n_prime.max(0);
    30.0 * p.powi(-(n as i32)) * (np + 1) as f64 * p.powf(2.0 * theta * np as f64)
}

pub fn bounds_report(rep: &RepDescriptor, samples: &[Complex64]) -> Result<BoundsReport> {
    let local = NumericLocal::new(rep)?;
    let inv = &local.invariants;
    let p = rep.p as f64;
    let rows: Vec<BoundRow> = samples
        .iter()
        .map(|&s| {
            let theta = (s.re - 0.5).abs();
            let istar_abs = local.istar_at(s).norm();
            let budget = lindelof_budget(rep.p, inv.n, inv.n_prime, theta);
            BoundRow {
                s_re: s.re,
                s_im: s.im,
                jstar_abs: local.jstar_at(s).norm(),
                convexity_ref: p.powf(inv.big_n as f64 * (-0.5 + s.re / 2.0)),
                istar_abs,
                theta,
                lindelof_budget: budget,
                lindelof_violation: istar_abs > budget + LINDELOF_SLACK,
            }
        })
        .collect();
    let violations = rows.iter().filter(|r| r.lindelof_violation).count();
    Ok(BoundsReport { descriptor: rep.clone(), rows, violations })
}

/// The grid `s = 1/2 + i j/10`, `0 <= j <= 30`.
pub fn critical_line_grid() -> Vec<Complex64> {
    (0..=30).map(|j| Complex64::new(0.5, j as f64 / 10.0)).collect()
}
