//! Zeros of the unit-normalized J* and their distance from the circle |t| = p^{-1/2}.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::local::jstar;
use super::numeric::NumericLocal;
use crate::error::{Error, Result};
use crate::exact::{to_f64, Rational};
use crate::rep::{RepDescriptor, RepKind, Type3Param};

pub const MAX_ITERATIONS: usize = 500;
pub const CONVERGENCE: f64 = 1e-13;
pub const RESIDUAL_LIMIT: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct RootInfo {
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub re: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub im: f64,
    /// `|t| sqrt(p) - 1`.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub deviation: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootScan {
    pub descriptor: RepDescriptor,
    pub polynomial: String,
    pub degree: usize,
    pub roots: Vec<RootInfo>,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub max_deviation: f64,
}

// Dense polynomials over Q, lowest degree first.
type Poly = Vec<Rational>;

fn trim(mut a: Poly) -> Poly {
    while a.len() > 1 && a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn is_constant(a: &Poly) -> bool {
    a.len() <= 1
}

fn derivative(a: &Poly) -> Poly {
    if a.len() <= 1 {
        return vec![Rational::zero()];
    }
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer((i as i64).into())).collect())
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    trim((0..n)
        .map(|i| a.get(i).cloned().unwrap_or_else(Rational::zero) - b.get(i).cloned().unwrap_or_else(Rational::zero))
        .collect())
}

fn divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = trim(a.clone());
    let b = trim(b.clone());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![Rational::zero()], r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(Rational::zero());
        }
    }
    (trim(q), r)
}

fn monic(a: Poly) -> Poly {
    let lead = a.last().unwrap().clone();
    a.into_iter().map(|c| c / &lead).collect()
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
    while !(y.len() == 1 && y[0].is_zero()) {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

/// Yun's square-free factorization: `(factor, multiplicity)` with non-constant factors.
fn square_free(f: &Poly) -> Vec<(Poly, usize)> {
    let f = monic(trim(f.clone()));
    let fp = derivative(&f);
    let a0 = gcd(&f, &fp);
    let mut b = divrem(&f, &a0).0;
    let c = divrem(&fp, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while !is_constant(&b) {
        let a = gcd(&b, &d);
        b = divrem(&b, &a).0;
        let c = divrem(&d, &a).0;
        d = sub(&c, &derivative(&b));
        if !is_constant(&a) {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

fn horner(c: &[f64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::zero(), |acc, &a| acc * z + a)
}

/// Durand-Kerner on a polynomial given lowest degree first, followed by a Newton polish.
pub fn durand_kerner(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let c: Vec<f64> = coeffs.iter().map(|a| a / lead).collect();
    if deg == 0 {
        return Ok(Vec::new());
    }
    let radius = c[0].abs().powf(1.0 / deg as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / deg as f64))
        .collect();
    let mut log = Vec::new();
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut max_step: f64 = 0.0;
        for k in 0..deg {
            let mut den = Complex64::one();
            for j in 0..deg {
                if j != k {
                    den *= z[k] - z[j];
                }
            }
            let step = horner(&c, z[k]) / den;
            z[k] -= step;
            max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
        }
        log.push(max_step);
        if max_step <= CONVERGENCE {
            converged = true;
            break;
        }
    }
    if !converged {
        let tail: Vec<String> = log.iter().rev().take(5).map(|x| format!("{x:.3e}")).collect();
        return Err(Error::NotConverged { iterations: MAX_ITERATIONS, log: tail.join(", ") });
    }
    let dc: Vec<f64> = c.iter().enumerate().skip(1).map(|(i, a)| a * i as f64).collect();
    for r in z.iter_mut() {
        let d = horner(&dc, *r);
        if d.norm() > 0.0 {
            *r -= horner(&c, *r) / d;
        }
        let scale: f64 = c.iter().enumerate().map(|(i, a)| a.abs() * r.norm().powi(i as i32)).sum();
        let residual = horner(&c, *r).norm() / scale;
        if residual > RESIDUAL_LIMIT {
            return Err(Error::NotConverged {
                iterations: MAX_ITERATIONS,
                log: format!("relative residual {residual:.3e} at root {r}"),
            });
        }
    }
    Ok(z)
}

fn deviation(p: u32, z: Complex64) -> f64 {
    // |t| sqrt p - 1 = sqrt(p |t|^2) - 1
    (p as f64 * z.norm_sqr()).sqrt() - 1.0
}

/// Roots of `F(t)`, the unit normalization of J*, with their deviation from `|t| = p^{-1/2}`.
pub fn rh_roots(rep: &RepDescriptor) -> Result<RootScan> {
    let inv = rep.validate()?;
    if inv.n < 2 {
        return Err(Error::Unsupported(format!("{rep}: J* is a monomial for n <= 1")));
    }
    let p = rep.p;
    let mut roots = Vec::new();
    let (polynomial, degree) = if let RepKind::Type3 { b: Type3Param::Numeric(_), .. } = rep.kind {
        let num = NumericLocal::new(rep)?;
        let coeffs = num.jstar.dense();
        let c0 = coeffs[0];
        let coeffs: Vec<f64> = coeffs.iter().map(|a| a / c0).collect();
        for z in durand_kerner(&coeffs)? {
            roots.push(RootInfo { re: z.re, im: z.im, deviation: deviation(p, z), multiplicity: 1 });
        }
        let text = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{c:+.17e}*t^{i}"))
            .collect::<Vec<_>>()
            .join(" ");
        (text, coeffs.len() - 1)
    } else {
        let f = jstar(rep)?.normalize_unit()?;
        let dense = f.rational_coeffs().expect("normalized rational polynomial");
        if dense.len() < 2 {
            return Err(Error::Unsupported(format!("{rep}: J* is a monomial")));
        }
        for (factor, mult) in square_free(&dense) {
            let coeffs: Vec<f64> = factor.iter().map(to_f64).collect();
            for z in durand_kerner(&coeffs)? {
                roots.push(RootInfo { re: z.re, im: z.im, deviation: deviation(p, z), multiplicity: mult });
            }
        }
        (f.to_string(), dense.len() - 1)
    };
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let max_deviation = roots.iter().map(|r| r.deviation.abs()).fold(0.0, f64::max);
    Ok(RootScan { descriptor: rep.clone(), polynomial, degree, roots, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn poly(c: &[i64]) -> Poly {
        c.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn square_free_parts() {
        // (t - 1)^2 (t + 2) = t^3 - 3t + 2
        let parts = square_free(&poly(&[2, -3, 0, 1]));
        assert_eq!(parts, vec![(poly(&[2, 1]), 1), (poly(&[-1, 1]), 2)]);
        let g = gcd(&poly(&[-1, 0, 1]), &poly(&[1, 1]));
        assert_eq!(g, poly(&[1, 1]));
        assert_eq!(derivative(&vec![rat(1, 2), rat(1, 3), rat(1, 4)]), vec![rat(1, 3), rat(1, 2)]);
    }

    #[test]
    fn quadratic_roots() {
        // 1 - t + 2t^2: roots (1 +- i sqrt 7)/4
        let z = durand_kerner(&[1.0, -1.0, 2.0]).unwrap();
        for r in z {
            assert!((r.re - 0.25).abs() < 1e-14);
            assert!((r.im.abs() - 7f64.sqrt() / 4.0).abs() < 1e-14);
        }
    }
}
