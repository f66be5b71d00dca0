//! Cusps of Gamma0(q): enumeration by denominator, widths, reduction of
//! rational boundary points, and scaling matrices.

use serde::Serialize;

use crate::arith::{dedekind_psi, divisors, euler_phi, factorize, gcd, mod_inverse};
use crate::error::{Error, Result};

/// The cusp class `[c : d]`, `c | q`, `d` a unit modulo `gcd(c, q/c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CuspClass {
    pub q: u64,
    pub c: u64,
    pub d: u64,
    pub width: u64,
}

/// `sigma = tau * diag(width, 1)` with `tau` in SL2(Z).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScalingMatrix {
    pub tau: [[i64; 2]; 2],
    pub width: u64,
    pub sigma: [[i64; 2]; 2],
}

pub type Mat = [[i128; 2]; 2];

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

fn widen(m: &[[i64; 2]; 2]) -> Mat {
    [[m[0][0] as i128, m[0][1] as i128], [m[1][0] as i128, m[1][1] as i128]]
}

/// Inverse of a determinant-one matrix.
fn sl2_inverse(m: &Mat) -> Mat {
    [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
}

impl ScalingMatrix {
    pub fn det_tau(&self) -> i128 {
        let t = widen(&self.tau);
        t[0][0] * t[1][1] - t[0][1] * t[1][0]
    }

    pub fn det_sigma(&self) -> i128 {
        let s = widen(&self.sigma);
        s[0][0] * s[1][1] - s[0][1] * s[1][0]
    }

    /// `tau n(h) tau^{-1}` lies in Gamma0(q) exactly when `width | h`, for `1 <= h <= width`.
    pub fn stabilizer_check(&self, q: u64) -> bool {
        let tau = widen(&self.tau);
        let inv = sl2_inverse(&tau);
        (1..=self.width).all(|h| {
            let conj = mat_mul(&mat_mul(&tau, &[[1, h as i128], [0, 1]]), &inv);
            let in_gamma0 = conj[1][0].rem_euclid(q as i128) == 0;
            in_gamma0 == (h == self.width)
        })
    }
}

pub fn index_psi(q: u64) -> u64 {
    dedekind_psi(q)
}

/// `q / gcd(c^2, q)`.
pub fn cusp_width(q: u64, c: u64) -> u64 {
    let c2 = (c as u128 * c as u128 % q as u128) as u64;
    q / gcd(if c2 == 0 { q } else { c2 }, q)
}

fn check_level(q: u64) -> Result<()> {
    if q == 0 {
        Err(Error::InvalidInput("level q must be positive".into()))
    } else {
        Ok(())
    }
}

pub fn enumerate_cusps(q: u64) -> Result<Vec<CuspClass>> {
    check_level(q)?;
    let mut out = Vec::new();
    for c in divisors(q) {
        let g = gcd(c, q / c);
        let width = cusp_width(q, c);
        for d in 1..=g {
            if gcd(d, g) == 1 {
                out.push(CuspClass { q, c, d, width });
            }
        }
    }
    Ok(out)
}

/// Number of classes with denominator `c`.
pub fn class_count(q: u64, c: u64) -> u64 {
    euler_phi(gcd(c, q / c))
}

/// Largest divisor of `q` coprime to `m`.
fn coprime_part(q: u64, m: u64) -> u64 {
    factorize(q)
        .into_iter()
        .filter(|(p, _)| !m.is_multiple_of(*p))
        .map(|(p, e)| p.pow(e))
        .product()
}

/// Solves `x = a mod m1`, `x = b mod m2` for coprime moduli.
fn crt(a: i64, m1: i64, b: i64, m2: i64) -> i64 {
    let inv = mod_inverse(m1 % m2, m2).expect("coprime moduli");
    let k = ((b - a).rem_euclid(m2) as i128 * inv as i128 % m2 as i128) as i64;
    (a + m1 * k).rem_euclid(m1 * m2)
}

/// The canonical class of the boundary point `a / c0` (`1/0` is infinity).
pub fn reduce_fraction(q: u64, a: i64, c0: u64) -> Result<CuspClass> {
    check_level(q)?;
    if a == 0 && c0 == 0 {
        return Err(Error::InvalidInput("0/0 is not a point of P^1(Q)".into()));
    }
    if gcd(a.unsigned_abs(), c0) != 1 {
        return Err(Error::InvalidInput(format!("{a}/{c0} is not in lowest terms")));
    }
    let c = gcd(c0, q);
    let qc = q / c;
    let g = gcd(c, qc);
    let width = cusp_width(q, c);
    if g == 1 {
        return Ok(CuspClass { q, c, d: 1, width });
    }
    // bottom row (c0, d0) of a matrix in SL2(Z) sending infinity to a/c0
    let d0 = mod_inverse(a, c0 as i64).expect("a is a unit modulo c0");
    // unit lambda with lambda c0 = c (mod q)
    let mu = mod_inverse(((c0 / c) % qc) as i64, qc as i64).expect("c0/c is a unit modulo q/c");
    let r = coprime_part(q, qc);
    let lambda = crt(mu, qc as i64, 1, r as i64);
    let d = (lambda as i128 * d0 as i128).rem_euclid(g as i128) as u64;
    Ok(CuspClass { q, c, d: if d == 0 { g } else { d }, width })
}

/// A scaling matrix for `cusp`, with bottom row `(c, d')`, `d' = d (mod gcd(c, q/c))`.
pub fn scaling_matrix(q: u64, cusp: &CuspClass) -> Result<ScalingMatrix> {
    check_level(q)?;
    if !q.is_multiple_of(cusp.c) {
        return Err(Error::InvalidInput(format!("{} does not divide {q}", cusp.c)));
    }
    let g = gcd(cusp.c, q / cusp.c);
    let c = cusp.c as i64;
    let dp = (0..)
        .map(|k| (cusp.d % g) as i64 + k * g as i64)
        .find(|&x| gcd(c as u64, x as u64) == 1)
        .expect("Dirichlet");
    let a = mod_inverse(dp, c).expect("coprime");
    let b = (a as i128 * dp as i128 - 1) / c as i128;
    let tau = [[a, b as i64], [c, dp]];
    let w = cusp.width as i64;
    let sigma = [[a * w, b as i64], [c * w, dp]];
    Ok(ScalingMatrix { tau, width: cusp.width, sigma })
}
