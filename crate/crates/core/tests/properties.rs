use num_complex::Complex64;
use proptest::prelude::*;
use rslocal::cusps::{enumerate_cusps, index_psi, reduce_fraction, scaling_matrix};
use rslocal::exact::{rat, LaurentPoly, QSqrtP};
use rslocal::fourier::fourier_profile;
use rslocal::rankin_selberg::{durand_kerner, fe_discrepancy, jstar, sumtm_target};
use rslocal::rep::{default_b_samples, enumerate_reps, RepDescriptor};

const P: u32 = 3;

fn qsqrt() -> impl Strategy<Value = QSqrtP> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(a, b, c, d)| QSqrtP::new(rat(a, b), rat(c, d), P))
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    proptest::collection::vec((-4i32..=4, qsqrt()), 0..5).prop_map(|terms| {
        let mut f = LaurentPoly::zero(P);
        for (e, c) in terms {
            f.add_term(e, c);
        }
        f
    })
}

fn descriptor() -> impl Strategy<Value = RepDescriptor> {
    let all: Vec<RepDescriptor> = [2u32, 3, 5]
        .iter()
        .flat_map(|&p| enumerate_reps(p, 8, &default_b_samples(p)))
        .filter(|d| d.validate().unwrap().n >= 1)
        .collect();
    proptest::sample::select(all)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn fe_substitution_is_an_involution_and_a_ring_map(a in laurent(), b in laurent()) {
        prop_assert_eq!(a.fe_substitute().fe_substitute(), a.clone());
        prop_assert_eq!((&a * &b).fe_substitute(), &a.fe_substitute() * &b.fe_substitute());
    }

    #[test]
    fn laurent_serde_round_trip(a in laurent()) {
        let text = serde_json::to_string(&a).unwrap();
        let back: LaurentPoly = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn exact_and_float_evaluation_agree(a in laurent(), num in 1i64..9, den in 1i64..9) {
        let t = rat(num, den);
        let exact = a.eval_rational(&t).unwrap().to_f64();
        let float = a.eval_t(Complex64::new(num as f64 / den as f64, 0.0)).re;
        prop_assert!((exact - float).abs() <= 1e-9 * (1.0 + exact.abs()));
    }

    #[test]
    fn normalization_is_idempotent(a in laurent()) {
        prop_assume!(!a.is_zero());
        let f = a.normalize_unit().unwrap();
        prop_assert_eq!(f.normalize_unit().unwrap(), f.clone());
        prop_assert_eq!(f.min_exp(), Some(0));
    }

    #[test]
    fn descriptor_serde_round_trip(d in descriptor()) {
        let text = serde_json::to_string(&d).unwrap();
        let back: RepDescriptor = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn functional_equation_and_sum_rule(d in descriptor()) {
        let inv = d.validate().unwrap();
        let js = jstar(&d).unwrap();
        prop_assert!(fe_discrepancy(&js, inv.big_n).is_zero());
        let at = js.eval_rational(&rat(1, d.p as i64)).unwrap();
        prop_assert_eq!(at, QSqrtP::rational(sumtm_target(&d).unwrap(), d.p));
    }

    #[test]
    fn atkin_lehner_symmetry(d in descriptor()) {
        let n = d.validate().unwrap().n;
        prop_assume!(n >= 2);
        for j in 0..=n {
            let a = fourier_profile(&d, j, 8).unwrap();
            let b = fourier_profile(&d, n - j, 8).unwrap();
            prop_assert_eq!(a.values_sq, b.values_sq);
        }
    }

    #[test]
    fn cusp_widths_sum_to_the_index(q in 1u64..5000) {
        let cusps = enumerate_cusps(q).unwrap();
        prop_assert_eq!(cusps.iter().map(|c| c.width).sum::<u64>(), index_psi(q));
    }

    #[test]
    fn reduction_is_translation_invariant(q in 1u64..600, c in 1u64..600, a in -500i64..500, k in -5i64..5) {
        prop_assume!(num_integer::gcd(a.unsigned_abs(), c) == 1);
        let base = reduce_fraction(q, a, c).unwrap();
        prop_assert_eq!(reduce_fraction(q, a + k * c as i64, c).unwrap(), base);
        prop_assert_eq!(reduce_fraction(q, -a, c).unwrap().c, base.c);
    }

    #[test]
    fn scaling_matrices_fix_their_cusp(q in 1u64..800) {
        for cusp in enumerate_cusps(q).unwrap() {
            let m = scaling_matrix(q, &cusp).unwrap();
            prop_assert_eq!(m.det_tau(), 1);
            prop_assert!(m.stabilizer_check(q));
            let (a, c) = (m.tau[0][0], m.tau[1][0]);
            prop_assert_eq!(reduce_fraction(q, a, c.unsigned_abs()).unwrap(), cusp);
        }
    }

    #[test]
    fn durand_kerner_recovers_planted_roots(roots in proptest::collection::vec((-2.0f64..2.0, 0.1f64..2.0), 1..4)) {
        // conjugate pairs make the polynomial real
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        let mut planted = Vec::new();
        for (re, im) in roots {
            for z in [Complex64::new(re, im), Complex64::new(re, -im)] {
                planted.push(z);
                let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
                for (i, c) in coeffs.iter().enumerate() {
                    next[i] -= c * z;
                    next[i + 1] += c;
                }
                coeffs = next;
            }
        }
        let real: Vec<f64> = coeffs.iter().map(|c| c.re).collect();
        let found = durand_kerner(&real).unwrap();
        prop_assert_eq!(found.len(), planted.len());
        for z in planted {
            let best = found.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(best < 1e-5, "{z} missing from {found:?}");
        }
    }
}
