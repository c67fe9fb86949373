use std::f64::consts::E;

use num_complex::Complex64;
use proptest::prelude::*;

use atmoqkd::specfun::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn lambert_w_inverts_w_exp_w(x in -1.0 / E..=10.0f64) {
        let w = lambert_w(x).unwrap();
        prop_assert!((w * w.exp() - x).abs() <= 1e-10 * x.abs().max(1.0));
    }

    #[test]
    fn i0_is_even_and_at_least_one(x in -600.0..600.0f64) {
        let a = bessel_i(0, x).unwrap();
        prop_assert!(a >= 1.0);
        prop_assert_eq!(a, bessel_i(0, -x).unwrap());
    }

    #[test]
    fn i1_is_odd(x in -600.0..600.0f64) {
        prop_assert_eq!(bessel_i(1, x).unwrap(), -bessel_i(1, -x).unwrap());
    }

    #[test]
    fn bessel_k_is_even_in_order(nu in -8.0..8.0f64, x in 0.01..50.0f64) {
        let a = bessel_k(nu, x).unwrap();
        let b = bessel_k(-nu, x).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs());
    }

    #[test]
    fn hypergeometric_at_zero_is_one(a in -5.0..5.0f64, b in 0.1..5.0f64, c in 0.1..5.0f64) {
        prop_assert_eq!(hyp1f1(a, b, 0.0).unwrap(), 1.0);
        prop_assert_eq!(hyp2f1(a, b, c, Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn normal_cdf_symmetry(x in -40.0..40.0f64) {
        prop_assert!((std_normal_cdf(x) + std_normal_cdf(-x) - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn normal_cdf_is_monotone(x in -40.0..40.0f64, dx in 0.0..5.0f64) {
        prop_assert!(std_normal_cdf(x + dx) >= std_normal_cdf(x));
    }
}
