use proptest::prelude::*;

use atmoqkd::channel::{derive_params, extinction_transmittance, rytov_variance, ExtinctionCoeffs, LinkScenario, Regime, Season};

fn season() -> impl Strategy<Value = Season> {
    prop::sample::select(Season::ALL.to_vec())
}

proptest! {
    #[test]
    fn extinction_is_multiplicative_and_decreasing(
        c in prop::array::uniform4(0.0..0.1f64),
        l1 in 0.0..2e4f64,
        l2 in 1.0..2e4f64,
    ) {
        let e = ExtinctionCoeffs::from_per_km(c[0], c[1], c[2], c[3]);
        let joint = extinction_transmittance(&e, l1 + l2);
        let split = extinction_transmittance(&e, l1) * extinction_transmittance(&e, l2);
        prop_assert!((joint - split).abs() <= 1e-12);
        if e.total() > 0.0 {
            prop_assert!(joint < extinction_transmittance(&e, l1));
        }
    }

    #[test]
    fn rytov_scales_with_eleven_sixths_power(s in season(), l in 100.0..3e4f64) {
        let a = rytov_variance(&LinkScenario::reference(s, l));
        let b = rytov_variance(&LinkScenario::reference(s, 2.0 * l));
        prop_assert!((b / a / 2f64.powf(11.0 / 6.0) - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn beam_parameters_are_consistent(s in season(), l in 1.0..1e5f64, w0 in 0.001..0.5f64) {
        let mut sc = LinkScenario::reference(s, l);
        sc.beam_waist = w0;
        let p = derive_params(&sc);
        prop_assert!((p.theta + p.theta_bar - 1.0).abs() <= 4.0 * f64::EPSILON);
        prop_assert!(p.lambda <= 0.5);
        prop_assert!(p.theta > 0.0 && p.theta < 1.0 && p.lambda > 0.0);
        prop_assert_eq!(p.regime == Regime::Weak, p.rytov < 1.0);
        prop_assert!(p.beam_radius >= w0);
    }
}
