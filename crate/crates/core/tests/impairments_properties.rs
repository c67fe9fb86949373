use proptest::prelude::*;

use atmoqkd::channel::{derive_params, LinkScenario, Season, SPEED_OF_LIGHT};
use atmoqkd::fading::{beam_statistics, broadened_half_width, pulse_half_width, BeamStatistics};
use atmoqkd::impairments::{interruption_probability, phase_excess_noise};

fn stats(var_x: f64) -> BeamStatistics {
    let s = LinkScenario::reference(Season::Summer, 10e3);
    BeamStatistics {
        var_x,
        var_y: var_x,
        ..beam_statistics(&derive_params(&s), s.beam_waist)
    }
}

proptest! {
    #[test]
    fn outage_monotone_in_wander_focal_length_and_core(
        v in 0.0..0.1f64, dv in 0.0..0.1f64,
        f in 0.01..1.0f64, df in 0.0..1.0f64,
        d in 1e-6..1e-4f64, dd in 0.0..1e-4f64,
        l in 100.0..3e4f64,
    ) {
        let base = LinkScenario { focal_length: f, fiber_core_diameter: d, ..LinkScenario::reference(Season::Summer, l) };
        let p = |s: &LinkScenario, v: f64| interruption_probability(s, &stats(v)).unwrap().probability;
        let p0 = p(&base, v);
        prop_assert!((0.0..=1.0).contains(&p0));
        prop_assert!(p(&base, v + dv) >= p0);
        let longer = LinkScenario { focal_length: f + df, ..base.clone() };
        let wider = LinkScenario { fiber_core_diameter: d + dd, ..base.clone() };
        prop_assert!(p(&longer, v) >= p0);
        prop_assert!(p(&wider, v) <= p0);
    }

    #[test]
    fn phase_noise_is_linear(va in 0.0..50.0f64, decor in 0.0..0.4f64, l in 100.0..3e4f64, winter in any::<bool>()) {
        let season = if winter { Season::Winter } else { Season::Summer };
        let s = LinkScenario { modulation_variance: va, lo_decorrelation: decor, ..LinkScenario::reference(season, l) };
        let pulse = broadened_half_width(pulse_half_width(s.prf, s.duty_ratio).unwrap(), &s);
        let r = phase_excess_noise(&s, &pulse);
        let r_va = phase_excess_noise(&LinkScenario { modulation_variance: 2.0 * va, ..s.clone() }, &pulse);
        let r_rho = phase_excess_noise(&LinkScenario { lo_decorrelation: 2.0 * decor, ..s.clone() }, &pulse);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs();
        prop_assert!(close(r_va.excess_noise, 2.0 * r.excess_noise));
        prop_assert!(close(r_rho.excess_noise, 2.0 * r.excess_noise));
        prop_assert_eq!(r.mean_arrival, l / SPEED_OF_LIGHT);
        prop_assert!(r.excess_noise >= 0.0 && r.delta_t_variance >= 0.0);
        prop_assert!(close(r.phase_variance, r.omega * r.omega * r.delta_t_variance) || r.phase_variance == 0.0);
    }
}
