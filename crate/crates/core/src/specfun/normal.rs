//! Standard normal distribution function.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Φ(x) = P(Z ≤ x) for a standard normal Z.
pub fn std_normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let t = x * FRAC_1_SQRT_2;
    if x < 0.0 {
        0.5 * erfc(-t)
    } else {
        1.0 - 0.5 * erfc(t)
    }
}

/// Complementary error function for t ≥ 0.
fn erfc(t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    if t < 2.5 {
        1.0 - erf_series(t)
    } else {
        erfc_continued_fraction(t)
    }
}

// erf(t) = 2/√π · e^{-t²} Σ (2t²)ⁿ t / (1·3···(2n+1)); every term is positive.
fn erf_series(t: f64) -> f64 {
    let two_t2 = 2.0 * t * t;
    let mut term = t;
    let mut sum = t;
    let mut n = 0.0;
    while term > 1e-17 * sum {
        n += 1.0;
        term *= two_t2 / (2.0 * n + 1.0);
        sum += term;
    }
    2.0 / PI.sqrt() * (-t * t).exp() * sum
}

// erfc(t) = e^{-t²}/√π · 1/(t + (1/2)/(t + 1/(t + (3/2)/(t + ...)))), modified Lentz.
fn erfc_continued_fraction(t: f64) -> f64 {
    if t > 27.3 {
        return 0.0;
    }
    let tiny = 1e-300;
    let mut f = t;
    let mut c = t;
    let mut d = 0.0;
    for k in 1..500 {
        let a = 0.5 * k as f64;
        d = t + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = t + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-t * t).exp() / (PI.sqrt() * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetry_point_and_tails() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        assert!((std_normal_cdf(40.0) - 1.0).abs() <= 1e-15);
        assert_eq!(std_normal_cdf(-40.0), 0.0);
    }

    #[test]
    fn against_mpmath() {
        let cases = [
            (2.199, 0.986_061_038_848_893_3),
            (0.7, 0.758_036_347_776_926_97),
            (-5.0, 2.866_515_718_791_939_1e-7),
            (-10.0, 7.619_853_024_160_526_1e-24),
        ];
        for (x, want) in cases {
            let got = std_normal_cdf(x);
            assert!((got - want).abs() < 1e-15, "x = {x}: {got} vs {want}");
            assert!(((got - want) / want).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn continuous_across_method_switch() {
        let x = 2.5 * std::f64::consts::SQRT_2;
        let lo = std_normal_cdf(-x * (1.0 - 1e-12));
        let hi = std_normal_cdf(-x * (1.0 + 1e-12));
        assert!(((lo - hi) / lo).abs() < 1e-10);
    }
}
