//! Modified Bessel functions.
//!
//! `I₀`, `I₁` use the ascending power series below |x| = 30 and the Hankel
//! asymptotic expansion above it. `K_ν` for real order follows Temme's
//! series (x < 2) and Steed's continued fraction (x ≥ 2) for the fractional
//! order μ ∈ [-½, ½], then forward recurrence up to ν, carried in log scale
//! so large orders do not overflow.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 30.0;
const MAX_TERMS: usize = 500;
const EPS: f64 = 1e-16;
const LN_MAX: f64 = 709.782_712_893_384;

fn check_order(order: u32) -> Result<()> {
    if order > 1 {
        return Err(Error::Domain {
            function: "bessel_i",
            arg: order as f64,
            constraint: "order in {0, 1}",
        });
    }
    Ok(())
}

/// Exponentially scaled e^{-|x|}·Iₙ(x), n ∈ {0, 1}.
pub fn bessel_i_scaled(order: u32, x: f64) -> Result<f64> {
    check_order(order)?;
    if !x.is_finite() {
        return Err(Error::Domain {
            function: "bessel_i",
            arg: x,
            constraint: "finite x",
        });
    }
    let ax = x.abs();
    let v = if ax <= SERIES_LIMIT {
        power_series(order, ax)? * (-ax).exp()
    } else {
        asymptotic_scaled(order, ax)
    };
    Ok(if order == 1 && x < 0.0 { -v } else { v })
}

/// Modified Bessel function of the first kind Iₙ(x), n ∈ {0, 1}.
pub fn bessel_i(order: u32, x: f64) -> Result<f64> {
    check_order(order)?;
    let ax = x.abs();
    if ax <= SERIES_LIMIT {
        let v = power_series(order, ax)?;
        return Ok(if order == 1 && x < 0.0 { -v } else { v });
    }
    let scaled = bessel_i_scaled(order, x)?;
    let ln = scaled.abs().ln() + ax;
    if ln > LN_MAX {
        return Err(Error::Overflow {
            function: "bessel_i",
            arg: x,
        });
    }
    Ok(scaled * ax.exp())
}

fn power_series(order: u32, ax: f64) -> Result<f64> {
    let half = 0.5 * ax;
    let q = half * half;
    let mut term = if order == 0 { 1.0 } else { half };
    let mut sum = term;
    let n = order as f64;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * (kf + n));
        sum += term;
        if term < EPS * sum {
            return Ok(sum);
        }
    }
    if sum == 0.0 {
        return Ok(0.0);
    }
    Err(Error::NonConvergence {
        function: "bessel_i",
        terms: MAX_TERMS,
        last_ratio: term / sum,
    })
}

fn asymptotic_scaled(order: u32, ax: f64) -> f64 {
    // e^{-x} Iₙ(x) ~ (2πx)^{-1/2} Σ (-1)^k Π_{j≤k}(4n² - (2j-1)²) / (k! (8x)^k)
    let mu = 4.0 * (order * order) as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let j = (2 * k - 1) as f64;
        let next = -term * (mu - j * j) / (k as f64 * 8.0 * ax);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < EPS * sum.abs() {
            break;
        }
    }
    sum / (2.0 * PI * ax).sqrt()
}

/// ln K_ν(x) for real order and x > 0.
pub fn bessel_k_ln(order: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "bessel_k",
            arg: x,
            constraint: "x > 0",
        });
    }
    if !order.is_finite() {
        return Err(Error::Domain {
            function: "bessel_k",
            arg: order,
            constraint: "finite order",
        });
    }
    let nu = order.abs();
    let nl = (nu + 0.5).floor() as usize;
    let mu = nu - nl as f64;
    let (mut k_mu, mut k_mu1) = if x < 2.0 {
        temme_series(mu, x)?
    } else {
        steed_fraction(mu, x)?
    };

    // Forward recurrence K_{μ+i+1} = 2(μ+i)/x · K_{μ+i} + K_{μ+i-1}, renormalized.
    let mut log_scale = 0.0;
    let xi2 = 2.0 / x;
    for i in 1..=nl {
        let next = (mu + i as f64) * xi2 * k_mu1 + k_mu;
        k_mu = k_mu1;
        k_mu1 = next;
        if k_mu1 > 1e250 {
            k_mu *= 1e-250;
            k_mu1 *= 1e-250;
            log_scale += 250.0 * std::f64::consts::LN_10;
        }
    }
    Ok(k_mu.ln() + log_scale)
}

/// Modified Bessel function of the second kind K_ν(x), x > 0.
pub fn bessel_k(order: f64, x: f64) -> Result<f64> {
    let ln = bessel_k_ln(order, x)?;
    if ln > LN_MAX {
        return Err(Error::Overflow {
            function: "bessel_k",
            arg: x,
        });
    }
    Ok(ln.exp())
}

/// Chebyshev evaluation of Γ₁, Γ₂ for |μ| ≤ ½ (Temme's auxiliary functions).
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    const C1: [f64; 7] = [
        -1.142_022_680_371_168e0,
        6.516_511_267_073_7e-3,
        3.087_090_173_086e-4,
        -3.470_626_964_9e-6,
        6.943_766_4e-9,
        3.677_95e-11,
        -1.356e-13,
    ];
    const C2: [f64; 8] = [
        1.843_740_587_300_905e0,
        -7.685_284_084_478_67e-2,
        1.271_927_136_654_6e-3,
        -4.971_736_704_2e-6,
        -3.312_611_98e-8,
        2.423_096e-10,
        -1.702e-13,
        -1.49e-15,
    ];
    let xx = 8.0 * mu * mu - 1.0;
    let gam1 = chebyshev(&C1, xx);
    let gam2 = chebyshev(&C2, xx);
    let gampl = gam2 - mu * gam1; // 1/Γ(1+μ)
    let gammi = gam2 + mu * gam1; // 1/Γ(1-μ)
    (gam1, gam2, gampl, gammi)
}

fn chebyshev(c: &[f64], x: f64) -> f64 {
    let y2 = 2.0 * x;
    let (mut d, mut dd) = (0.0, 0.0);
    for &cj in c.iter().skip(1).rev() {
        let sv = d;
        d = y2 * d - dd + cj;
        dd = sv;
    }
    x * d - dd + 0.5 * c[0]
}

fn temme_series(mu: f64, x: f64) -> Result<(f64, f64)> {
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < 1e-16 {
        1.0
    } else {
        pimu / pimu.sin()
    };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < 1e-16 { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    let mu2 = mu * mu;
    for i in 1..MAX_TERMS {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu2);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < EPS * sum.abs() {
            return Ok((sum, sum1 * 2.0 / x));
        }
    }
    Err(Error::NonConvergence {
        function: "bessel_k",
        terms: MAX_TERMS,
        last_ratio: f64::NAN,
    })
}

fn steed_fraction(mu: f64, x: f64) -> Result<(f64, f64)> {
    let mu2 = mu * mu;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            let h = a1 * h;
            let k_mu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
            let k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
            return Ok((k_mu, k_mu1));
        }
    }
    Err(Error::NonConvergence {
        function: "bessel_k",
        terms: 10_000,
        last_ratio: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn i_values_at_zero() {
        assert_eq!(bessel_i(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn i_against_mpmath() {
        // mpmath besseli, 30 digits
        assert!(rel(bessel_i(0, 1.0).unwrap(), 1.266_065_877_752_008_3) < 1e-14);
        assert!(rel(bessel_i(1, 1.0).unwrap(), 0.565_159_103_992_485_03) < 1e-14);
        assert!(rel(bessel_i(0, 5.0).unwrap(), 27.239_871_823_604_447) < 1e-14);
        assert!(rel(bessel_i(1, 2.5).unwrap(), 2.516_716_245_288_698_4) < 1e-14);
        assert!(rel(bessel_i(0, 35.0).unwrap(), 1.073_388_184_945_140_6e14) < 1e-12);
        assert!(rel(bessel_i(1, 50.0).unwrap(), 2.903_078_590_103_556_8e20) < 1e-12);
    }

    #[test]
    fn i_parity_and_overflow() {
        assert_eq!(bessel_i(0, -3.0).unwrap(), bessel_i(0, 3.0).unwrap());
        assert_eq!(bessel_i(1, -3.0).unwrap(), -bessel_i(1, 3.0).unwrap());
        assert!(matches!(bessel_i(0, 800.0), Err(Error::Overflow { .. })));
        assert!(bessel_i_scaled(0, 800.0).unwrap() > 0.0);
        assert!(bessel_i(2, 1.0).is_err());
    }

    #[test]
    fn i_scaled_continuous_at_switch() {
        let below = bessel_i_scaled(0, SERIES_LIMIT).unwrap();
        let above = bessel_i_scaled(0, SERIES_LIMIT * (1.0 + 1e-12)).unwrap();
        assert!(rel(below, above) < 1e-12);
        let below = bessel_i_scaled(1, SERIES_LIMIT).unwrap();
        let above = bessel_i_scaled(1, SERIES_LIMIT * (1.0 + 1e-12)).unwrap();
        assert!(rel(below, above) < 1e-12);
    }

    #[test]
    fn k_half_order_closed_form() {
        let expect = (PI / 2.0).sqrt() * (-1.0f64).exp();
        assert!(rel(bessel_k(0.5, 1.0).unwrap(), expect) < 1e-12);
        assert!(rel(bessel_k(-0.5, 1.0).unwrap(), expect) < 1e-12);
    }

    #[test]
    fn k_against_mpmath() {
        assert!(rel(bessel_k(2.0, 3.0).unwrap(), 0.061_510_458_471_742_038) < 1e-12);
        assert!(rel(bessel_k(0.0, 0.1).unwrap(), 2.427_069_024_702_016_6) < 1e-12);
        assert!(rel(bessel_k(3.7, 0.5).unwrap(), 344.198_342_087_044_16) < 1e-12);
        assert!(rel(bessel_k(1.3, 10.0).unwrap(), 1.927_209_506_608_460_7e-5) < 1e-12);
        assert!(rel(bessel_k(5.25, 2.0).unwrap(), 14.020_371_044_471_58) < 1e-12);
    }

    #[test]
    fn k_large_order_in_log_space() {
        // K_ν(x) ~ Γ(ν)/2 (2/x)^ν for x ≪ √ν
        let nu: f64 = 300.0;
        let x: f64 = 0.5;
        let approx = crate::specfun::ln_gamma(nu).unwrap() - 2f64.ln() + nu * (2.0 / x).ln();
        let got = bessel_k_ln(nu, x).unwrap();
        assert!((got - approx).abs() / approx < 1e-3);
        assert!(matches!(bessel_k(nu, x), Err(Error::Overflow { .. })));
    }

    #[test]
    fn k_domain() {
        assert!(matches!(bessel_k(1.0, 0.0), Err(Error::Domain { .. })));
        assert!(matches!(bessel_k(1.0, -2.0), Err(Error::Domain { .. })));
    }
}
