//! Gamma function via the Lanczos approximation (g = 7, 9 terms).

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument for which Γ(x) is representable.
const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn lanczos_sum(x: f64) -> f64 {
    // x already shifted by -1
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

/// Γ(x) for real `x`, relative accuracy about 1e-15.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain {
            function: "gamma_fn",
            arg: x,
            constraint: "finite argument",
        });
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole {
            function: "gamma_fn",
            arg: x,
        });
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow {
            function: "gamma_fn",
            arg: x,
        });
    }
    // Exact factorials for small positive integers.
    if x == x.floor() && x <= 23.0 {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return Ok(f);
    }
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let g = gamma_fn(1.0 - x)?;
        return Ok(PI / ((PI * x).sin() * g));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z))
}

/// ln Γ(x) for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "ln_gamma",
            arg: x,
            constraint: "x > 0",
        });
    }
    if x < 0.5 {
        // ln Γ(x) = ln π - ln sin(πx) - ln Γ(1-x)
        return Ok(PI.ln() - (PI * x).sin().ln() - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// 1/Γ(x), which is entire: zero at the poles of Γ.
pub(crate) fn recip_gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Ok(0.0);
    }
    Ok(1.0 / gamma_fn(x)?)
}
