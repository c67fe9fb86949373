//! Principal branch of the Lambert W function.

use std::f64::consts::E;

use crate::error::{Error, Result};

const BRANCH_POINT: f64 = -1.0 / E;
const MAX_ITER: usize = 64;

/// W₀(x) for `x ≥ -1/e`, solving w·eʷ = x with Halley's method.
pub fn lambert_w(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain {
            function: "lambert_w",
            arg: x,
            constraint: "finite x",
        });
    }
    if x < BRANCH_POINT {
        // Rounding of -1/e itself lands a hair below the true branch point.
        if x > BRANCH_POINT - 4.0 * f64::EPSILON {
            return Ok(-1.0);
        }
        return Err(Error::Domain {
            function: "lambert_w",
            arg: x,
            constraint: "x >= -1/e",
        });
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    let mut w = initial_guess(x);
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        if f == 0.0 {
            return Ok(w);
        }
        let wp1 = w + 1.0;
        if wp1.abs() < 1e-300 {
            return Ok(w);
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            return Ok(w);
        }
    }
    Ok(w)
}

fn initial_guess(x: f64) -> f64 {
    if x < -0.25 {
        // Branch-point expansion in p = sqrt(2(ex + 1)).
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < 3.0 {
        (1.0 + x).ln() * 0.8
    } else {
        let l = x.ln();
        l - l.ln()
    }
}

/// W₀(eʸ), usable when eʸ itself overflows.
pub fn lambert_w_of_exp(y: f64) -> Result<f64> {
    if y < 600.0 {
        return lambert_w(y.exp());
    }
    // Solve w + ln w = y.
    let mut w = y - y.ln();
    for _ in 0..MAX_ITER {
        let f = w + w.ln() - y;
        let step = f / (1.0 + 1.0 / w);
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w {
            break;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_points() {
        assert_eq!(lambert_w(0.0).unwrap(), 0.0);
        assert!((lambert_w(E).unwrap() - 1.0).abs() < 1e-15);
        assert!((lambert_w(BRANCH_POINT).unwrap() + 1.0).abs() < 1e-7);
    }

    #[test]
    fn below_branch_point_is_domain_error() {
        assert!(matches!(lambert_w(-0.4), Err(Error::Domain { .. })));
    }

    #[test]
    fn large_arguments_via_log() {
        for &y in &[10.0, 100.0, 599.0, 650.0, 5_000.0, 1e6] {
            let w = lambert_w_of_exp(y).unwrap();
            assert!(((w + w.ln()) - y).abs() < 1e-12 * y.max(1.0), "y = {y}");
        }
        let direct = lambert_w(1e5).unwrap();
        let via_log = lambert_w_of_exp(1e5f64.ln()).unwrap();
        assert!((direct - via_log).abs() < 1e-13 * direct);
    }
}
