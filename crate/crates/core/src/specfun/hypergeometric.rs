//! Confluent (₁F₁) and Gauss (₂F₁) hypergeometric functions.
//!
//! Both are summed term by term; a series stops once the newest term drops
//! below 1e-16 of the running sum and fails after 500 terms. ₂F₁ maps
//! arguments away from the unit circle with the 1 − z and Pfaff
//! transformations before summing.

use num_complex::Complex64;

use super::gamma::recip_gamma;
use super::gamma_fn;
use crate::error::{Error, Result};

pub(crate) const MAX_TERMS: usize = 500;
pub(crate) const TERM_TOL: f64 = 1e-16;

/// Radius inside which the plain ₂F₁ series is summed.
const DIRECT_RADIUS: f64 = 0.75;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Kummer's confluent hypergeometric function ₁F₁(a; b; x).
pub fn hyp1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    if is_nonpositive_integer(b) {
        return Err(Error::Domain {
            function: "hyp1f1",
            arg: b,
            constraint: "b not a non-positive integer",
        });
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x < 0.0 && !is_nonpositive_integer(a) {
        // Kummer's transformation keeps every term positive for a < b.
        return Ok(x.exp() * hyp1f1_series(b - a, b, -x)?);
    }
    hyp1f1_series(a, b, x)
}

fn hyp1f1_series(a: f64, b: f64, x: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) / (b + nf) * x / (nf + 1.0);
        sum += term;
        if term == 0.0 || term.abs() < TERM_TOL * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        function: "hyp1f1",
        terms: MAX_TERMS,
        last_ratio: (term / sum).abs(),
    })
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) for complex z.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(c) {
        return Err(Error::Domain {
            function: "hyp2f1",
            arg: c,
            constraint: "c not a non-positive integer",
        });
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let one = Complex64::new(1.0, 0.0);
    if z.norm() <= DIRECT_RADIUS {
        return hyp2f1_series(a, b, c, z);
    }
    let w = one - z;
    if w.norm() <= DIRECT_RADIUS {
        if let Some(v) = one_minus_z_transform(a, b, c, z)? {
            return Ok(v);
        }
    }
    let pfaff = z / (z - one);
    if pfaff.norm() <= DIRECT_RADIUS {
        return Ok(w.powf(-a) * hyp2f1_series(a, c - b, c, pfaff)?);
    }
    // Slow but still convergent inside the unit disk.
    if z.norm() < 1.0 {
        return hyp2f1_series(a, b, c, z);
    }
    Err(Error::NonConvergence {
        function: "hyp2f1",
        terms: 0,
        last_ratio: z.norm(),
    })
}

/// Real-argument wrapper of [`hyp2f1`].
pub fn hyp2f1_real(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    Ok(hyp2f1(a, b, c, Complex64::new(x, 0.0))?.re)
}

fn hyp2f1_series(a: f64, b: f64, c: f64, z: Complex64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= z * ((a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)));
        sum += term;
        if term.norm() == 0.0 || term.norm() < TERM_TOL * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        function: "hyp2f1",
        terms: MAX_TERMS,
        last_ratio: term.norm() / sum.norm(),
    })
}

/// Connection formula around z = 1; `None` when c − a − b is an integer.
fn one_minus_z_transform(a: f64, b: f64, c: f64, z: Complex64) -> Result<Option<Complex64>> {
    let s = c - a - b;
    if s == s.round() {
        return Ok(None);
    }
    let w = Complex64::new(1.0, 0.0) - z;
    let g_c = gamma_fn(c)?;
    let coef1 = g_c * gamma_fn(s)? * recip_gamma(c - a)? * recip_gamma(c - b)?;
    let coef2 = g_c * gamma_fn(-s)? * recip_gamma(a)? * recip_gamma(b)?;
    let mut out = Complex64::new(0.0, 0.0);
    if coef1 != 0.0 {
        out += hyp2f1_series(a, b, 1.0 - s, w)? * coef1;
    }
    if coef2 != 0.0 {
        out += w.powf(s) * hyp2f1_series(c - a, c - b, 1.0 + s, w)? * coef2;
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: f64 = -5.0 / 6.0;
    const B: f64 = 11.0 / 6.0;
    const C: f64 = 17.0 / 6.0;

    fn crel(got: Complex64, re: f64, im: f64) -> f64 {
        let want = Complex64::new(re, im);
        (got - want).norm() / want.norm()
    }

    #[test]
    fn hyp1f1_identities() {
        assert_eq!(hyp1f1(A, 1.0, 0.0).unwrap(), 1.0);
        assert!((hyp1f1(1.0, 1.0, 1.0).unwrap() - std::f64::consts::E).abs() < 1e-15);
        assert!((hyp1f1(1.0, 1.0, -2.0).unwrap() - (-2.0f64).exp()).abs() < 1e-15);
        // Polynomial case terminates: 1F1(-2; 1; x) = 1 - 2x + x²/2
        let x = 3.0;
        assert!((hyp1f1(-2.0, 1.0, x).unwrap() - (1.0 - 2.0 * x + x * x / 2.0)).abs() < 1e-13);
    }

    #[test]
    fn hyp1f1_against_mpmath() {
        assert!((hyp1f1(A, 1.0, 30.0).unwrap() / -3_541_167_682.087_413_9 - 1.0).abs() < 1e-12);
        assert!((hyp1f1(A, 1.0, -3.0).unwrap() / 3.273_495_366_869_078_3 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hyp1f1_rejects_bad_b() {
        assert!(matches!(hyp1f1(1.0, -2.0, 1.0), Err(Error::Domain { .. })));
        assert!(matches!(hyp1f1(1.0, 0.0, 1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn hyp1f1_reports_nonconvergence() {
        assert!(matches!(
            hyp1f1(0.5, 1.0, 400.0),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn hyp2f1_log_identity() {
        // 2F1(1,1;2;x) = -ln(1-x)/x
        let got = hyp2f1_real(1.0, 1.0, 2.0, 0.5).unwrap();
        assert!((got - (-(0.5f64).ln() / 0.5)).abs() < 1e-14);
    }

    #[test]
    fn hyp2f1_transform_branches_against_mpmath() {
        // Direct series region
        let v = hyp2f1(A, B, C, Complex64::new(0.1, 0.3)).unwrap();
        assert!(crel(v, 0.948_980_807_373_157_93, -0.163_530_193_019_773_65) < 1e-13);
        // 1 - z region
        let v = hyp2f1(A, B, C, Complex64::new(0.95, 0.2)).unwrap();
        assert!(crel(v, 0.448_103_096_547_719_51, -0.134_049_401_703_412_16) < 1e-12);
        // Pfaff region
        let v = hyp2f1(1.0, 1.0, 2.0, Complex64::new(-3.0, 0.0)).unwrap();
        assert!((v.re - (4.0f64).ln() / 3.0).abs() < 1e-13);
    }

    #[test]
    fn hyp2f1_rejects_bad_c() {
        assert!(matches!(
            hyp2f1(1.0, 1.0, -1.0, Complex64::new(0.1, 0.0)),
            Err(Error::Domain { .. })
        ));
    }
}
