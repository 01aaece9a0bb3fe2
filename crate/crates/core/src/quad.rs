//! Simpson quadrature: an adaptive routine for normalization constants and a
//! fixed-step version used as an independent cross-check.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 60;

/// Adaptive Simpson integration of `f` over [a, b] to absolute tolerance
/// `tol`, by interval halving with Richardson correction. Errors out instead
/// of returning a value that missed the tolerance.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::InvalidConfig(format!(
            "invalid integration interval [{a}, {b}]"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "quadrature tolerance must be positive, got {tol}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson_panel(a, b, fa, fm, fb);
    recurse(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_panel(a, m, fa, flm, fm);
    let right = simpson_panel(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureDidNotConverge);
    }
    let half_tol = 0.5 * tol;
    Ok(recurse(f, a, m, fa, flm, fm, left, half_tol, depth - 1)?
        + recurse(f, m, b, fm, frm, fb, right, half_tol, depth - 1)?)
}

fn simpson_panel(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Composite Simpson rule with a fixed (even) number of panels. Used as the
/// brute-force oracle against the adaptive routine.
pub fn simpson_fixed(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels >= 2 && panels % 2 == 0, "panel count must be even");
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        // Simpson is exact on cubics.
        let v = adaptive_simpson(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - (4.0 - 4.0 + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn matches_fixed_step_oracle() {
        let f = |x: f64| (-x * x).exp();
        let adaptive = adaptive_simpson(f, 0.0, 3.0, 1e-12).unwrap();
        let fixed = simpson_fixed(f, 0.0, 3.0, 1_000_000);
        assert!((adaptive - fixed).abs() < 1e-10);
    }

    #[test]
    fn empty_interval_is_zero() {
        assert_eq!(adaptive_simpson(|x| x, 1.0, 1.0, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn unreachable_tolerance_errors() {
        // Absolute tolerance far below what f64 can represent for this value.
        let r = adaptive_simpson(|x| (10.0 * x).sin().abs() + 1.0, 0.0, 7.0, 1e-300);
        assert_eq!(r, Err(Error::QuadratureDidNotConverge));
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(adaptive_simpson(|x| x, 2.0, 1.0, 1e-10).is_err());
        assert!(adaptive_simpson(|x| x, 0.0, 1.0, 0.0).is_err());
        assert!(adaptive_simpson(|x| x, f64::NAN, 1.0, 1e-10).is_err());
    }
}
