//! The one-step density operator H_h and its finite-h generator estimate.
//!
//! H_h maps a density through one recursion iteration. For smooth densities
//! and x away from the drift discontinuity, (H_h[f] - f)/h approaches
//! G[f](x) = k sign(x) f'(x) + f''(x)/2 as h shrinks, and the Laplace
//! stationary density lies in the kernel of G away from 0.

use crate::drift::sign;
use crate::error::{Error, Result};
use crate::grid::DensityGrid;
use crate::recursion::recursion_step;

/// The operator taking f_n to f_{n+1}; identical to `recursion_step`, kept
/// as a named operation to match the operator framing.
pub fn apply_hh(f: &DensityGrid, h: f64, k: f64) -> Result<DensityGrid> {
    recursion_step(f, h, k)
}

/// Finite-h generator estimate (H_h[f](x_i) - f(x_i)) / h at every node.
pub fn generator_estimate(f: &DensityGrid, h: f64, k: f64) -> Result<Vec<f64>> {
    let stepped = apply_hh(f, h, k)?;
    Ok(stepped
        .values()
        .iter()
        .zip(f.values())
        .map(|(after, before)| (after - before) / h)
        .collect())
}

/// Closed-form generator limit k sign(x) f'(x) + f''(x)/2 for an
/// analytically differentiable density. Undefined at x = 0, where the
/// limiting operator has no specified value.
pub fn generator_limit_reference(
    k: f64,
    x: f64,
    df: impl Fn(f64) -> f64,
    d2f: impl Fn(f64) -> f64,
) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::UndefinedAtOrigin);
    }
    Ok(k * sign(x) * df(x) + 0.5 * d2f(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridGeometry;
    use crate::recursion::initial_density;

    fn std_normal_grid(dx: f64, half_span: f64) -> DensityGrid {
        let g = GridGeometry::new(half_span, dx).unwrap();
        DensityGrid::from_fn(g, |x| {
            (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
        })
        .unwrap()
        .renormalized()
        .unwrap()
    }

    #[test]
    fn apply_hh_delegates_to_recursion_step() {
        let f = initial_density(0.01, GridGeometry::new(4.0, 0.001).unwrap()).unwrap();
        let a = apply_hh(&f, 0.01, 1.0).unwrap();
        let b = recursion_step(&f, 0.01, 1.0).unwrap();
        assert_eq!(a.values(), b.values());
        assert!((a.mass() - 1.0).abs() < 1e-6);
        assert!(a.mirror_asymmetry() < 1e-10);
    }

    #[test]
    fn reference_values() {
        let g1 = (-0.5f64).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let df = |x: f64| -x * (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let d2f =
            |x: f64| (x * x - 1.0) * (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let at_plus = generator_limit_reference(1.0, 1.0, df, d2f).unwrap();
        assert!((at_plus + g1).abs() < 1e-15);
        let at_minus = generator_limit_reference(1.0, -1.0, df, d2f).unwrap();
        assert!((at_minus + g1).abs() < 1e-15);

        // Laplace density: exact cancellation away from zero.
        let k = 1.0;
        let lap1 = |x: f64| -2.0 * k * k * (-2.0 * k * x).exp();
        let lap2 = |x: f64| 4.0 * k * k * k * (-2.0 * k * x).exp();
        let at = generator_limit_reference(k, 0.7, lap1, lap2).unwrap();
        assert!(at.abs() < 1e-15);

        assert!(matches!(
            generator_limit_reference(1.0, 0.0, df, d2f),
            Err(Error::UndefinedAtOrigin)
        ));
    }

    #[test]
    fn estimate_matches_reference_for_gaussian() {
        let h = 1e-3;
        let dx = h / 10.0;
        let f = std_normal_grid(dx, 6.0);
        let est = generator_estimate(&f, h, 1.0).unwrap();
        let i = f.center() + (1.0 / dx).round() as usize; // node at x = 1
        let g1 = (-0.5f64).exp() / (2.0 * std::f64::consts::PI).sqrt();
        assert!((est[i] + g1).abs() < 0.02, "estimate {} vs {}", est[i], -g1);
    }

    #[test]
    fn estimate_is_even_for_even_density() {
        let f = std_normal_grid(1e-3, 6.0);
        let est = generator_estimate(&f, 1e-2, 1.0).unwrap();
        let n = est.len();
        let asym = (0..n / 2)
            .map(|i| (est[i] - est[n - 1 - i]).abs())
            .fold(0.0, f64::max);
        assert!(asym < 1e-9, "asymmetry {asym}");
    }
}
