//! Numerical check of the transform identity relating the shifted density
//! to the Fourier and half-line (Laplace) transforms of the original:
//! for even f,
//!
//!   F{shift(f)}(w) = cos(w h k) Re F{f}(w) - 2 sin(w h k) Im L{f}(w),
//!
//! where L is the transform over the positive half-line evaluated at
//! imaginary argument. The identity is a diagnostic; it plays no role in
//! the recursion itself.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::DensityGrid;
use crate::recursion::shift_and_mask;

/// Evenness tolerance required of densities fed to `identity_check`.
pub const EVENNESS_TOL: f64 = 1e-8;

/// One evaluated frequency of the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSample {
    pub omega: f64,
    /// Transform of the shifted density, by direct integration.
    pub lhs: Complex64,
    /// cos(w h k) Re F(w) - 2 sin(w h k) Im L(w).
    pub rhs: f64,
    pub residual: f64,
}

/// True when the grid resolves the oscillation exp(-i w x), i.e. |w| dx
/// stays well below one radian per node.
pub fn omega_resolved(omega: f64, dx: f64) -> bool {
    (omega * dx).abs() <= 0.5
}

/// Trapezoidal approximation of the Fourier integral of f at frequency w.
pub fn fourier_of_density(f: &DensityGrid, omega: f64) -> Complex64 {
    let dx = f.dx();
    let n = f.len();
    let mut acc = Complex64::ZERO;
    for i in 0..n {
        let x = f.node(i);
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        acc += w * f.values()[i] * Complex64::new(0.0, -omega * x).exp();
    }
    acc * dx
}

/// Trapezoidal approximation of the half-line transform
/// integral over [0, L] of f(x) exp(-i w x), with the node at 0 weighted 1/2.
pub fn laplace_halfline_transform(f: &DensityGrid, omega: f64) -> Complex64 {
    let dx = f.dx();
    let n = f.len();
    let c = f.center();
    let mut acc = Complex64::ZERO;
    for i in c..n {
        let x = f.node(i);
        let w = if i == c || i == n - 1 { 0.5 } else { 1.0 };
        acc += w * f.values()[i] * Complex64::new(0.0, -omega * x).exp();
    }
    acc * dx
}

/// Evaluates both sides of the identity for an even unit-mass density at the
/// given frequencies.
pub fn identity_check(
    f: &DensityGrid,
    h: f64,
    k: f64,
    omegas: &[f64],
) -> Result<Vec<TransformSample>> {
    let asym = f.mirror_asymmetry();
    if asym > EVENNESS_TOL {
        return Err(Error::NotEven {
            asymmetry: asym,
            tol: EVENNESS_TOL,
        });
    }
    f.check_unit_mass(crate::recursion::DEFAULT_MASS_TOL)?;
    let shifted = shift_and_mask(f, h, k)?;
    let hk = h * k;
    omegas
        .iter()
        .map(|&omega| {
            let lhs = fourier_of_density(&shifted, omega);
            let full = fourier_of_density(f, omega);
            let half = laplace_halfline_transform(f, omega);
            let rhs = (omega * hk).cos() * full.re - 2.0 * (omega * hk).sin() * half.im;
            Ok(TransformSample {
                omega,
                lhs,
                rhs,
                residual: (lhs - Complex64::new(rhs, 0.0)).norm(),
            })
        })
        .collect()
}
