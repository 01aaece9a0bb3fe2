//! Closed-form stationary densities of the two drift laws and the
//! finite-difference residual of the stationary equation.
//!
//! For the exact sign drift the stationary density is the Laplace density
//! k exp(-2k|x|). For the smoothed drift it is a three-piece function: a
//! quartic-exponential core on [-1/N, 1/N] matched continuously to
//! exponential tails, with the normalization constant phi0 computed by
//! quadrature.

use serde::Serialize;

use crate::drift::sign;
use crate::error::{Error, Result};
use crate::grid::{DensityGrid, GridGeometry};
use crate::quad::adaptive_simpson;

/// Default absolute tolerance for the phi0 quadrature.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// Default exclusion radius around the drift discontinuity when evaluating
/// the stationary residual.
pub const DEFAULT_RESIDUAL_EXCLUDE: f64 = 0.1;

/// Stationary density value k exp(-2k|x|); equals k at x = 0.
pub fn laplace_density(x: f64, k: f64) -> f64 {
    k * (-2.0 * k * x.abs()).exp()
}

/// Laplace density sampled on a grid, without renormalization.
pub fn laplace_grid(k: f64, geometry: GridGeometry) -> Result<DensityGrid> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidConfig(format!("gain k must be positive, got {k}")));
    }
    DensityGrid::from_fn(geometry, |x| laplace_density(x, k))
}

/// Normalization constant of the smoothed-drift stationary density:
///
///   phi0 = 1 / ( 2 I + (1/k) exp(-5k/(4N)) ),
///   I    = integral over [0, 1/N] of exp(-(3kN/2) x^2 + (kN^3/4) x^4).
///
/// The integral is evaluated by adaptive Simpson quadrature to absolute
/// error `quad_tol`.
pub fn compute_phi0(k: f64, sharpness: u32, quad_tol: f64) -> Result<f64> {
    validate_smoothed_params(k, sharpness)?;
    let n = f64::from(sharpness);
    let integral = adaptive_simpson(
        |x| (-1.5 * k * n * x * x + 0.25 * k * n * n * n * x.powi(4)).exp(),
        0.0,
        1.0 / n,
        quad_tol,
    )?;
    Ok(1.0 / (2.0 * integral + (1.0 / k) * (-1.25 * k / n).exp()))
}

/// Tail coefficient d = phi0 exp(3k/(4N)) making the three pieces continuous.
pub fn tail_coefficient(phi0: f64, k: f64, sharpness: u32) -> f64 {
    phi0 * (0.75 * k / f64::from(sharpness)).exp()
}

/// Smoothed-drift stationary density at x, given a precomputed phi0.
///
/// Three pieces: d exp(2kx) left of -1/N, the quartic-exponential core
/// phi0 exp((N^3/4) k x^4 - (3N/2) k x^2) on [-1/N, 1/N], d exp(-2kx)
/// right of 1/N. The core branch is used on the closed interval.
pub fn smoothed_density(x: f64, k: f64, sharpness: u32, phi0: f64) -> f64 {
    let n = f64::from(sharpness);
    if x.abs() <= 1.0 / n {
        let x2 = x * x;
        phi0 * (k * x2 * (0.25 * n * n * n * x2 - 1.5 * n)).exp()
    } else {
        tail_coefficient(phi0, k, sharpness) * (-2.0 * k * x.abs()).exp()
    }
}

fn validate_smoothed_params(k: f64, sharpness: u32) -> Result<()> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidConfig(format!("gain k must be positive, got {k}")));
    }
    if sharpness < 1 {
        return Err(Error::InvalidConfig("sharpness N must be at least 1".into()));
    }
    Ok(())
}

/// A stationary density with its cached constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum StationaryDensity {
    Laplace { k: f64 },
    Smoothed { k: f64, sharpness: u32, phi0: f64, d: f64 },
}

impl StationaryDensity {
    pub fn laplace(k: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidConfig(format!("gain k must be positive, got {k}")));
        }
        Ok(StationaryDensity::Laplace { k })
    }

    pub fn smoothed(k: f64, sharpness: u32, quad_tol: f64) -> Result<Self> {
        let phi0 = compute_phi0(k, sharpness, quad_tol)?;
        Ok(StationaryDensity::Smoothed {
            k,
            sharpness,
            phi0,
            d: tail_coefficient(phi0, k, sharpness),
        })
    }

    pub fn value(&self, x: f64) -> f64 {
        match *self {
            StationaryDensity::Laplace { k } => laplace_density(x, k),
            StationaryDensity::Smoothed { k, sharpness, phi0, .. } => {
                smoothed_density(x, k, sharpness, phi0)
            }
        }
    }

    pub fn gain(&self) -> f64 {
        match *self {
            StationaryDensity::Laplace { k } => k,
            StationaryDensity::Smoothed { k, .. } => k,
        }
    }

    /// Variance of the density: 1/(2k^2) in closed form for Laplace,
    /// by quadrature for the smoothed family.
    pub fn variance(&self) -> Result<f64> {
        match *self {
            StationaryDensity::Laplace { k } => Ok(1.0 / (2.0 * k * k)),
            StationaryDensity::Smoothed { k, .. } => {
                let span = 1.0 + 20.0 / k;
                let m2 = adaptive_simpson(|x| x * x * self.value(x), 0.0, span, 1e-12)?;
                Ok(2.0 * m2)
            }
        }
    }

    pub fn sample(&self, geometry: GridGeometry) -> Result<DensityGrid> {
        DensityGrid::from_fn(geometry, |x| self.value(x))
    }
}

/// Central-difference residual of the stationary equation,
/// k sign(x) f'(x) + (1/2) f''(x), at every interior node with
/// |x| >= exclude. Returns (x, residual) pairs.
pub fn stationary_residual(
    f: &DensityGrid,
    k: f64,
    exclude: f64,
) -> Result<Vec<(f64, f64)>> {
    if f.len() < 5 {
        return Err(Error::TooFewSamples(format!(
            "stationary residual needs at least 5 nodes, got {}",
            f.len()
        )));
    }
    let dx = f.dx();
    let v = f.values();
    let mut out = Vec::new();
    for i in 1..f.len() - 1 {
        let x = f.node(i);
        if x.abs() < exclude {
            continue;
        }
        let d1 = (v[i + 1] - v[i - 1]) / (2.0 * dx);
        let d2 = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (dx * dx);
        out.push((x, k * sign(x) * d1 + 0.5 * d2));
    }
    Ok(out)
}
