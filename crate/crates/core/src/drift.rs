//! Drift laws: the discontinuous sign drift and its cubic smoothing family.
//!
//! Two drift coefficients are supported for the SDE dx = b(x) dt + dB:
//! the exact b(x) = -k sign(x), and the smoothed b(x) = -k f_N(x) where
//! f_N is an odd cubic that saturates at +-1 outside [-1/N, 1/N] and
//! converges pointwise to sign as N grows.

use serde::Serialize;

use crate::error::{Error, Result};

/// Which drift law is in force, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum DriftSpec {
    /// b(x) = -k sign(x)
    ExactSign { k: f64 },
    /// b(x) = -k f_N(x) with f_N the saturating cubic of sharpness N.
    SmoothedSign { k: f64, sharpness: u32 },
}

impl DriftSpec {
    pub fn exact_sign(k: f64) -> Result<Self> {
        validate_gain(k)?;
        Ok(DriftSpec::ExactSign { k })
    }

    pub fn smoothed_sign(k: f64, sharpness: u32) -> Result<Self> {
        validate_gain(k)?;
        if sharpness < 1 {
            return Err(Error::InvalidConfig(
                "sharpness N must be at least 1".into(),
            ));
        }
        Ok(DriftSpec::SmoothedSign { k, sharpness })
    }

    pub fn gain(&self) -> f64 {
        match *self {
            DriftSpec::ExactSign { k } => k,
            DriftSpec::SmoothedSign { k, .. } => k,
        }
    }

    /// Drift coefficient b(x) at state x.
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            DriftSpec::ExactSign { k } => -k * sign(x),
            DriftSpec::SmoothedSign { k, sharpness } => -k * smoothed_sign(x, sharpness),
        }
    }
}

fn validate_gain(k: f64) -> Result<()> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "control gain k must be positive and finite, got {k}"
        )));
    }
    Ok(())
}

/// Sign function with sign(0) = 0.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Saturating cubic approximation of sign: 1 for x > 1/N, -1 for x < -1/N,
/// and -(N^3/2) x^3 + (3N/2) x in between.
///
/// The interior is evaluated in the scaled variable u = N x as u (3 - u^2) / 2,
/// which keeps every intermediate in [-1, 1] regardless of N.
pub fn smoothed_sign(x: f64, sharpness: u32) -> f64 {
    let n = f64::from(sharpness);
    let u = n * x;
    if u > 1.0 {
        1.0
    } else if u < -1.0 {
        -1.0
    } else {
        0.5 * u * (3.0 - u * u)
    }
}
