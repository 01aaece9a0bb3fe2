//! Comparison metrics tying the simulation, recursion, and stationary
//! density routes together.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fokker_planck::StationaryDensity;
use crate::grid::DensityGrid;
use crate::quad::adaptive_simpson;
use crate::simulate::{sample_variance, simulate_terminal, Histogram, RunConfig};

/// Default floor applied before taking logs of density values.
pub const DEFAULT_LOG_FLOOR: f64 = 1e-12;

fn check_same_geometry(a: &DensityGrid, b: &DensityGrid) -> Result<()> {
    let (ga, gb) = (a.geometry(), b.geometry());
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(1.0);
    if a.len() != b.len() || !close(ga.half_span, gb.half_span) || !close(ga.dx, gb.dx) {
        return Err(Error::GeometryMismatch(format!(
            "[{} nodes, L={}, dx={}] vs [{} nodes, L={}, dx={}]",
            a.len(),
            ga.half_span,
            ga.dx,
            b.len(),
            gb.half_span,
            gb.dx
        )));
    }
    Ok(())
}

/// Max of |a(x) - b(x)| over nodes inside the window.
pub fn sup_distance(a: &DensityGrid, b: &DensityGrid, window: (f64, f64)) -> Result<f64> {
    check_same_geometry(a, b)?;
    let idx = a.window_indices(window.0, window.1)?;
    Ok(idx
        .into_iter()
        .map(|i| (a.values()[i] - b.values()[i]).abs())
        .fold(0.0, f64::max))
}

/// Max of |log a - log b| over the window, with values clipped from below
/// by `floor` so truncated tails do not produce infinities.
pub fn log_density_distance(
    a: &DensityGrid,
    b: &DensityGrid,
    window: (f64, f64),
    floor: f64,
) -> Result<f64> {
    if !(floor.is_finite() && floor > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "log floor must be positive, got {floor}"
        )));
    }
    check_same_geometry(a, b)?;
    let idx = a.window_indices(window.0, window.1)?;
    Ok(idx
        .into_iter()
        .map(|i| {
            let la = a.values()[i].max(floor).ln();
            let lb = b.values()[i].max(floor).ln();
            (la - lb).abs()
        })
        .fold(0.0, f64::max))
}

/// Histogram-versus-reference comparison record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramComparison {
    /// Integrated absolute difference between the histogram density and the
    /// bin-averaged reference.
    pub l1: f64,
    /// Largest per-bin absolute difference.
    pub sup: f64,
    /// Variance of the binned samples (bin-midpoint approximation).
    pub variance_sample: f64,
    /// Variance of the reference density.
    pub variance_ref: f64,
}

/// Compares a histogram against a stationary density by averaging the
/// reference over each bin.
pub fn histogram_vs_density(
    hist: &Histogram,
    reference: &StationaryDensity,
) -> Result<HistogramComparison> {
    if hist.samples == 0 || hist.counts.is_empty() {
        return Err(Error::TooFewSamples("empty histogram".into()));
    }
    let mut l1 = 0.0;
    let mut sup = 0.0f64;
    let mut mean_mid = 0.0;
    let mut m2_mid = 0.0;
    let total: u64 = hist.counts.iter().sum();
    if total == 0 {
        return Err(Error::TooFewSamples("histogram has no in-range samples".into()));
    }
    for (i, pair) in hist.edges.windows(2).enumerate() {
        let (lo, hi) = (pair[0], pair[1]);
        let width = hi - lo;
        let avg = adaptive_simpson(|x| reference.value(x), lo, hi, 1e-12)? / width;
        let diff = (hist.density[i] - avg).abs();
        sup = sup.max(diff);
        l1 += diff * width;
        let mid = 0.5 * (lo + hi);
        let w = hist.counts[i] as f64 / total as f64;
        mean_mid += w * mid;
        m2_mid += w * mid * mid;
    }
    Ok(HistogramComparison {
        l1,
        sup,
        variance_sample: m2_mid - mean_mid * mean_mid,
        variance_ref: reference.variance()?,
    })
}

/// Terminal-value sample variance for each gain in `gains`, sharing one base
/// configuration. Per-gain seeds are derived deterministically from the base
/// seed so the whole sweep is reproducible as a unit.
pub fn variance_sweep(gains: &[f64], base: &RunConfig) -> Result<Vec<(f64, f64)>> {
    if gains.is_empty() {
        return Err(Error::InvalidConfig("variance sweep needs at least one gain".into()));
    }
    gains
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let mut cfg = *base;
            cfg.drift = crate::drift::DriftSpec::exact_sign(k)?;
            cfg.seed = derive_seed(base.seed, i as u64);
            let terminals = simulate_terminal(&cfg)?;
            Ok((k, sample_variance(&terminals)))
        })
        .collect()
}

/// Splitmix64 step; spreads a base seed into per-slot seeds.
pub fn derive_seed(base: u64, slot: u64) -> u64 {
    let mut z = base
        .wrapping_add(slot.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
