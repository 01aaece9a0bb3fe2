//! Seeded Euler-Maruyama path simulation.
//!
//! Every path draws its Wiener increments from an independent ChaCha stream
//! selected by the path index, so ensembles are bit-reproducible regardless
//! of thread count or execution order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::drift::DriftSpec;
use crate::error::{Error, Result};

/// Default cap on paths * steps per simulation call.
pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000_000;

/// Parameters of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    pub drift: DriftSpec,
    /// Step length.
    pub h: f64,
    /// Time horizon T; the trajectory is sampled on [0, T].
    pub t: f64,
    pub paths: usize,
    /// Initial condition shared by every path.
    pub x0: f64,
    pub seed: u64,
    /// Recursion schedule exponent, carried for density-evolution runs.
    pub alpha: f64,
    /// Rejects runs with paths * steps above this cap.
    pub step_budget: u64,
}

impl RunConfig {
    pub fn new(drift: DriftSpec, h: f64, t: f64, paths: usize, seed: u64) -> Self {
        RunConfig {
            drift,
            h,
            t,
            paths,
            x0: 0.0,
            seed,
            alpha: 0.5,
            step_budget: DEFAULT_STEP_BUDGET,
        }
    }

    /// Step count ceil(T/h), with near-integer quotients snapped to the
    /// integer so decimal step lengths behave as written.
    pub fn n_steps(&self) -> usize {
        let q = self.t / self.h;
        ((q - q * 1e-9).ceil() as usize).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("h", self.h), ("T", self.t), ("x0", self.x0), ("alpha", self.alpha)] {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be finite, got {v}")));
            }
        }
        if self.h <= 0.0 || self.t <= 0.0 || self.h > self.t * (1.0 + 1e-9) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < h <= T, got h = {}, T = {}",
                self.h, self.t
            )));
        }
        if self.alpha < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "alpha must be nonnegative, got {}",
                self.alpha
            )));
        }
        if self.paths == 0 {
            return Err(Error::InvalidConfig("need at least one path".into()));
        }
        let work = self.paths as u64 * self.n_steps() as u64;
        if work > self.step_budget {
            return Err(Error::BudgetExceeded {
                requested: work,
                cap: self.step_budget,
            });
        }
        Ok(())
    }
}

/// A full ensemble of simulated trajectories.
#[derive(Debug, Clone)]
pub struct TrajectoryEnsemble {
    pub config: RunConfig,
    /// Sample times 0, h, 2h, ..., T (last interval possibly shorter).
    pub times: Vec<f64>,
    /// One row per path, each of length times.len().
    pub values: Vec<Vec<f64>>,
}

/// Histogram of scalar samples with bin densities normalized by the total
/// sample count (so the densities integrate to the in-range fraction).
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub density: Vec<f64>,
    pub samples: usize,
}

/// One Euler-Maruyama update x + h b(x) + w, where w is the realized Wiener
/// increment for the step.
pub fn em_step(x: f64, drift: &DriftSpec, h: f64, w: f64) -> f64 {
    x + h * drift.value(x) + w
}

/// Step size rule h = base / N for the smoothed drift, keeping the cubic's
/// slope (which grows with N) resolved.
pub fn smoothed_step_size(sharpness: u32, base: f64) -> f64 {
    base / f64::from(sharpness)
}

/// Time stamps and per-step durations for a run. All steps have length h
/// except possibly the last, which is shortened to land exactly on T.
fn step_plan(config: &RunConfig) -> (Vec<f64>, Vec<f64>) {
    let n = config.n_steps();
    let mut times = Vec::with_capacity(n + 1);
    let mut durations = Vec::with_capacity(n);
    for i in 0..n {
        times.push(i as f64 * config.h);
    }
    times.push(config.t);
    for i in 0..n {
        durations.push(times[i + 1] - times[i]);
    }
    (times, durations)
}

/// Simulates a single path on its dedicated RNG stream.
pub fn simulate_path(config: &RunConfig, path_index: usize) -> Result<Vec<f64>> {
    config.validate()?;
    let (_, durations) = step_plan(config);
    Ok(run_path(config, path_index, &durations))
}

fn run_path(config: &RunConfig, path_index: usize, durations: &[f64]) -> Vec<f64> {
    let mut rng = path_rng(config.seed, path_index);
    let mut values = Vec::with_capacity(durations.len() + 1);
    let mut x = config.x0;
    values.push(x);
    for &dt in durations {
        let z: f64 = rng.sample(StandardNormal);
        x = em_step(x, &config.drift, dt, z * dt.sqrt());
        values.push(x);
    }
    values
}

fn path_rng(seed: u64, path_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path_index as u64);
    rng
}

/// Simulates the configured number of independent paths, retaining every
/// sample point.
pub fn simulate_ensemble(config: &RunConfig) -> Result<TrajectoryEnsemble> {
    config.validate()?;
    let (times, durations) = step_plan(config);
    let values: Vec<Vec<f64>> = (0..config.paths)
        .into_par_iter()
        .map(|p| run_path(config, p, &durations))
        .collect();
    Ok(TrajectoryEnsemble {
        config: *config,
        times,
        values,
    })
}

/// Simulates the ensemble but retains only terminal values x_T. Uses the
/// same per-path streams as `simulate_ensemble`, so terminals agree bitwise.
pub fn simulate_terminal(config: &RunConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let (_, durations) = step_plan(config);
    Ok((0..config.paths)
        .into_par_iter()
        .map(|p| *run_path(config, p, &durations).last().unwrap())
        .collect())
}

impl TrajectoryEnsemble {
    pub fn terminal_values(&self) -> Vec<f64> {
        self.values.iter().map(|p| *p.last().unwrap()).collect()
    }

    /// Cross-path mean at each sample time.
    pub fn mean_path(&self) -> Vec<f64> {
        let n = self.times.len();
        let mut mean = vec![0.0; n];
        for path in &self.values {
            for (m, v) in mean.iter_mut().zip(path) {
                *m += v;
            }
        }
        let inv = 1.0 / self.values.len() as f64;
        for m in &mut mean {
            *m *= inv;
        }
        mean
    }

    /// Number of strict sign changes per path; diagnostic only (a discrete
    /// path cannot resolve the conjectured infinitude of zero crossings).
    pub fn zero_crossings(&self) -> Vec<u64> {
        self.values
            .iter()
            .map(|path| {
                path.windows(2)
                    .filter(|w| (w[0] > 0.0 && w[1] < 0.0) || (w[0] < 0.0 && w[1] > 0.0))
                    .count() as u64
            })
            .collect()
    }

    /// Histogram of terminal values. `range` defaults to the terminal
    /// min/max; samples outside a given range are dropped from the counts
    /// but still divide the density.
    pub fn terminal_histogram(&self, bins: usize, range: Option<(f64, f64)>) -> Result<Histogram> {
        histogram(&self.terminal_values(), bins, range)
    }
}

/// Histogram of arbitrary samples; see `terminal_histogram`.
pub fn histogram(samples: &[f64], bins: usize, range: Option<(f64, f64)>) -> Result<Histogram> {
    if samples.is_empty() {
        return Err(Error::TooFewSamples("histogram of an empty sample set".into()));
    }
    if bins == 0 {
        return Err(Error::InvalidConfig("need at least one bin".into()));
    }
    let (mut lo, mut hi) = match range {
        Some((lo, hi)) => {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidConfig(format!(
                    "invalid histogram range [{lo}, {hi}]"
                )));
            }
            (lo, hi)
        }
        None => {
            let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        }
    };
    if lo == hi {
        // Degenerate sample set: widen to a unit window around the value.
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &v in samples {
        if v < lo || v > hi {
            continue;
        }
        let idx = (((v - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let edges: Vec<f64> = (0..=bins).map(|j| lo + j as f64 * width).collect();
    let norm = 1.0 / (samples.len() as f64 * width);
    let density = counts.iter().map(|&c| c as f64 * norm).collect();
    Ok(Histogram {
        edges,
        counts,
        density,
        samples: samples.len(),
    })
}

/// Sample mean of a slice.
pub fn mean(samples: &[f64]) -> f64 {
    samples.iter().sum::<f64>() / samples.len() as f64
}

/// Unbiased sample variance.
pub fn sample_variance(samples: &[f64]) -> f64 {
    let m = mean(samples);
    samples.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (samples.len() - 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_config(paths: usize, seed: u64) -> RunConfig {
        RunConfig::new(DriftSpec::exact_sign(1.0).unwrap(), 0.001, 1.0, paths, seed)
    }

    #[test]
    fn em_step_examples() {
        let d = DriftSpec::exact_sign(1.0).unwrap();
        assert_eq!(em_step(0.0, &d, 0.01, 0.03), 0.03);
        assert!((em_step(1.0, &d, 0.01, 0.0) - 0.99).abs() < 1e-15);
        let s = DriftSpec::smoothed_sign(1.0, 2).unwrap();
        assert!((em_step(0.25, &s, 0.001, 0.002) - 0.2513125).abs() < 1e-12);
    }

    #[test]
    fn smoothed_step_sizes() {
        assert_eq!(smoothed_step_size(1, 0.001), 0.001);
        assert_eq!(smoothed_step_size(4, 0.001), 0.00025);
        assert_eq!(smoothed_step_size(10, 0.001), 0.0001);
    }

    #[test]
    fn step_count_handles_decimal_steps() {
        let mut c = unit_config(1, 0);
        assert_eq!(c.n_steps(), 1000);
        c.h = 0.003;
        c.t = 0.3;
        assert_eq!(c.n_steps(), 100);
        c.h = 0.25;
        c.t = 1.1;
        assert_eq!(c.n_steps(), 5);
    }

    #[test]
    fn single_step_run() {
        let mut c = unit_config(1, 7);
        c.h = c.t;
        let e = simulate_ensemble(&c).unwrap();
        assert_eq!(e.times, vec![0.0, 1.0]);
        assert_eq!(e.values[0].len(), 2);
        assert_eq!(e.values[0][0], 0.0);
    }

    #[test]
    fn deterministic_given_seed() {
        let c = unit_config(64, 42);
        let a = simulate_ensemble(&c).unwrap();
        let b = simulate_ensemble(&c).unwrap();
        assert_eq!(a.values, b.values);
        let other = simulate_ensemble(&unit_config(64, 43)).unwrap();
        assert_ne!(a.values, other.values);
    }

    #[test]
    fn paths_are_independent_of_batch_shape() {
        let c = unit_config(16, 5);
        let e = simulate_ensemble(&c).unwrap();
        for p in [0usize, 3, 15] {
            assert_eq!(simulate_path(&c, p).unwrap(), e.values[p]);
        }
        let terminals = simulate_terminal(&c).unwrap();
        assert_eq!(terminals, e.terminal_values());
    }

    #[test]
    fn mirrored_increments_mirror_the_path() {
        let d = DriftSpec::exact_sign(1.0).unwrap();
        let ws = [0.03, -0.011, 0.25, -0.4, 0.02];
        let mut x = 0.0;
        let mut y = 0.0;
        for w in ws {
            x = em_step(x, &d, 0.01, w);
            y = em_step(y, &d, 0.01, -w);
            assert_eq!(y, -x);
        }
    }

    #[test]
    fn budget_and_validation() {
        let mut c = unit_config(10, 0);
        c.step_budget = 100;
        assert!(matches!(c.validate(), Err(Error::BudgetExceeded { .. })));
        c = unit_config(1, 0);
        c.h = -0.1;
        assert!(c.validate().is_err());
        c = unit_config(1, 0);
        c.h = 2.0;
        assert!(c.validate().is_err());
        c = unit_config(1, 0);
        c.x0 = f64::NAN;
        assert!(c.validate().is_err());
    }

    #[test]
    fn mean_path_basics() {
        let c = unit_config(1, 9);
        let e = simulate_ensemble(&c).unwrap();
        assert_eq!(e.mean_path(), e.values[0]);

        let mirrored = TrajectoryEnsemble {
            config: c,
            times: vec![0.0, 1.0],
            values: vec![vec![0.5, -1.5], vec![-0.5, 1.5]],
        };
        assert_eq!(mirrored.mean_path(), vec![0.0, 0.0]);
    }

    #[test]
    fn mean_path_stays_near_zero() {
        let c = unit_config(500, 1234);
        let e = simulate_ensemble(&c).unwrap();
        let mean = e.mean_path();
        let sd = sample_variance(&e.terminal_values()).sqrt();
        let bound = 5.0 * sd / (c.paths as f64).sqrt();
        let worst = mean.iter().fold(0.0f64, |a, &m| a.max(m.abs()));
        assert!(worst < bound, "worst |mean| {worst} vs bound {bound}");
    }

    #[test]
    fn histogram_degenerate_and_uniform() {
        let h = histogram(&[2.5; 40], 1, None).unwrap();
        assert_eq!(h.counts, vec![40]);
        assert_eq!(h.samples, 40);

        // Midpoint samples make every bin hold exactly n/10.
        let n = 1000;
        let vals: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5) / n as f64).collect();
        let h = histogram(&vals, 10, Some((0.0, 1.0))).unwrap();
        assert!(h.counts.iter().all(|&c| c == 100));
        let mass: f64 = h
            .density
            .iter()
            .zip(h.edges.windows(2))
            .map(|(d, e)| d * (e[1] - e[0]))
            .sum();
        assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn histogram_out_of_range_lowers_density_mass() {
        let vals = [0.1, 0.2, 0.3, 5.0];
        let h = histogram(&vals, 4, Some((0.0, 1.0))).unwrap();
        assert_eq!(h.counts.iter().sum::<u64>(), 3);
        let mass: f64 = h
            .density
            .iter()
            .zip(h.edges.windows(2))
            .map(|(d, e)| d * (e[1] - e[0]))
            .sum();
        assert!((mass - 0.75).abs() < 1e-12);
    }

    #[test]
    fn histogram_rejects_empty_input() {
        assert!(histogram(&[], 5, None).is_err());
        assert!(histogram(&[1.0], 0, None).is_err());
        assert!(histogram(&[1.0], 2, Some((3.0, 1.0))).is_err());
    }

    #[test]
    fn zero_crossings_counts_strict_flips() {
        let e = TrajectoryEnsemble {
            config: unit_config(1, 0),
            times: vec![0.0; 6],
            values: vec![vec![0.0, 1.0, -1.0, -2.0, 3.0, 3.5]],
        };
        assert_eq!(e.zero_crossings(), vec![2]);
    }
}
