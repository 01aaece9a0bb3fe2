//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! per clause before asserting. Run with `--nocapture` to see every line:
//!
//!     cargo test -p signdrift --test acceptance -- --nocapture

use std::time::{Duration, Instant};

use signdrift::analysis::{log_density_distance, sup_distance, variance_sweep};
use signdrift::drift::DriftSpec;
use signdrift::fokker_planck::{
    compute_phi0, laplace_grid, smoothed_density, stationary_residual, tail_coefficient,
    StationaryDensity,
};
use signdrift::generator::{generator_estimate, generator_limit_reference};
use signdrift::grid::{DensityGrid, GridGeometry};
use signdrift::recursion::{evolve, recursion_step_with_tol, EvolveConfig};
use signdrift::simulate::{sample_variance, simulate_terminal, RunConfig};
use signdrift::transforms::identity_check;

/// Collects clause outcomes so every line prints even when one fails.
struct Criterion {
    name: &'static str,
    started: Instant,
    clauses: Vec<(bool, String)>,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Criterion {
            name,
            started: Instant::now(),
            clauses: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, label: String) {
        self.clauses.push((ok, label));
    }

    fn finish(mut self, runtime_limit: Duration) {
        let elapsed = self.started.elapsed();
        self.check(
            elapsed <= runtime_limit,
            format!("runtime {elapsed:.2?} within {runtime_limit:.0?}"),
        );
        let all_ok = self.clauses.iter().all(|(ok, _)| *ok);
        let verdict = if all_ok { "PASS" } else { "FAIL" };
        println!("{verdict} {}", self.name);
        for (ok, label) in &self.clauses {
            println!("  [{}] {label}", if *ok { "pass" } else { "FAIL" });
        }
        assert!(all_ok, "{} failed", self.name);
    }
}

fn sup_abs_over(values: &[(f64, f64)], lo: f64, hi: f64) -> f64 {
    values
        .iter()
        .filter(|(x, _)| x.abs() >= lo - 1e-12 && x.abs() <= hi + 1e-12)
        .map(|(_, r)| r.abs())
        .fold(0.0, f64::max)
}

#[test]
fn c01_laplace_stationarity_residual() {
    let mut c = Criterion::new("criterion 1: Laplace stationary-equation residual");
    let k = 1.0;
    let mut maxima = Vec::new();
    for dx in [1e-3, 5e-4] {
        let g = GridGeometry::new(4.0, dx).unwrap();
        let f = laplace_grid(k, g).unwrap();
        let res = stationary_residual(&f, k, 0.1).unwrap();
        maxima.push(sup_abs_over(&res, 0.1, 3.0));
    }
    c.check(
        maxima[0] <= 1e-4,
        format!("max |residual| {:.3e} <= 1e-4 at dx = 1e-3", maxima[0]),
    );
    let ratio = maxima[0] / maxima[1];
    c.check(
        ratio >= 3.5,
        format!("halving dx shrinks residual {ratio:.2}x >= 3.5x"),
    );
    c.finish(Duration::from_secs(1));
}

#[test]
fn c02_laplace_normalization_and_variance() {
    let mut c = Criterion::new("criterion 2: Laplace mass and second moment");
    let g = GridGeometry::new(10.0, 2.5e-4).unwrap();
    for k in [1.0, 2.0, 3.0, 4.0] {
        let f = laplace_grid(k, g).unwrap();
        let mass = f.mass();
        c.check(
            (mass - 1.0).abs() <= 1e-6,
            format!("k = {k}: |mass - 1| = {:.2e} <= 1e-6", (mass - 1.0).abs()),
        );
        // Trapezoidal second moment; the mean is 0 by symmetry.
        let n = f.len();
        let m2: f64 = (0..n)
            .map(|i| {
                let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                let x = f.node(i);
                w * x * x * f.values()[i]
            })
            .sum::<f64>()
            * f.dx();
        let expected = 1.0 / (2.0 * k * k);
        let rel = (m2 - expected).abs() / expected;
        c.check(
            rel <= 1e-4,
            format!("k = {k}: second moment rel. error {rel:.2e} <= 1e-4"),
        );
    }
    c.finish(Duration::from_secs(1));
}

#[test]
fn c03_recursive_density_approaches_stationary() {
    let mut c = Criterion::new("criterion 3: recursive density vs stationary density");
    let h = 0.01;
    let k = 1.0;
    let geometry = EvolveConfig::default_geometry(h, k).unwrap();
    let cfg = EvolveConfig::new(h, k, 0.5, geometry, vec![158, 398, 1000]);
    let snaps = evolve(&cfg).unwrap();
    let reference = laplace_grid(k, geometry).unwrap();
    let mut dist = Vec::new();
    for (n, snap) in &snaps {
        let mass_err = (snap.mass() - 1.0).abs();
        c.check(
            mass_err <= 1e-6,
            format!("snapshot {n}: |mass - 1| = {mass_err:.2e} <= 1e-6"),
        );
        dist.push(
            log_density_distance(snap, &reference, (-2.0, 2.0), 1e-12).unwrap(),
        );
    }
    c.check(
        dist[0] > dist[1] && dist[1] > dist[2],
        format!(
            "log-sup distance strictly decreasing: D(158) = {:.4}, D(398) = {:.4}, D(1000) = {:.4}",
            dist[0], dist[1], dist[2]
        ),
    );
    // Frozen from the calibration run of the converged recursion (observed
    // plateau 0.11643 at n = 1000, identical at n = 2000 and 4000).
    c.check(
        dist[2] <= 0.13,
        format!("final distance D(1000) = {:.4} <= 0.13 (frozen)", dist[2]),
    );
    c.finish(Duration::from_secs(300));
}

#[test]
fn c04_small_grid_oracle_equivalence() {
    let mut c = Criterion::new("criterion 4: 11-node double-loop oracle equivalence");
    // hk = 0.1 is exactly one node; the 0.6-wide kernel fits the 1.0 span.
    let h = 0.01f64;
    let k = 10.0;
    let dx = 0.1;
    let g = GridGeometry::new(0.5, dx).unwrap();
    let start = DensityGrid::new(
        g,
        vec![0.2, 0.5, 0.9, 1.4, 1.9, 2.2, 1.9, 1.4, 0.9, 0.5, 0.2],
    )
    .unwrap()
    .renormalized()
    .unwrap();

    // Independent double-loop implementation of one recursion step.
    let oracle_step = |v: &[f64]| -> Vec<f64> {
        let n = v.len() as isize;
        let center = 5isize;
        let m_shift = 1isize; // hk / dx
        let read = |j: isize| if j >= 0 && j < n { v[j as usize] } else { 0.0 };
        let mut shifted = vec![0.0; v.len()];
        for (i, s) in shifted.iter_mut().enumerate() {
            let z = i as isize;
            let hi_seam = center + m_shift;
            let lo_seam = center - m_shift;
            let left = if z < hi_seam {
                read(z - m_shift)
            } else if z == hi_seam {
                0.5 * read(z - m_shift)
            } else {
                0.0
            };
            let right = if z > lo_seam {
                read(z + m_shift)
            } else if z == lo_seam {
                0.5 * read(z + m_shift)
            } else {
                0.0
            };
            *s = left + right;
        }
        // Truncated N(0, h) kernel, renormalized to unit discrete mass.
        let radius = (6.0 * h.sqrt() / dx).floor() as isize;
        let mut taps = Vec::new();
        for l in -radius..=radius {
            let u = l as f64 * dx;
            taps.push((-u * u / (2.0 * h)).exp());
        }
        let total: f64 = taps.iter().sum();
        for t in &mut taps {
            *t /= total;
        }
        let mut out = vec![0.0; v.len()];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (t, w) in taps.iter().enumerate() {
                let j = i as isize - (t as isize - radius);
                if j >= 0 && j < n {
                    acc += w * shifted[j as usize];
                }
            }
            *o = acc;
        }
        out
    };

    // The toy grid cannot contain the density, so leakage is expected;
    // disable the unit-mass gate for this equivalence check.
    let mut produced = start.clone();
    let mut expected = start.values().to_vec();
    for _ in 0..3 {
        produced = recursion_step_with_tol(&produced, h, k, 1.0).unwrap();
        expected = oracle_step(&expected);
    }
    let sup = produced
        .values()
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    c.check(
        sup <= 1e-12,
        format!("3-step sup difference {sup:.2e} <= 1e-12"),
    );
    c.finish(Duration::from_secs(1));
}

#[test]
fn c05_monte_carlo_consistency() {
    let mut c = Criterion::new("criterion 5: Monte-Carlo consistency with stationary density");
    let cfg = RunConfig::new(DriftSpec::exact_sign(1.0).unwrap(), 0.001, 1.0, 10_000, 42);
    let term = simulate_terminal(&cfg).unwrap();
    let mean = term.iter().sum::<f64>() / term.len() as f64;
    let var = sample_variance(&term);
    let bound = 4.0 * var.sqrt() / (term.len() as f64).sqrt();
    c.check(
        mean.abs() <= bound,
        format!("|mean| = {:.4e} <= 4 sd/sqrt(n) = {bound:.4e}", mean.abs()),
    );
    let rel = (var - 0.5).abs() / 0.5;
    c.check(
        rel <= 0.2,
        format!("sample variance {var:.4} within 20% of 0.5 (rel. err {rel:.3})"),
    );
    c.finish(Duration::from_secs(30));
}

#[test]
fn c06_variance_monotone_in_gain() {
    let mut c = Criterion::new("criterion 6: terminal variance decreases with the gain");
    let base = RunConfig::new(DriftSpec::exact_sign(1.0).unwrap(), 0.001, 1.0, 5000, 42);
    let sweep = variance_sweep(&[1.0, 2.0, 3.0, 4.0], &base).unwrap();
    let strictly_decreasing = sweep.windows(2).all(|w| w[0].1 > w[1].1);
    c.check(
        strictly_decreasing,
        format!(
            "variances strictly decreasing: {}",
            sweep
                .iter()
                .map(|(k, v)| format!("k={k}: {v:.4}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
    c.finish(Duration::from_secs(60));
}

#[test]
fn c07_smoothed_density_converges_to_laplace() {
    let mut c = Criterion::new("criterion 7: smoothed stationary density converges to Laplace");
    let k = 1.0;
    let g = GridGeometry::new(8.0, 1e-3).unwrap();
    let reference = laplace_grid(k, g).unwrap();
    let mut sups = Vec::new();
    for n in [1u32, 10, 100] {
        let s = StationaryDensity::smoothed(k, n, 1e-10).unwrap();
        let sampled = s.sample(g).unwrap();
        let mass = sampled.mass();
        c.check(
            (mass - 1.0).abs() <= 1e-6,
            format!("N = {n}: |mass - 1| = {:.2e} <= 1e-6", (mass - 1.0).abs()),
        );
        let phi0 = compute_phi0(k, n, 1e-10).unwrap();
        let interior = smoothed_density(1.0 / f64::from(n), k, n, phi0);
        let tail = tail_coefficient(phi0, k, n) * (-2.0 * k / f64::from(n)).exp();
        let seam_rel = (interior - tail).abs() / interior;
        c.check(
            seam_rel <= 1e-12,
            format!("N = {n}: seam continuity rel. gap {seam_rel:.2e} <= 1e-12"),
        );
        sups.push(sup_distance(&sampled, &reference, (-3.0, 3.0)).unwrap());
    }
    c.check(
        sups[0] > sups[1] && sups[1] > sups[2],
        format!(
            "sup distance strictly decreasing over N: {:.4} > {:.4} > {:.4}",
            sups[0], sups[1], sups[2]
        ),
    );
    let phi0_large = compute_phi0(k, 10_000, 1e-12).unwrap();
    c.check(
        (phi0_large - 1.0).abs() <= 1e-3,
        format!("phi0(k=1, N=1e4) = {phi0_large:.6} within 1e-3 of 1"),
    );
    c.finish(Duration::from_secs(5));
}

#[test]
fn c08_generator_consistency() {
    let mut c = Criterion::new("criterion 8: finite-h generator against the closed-form limit");
    let k = 1.0;
    let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    let df = |x: f64| -x * norm * (-0.5 * x * x).exp();
    let d2f = |x: f64| (x * x - 1.0) * norm * (-0.5 * x * x).exp();

    let mut gauss_errs = Vec::new();
    let mut laplace_sups = Vec::new();
    for h in [1e-2, 1e-3, 1e-4] {
        let dx = h * k / 10.0;

        let g = GridGeometry::new(6.0, dx).unwrap();
        let gauss = DensityGrid::from_fn(g, |x| norm * (-0.5 * x * x).exp())
            .unwrap()
            .renormalized()
            .unwrap();
        let est = generator_estimate(&gauss, h, k).unwrap();
        let offset = (1.0 / dx).round() as usize;
        let err_plus = (est[gauss.center() + offset]
            - generator_limit_reference(k, 1.0, df, d2f).unwrap())
        .abs();
        let err_minus = (est[gauss.center() - offset]
            - generator_limit_reference(k, -1.0, df, d2f).unwrap())
        .abs();
        gauss_errs.push(err_plus.max(err_minus));

        let m = (13.0 / dx).round();
        let lg = GridGeometry::new(m * dx, dx).unwrap();
        let laplace = laplace_grid(k, lg).unwrap();
        let lest = generator_estimate(&laplace, h, k).unwrap();
        let sup = (0..laplace.len())
            .filter(|&i| {
                let ax = laplace.node(i).abs();
                (0.5..=3.0).contains(&ax)
            })
            .map(|i| lest[i].abs())
            .fold(0.0f64, f64::max);
        laplace_sups.push(sup);
    }
    c.check(
        gauss_errs[0] > gauss_errs[1] && gauss_errs[1] > gauss_errs[2],
        format!(
            "Gaussian N(0,1) error at x = +-1 decreasing over h: {:.3e} > {:.3e} > {:.3e}",
            gauss_errs[0], gauss_errs[1], gauss_errs[2]
        ),
    );
    c.check(
        laplace_sups[0] > laplace_sups[1] && laplace_sups[1] > laplace_sups[2],
        format!(
            "Laplace sup |estimate| on 0.5 <= |x| <= 3 decreasing over h: {:.3e} > {:.3e} > {:.3e}",
            laplace_sups[0], laplace_sups[1], laplace_sups[2]
        ),
    );
    c.finish(Duration::from_secs(120));
}

#[test]
fn c09_fourier_identity() {
    let mut c = Criterion::new("criterion 9: transform identity of the shifted density");
    let omegas = [0.0, 1.0, 5.0, 10.0];
    let mut worst = Vec::new();
    for dx in [1e-3, 5e-4] {
        let g = GridGeometry::new(6.0, dx).unwrap();
        let f = DensityGrid::from_fn(g, |x| {
            (-x * x / 0.5).exp() / (2.0 * std::f64::consts::PI * 0.25).sqrt()
        })
        .unwrap()
        .renormalized()
        .unwrap();
        let samples = identity_check(&f, 0.01, 1.0, &omegas).unwrap();
        if dx == 1e-3 {
            for s in &samples {
                c.check(
                    s.residual <= 1e-6,
                    format!("omega = {}: residual {:.3e} <= 1e-6", s.omega, s.residual),
                );
            }
        }
        worst.push(samples.iter().map(|s| s.residual).fold(0.0f64, f64::max));
    }
    let ratio = worst[0] / worst[1];
    c.check(
        ratio >= 3.5,
        format!(
            "halving dx shrinks largest residual {:.3e} -> {:.3e} ({ratio:.2}x >= 3.5x)",
            worst[0], worst[1]
        ),
    );
    c.finish(Duration::from_secs(5));
}
