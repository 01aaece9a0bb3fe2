//! Subcommand implementations. Each one resolves its parameters, runs the
//! numerics, writes its CSV outputs plus a summary.json carrying the fully
//! resolved configuration, and stays byte-identical across reruns.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use signdrift::analysis::{histogram_vs_density, log_density_distance, sup_distance, variance_sweep};
use signdrift::drift::DriftSpec;
use signdrift::fokker_planck::{laplace_density, StationaryDensity, DEFAULT_QUAD_TOL};
use signdrift::generator::{generator_estimate, generator_limit_reference};
use signdrift::grid::{DensityGrid, GridGeometry};
use signdrift::recursion::{evolve, schedule_steps, EvolveConfig, DEFAULT_MASS_TOL};
use signdrift::simulate::{
    mean, sample_variance, simulate_ensemble, smoothed_step_size, RunConfig, DEFAULT_STEP_BUDGET,
};
use signdrift::transforms::{identity_check, omega_resolved};

use crate::args::*;
use crate::config::{parse_list, ConfigFile};
use crate::output::*;
use crate::CliError;

fn ensure_out_dir(out: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out)
        .map_err(|e| CliError::validation(format!("cannot create output directory {out:?}: {e}")))
}

#[derive(Serialize)]
struct Summary<P: Serialize> {
    command: &'static str,
    params: P,
    outputs: Vec<String>,
    diagnostics: serde_json::Value,
}

fn write_summary<P: Serialize>(
    out: &Path,
    command: &'static str,
    params: P,
    outputs: &[&str],
    diagnostics: serde_json::Value,
) -> Result<(), CliError> {
    write_json(
        &out.join("summary.json"),
        &Summary {
            command,
            params,
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
            diagnostics,
        },
    )
}

// ---------------------------------------------------------------- simulate

#[derive(Serialize)]
struct SimulateParams {
    drift: DriftSpec,
    h: f64,
    t: f64,
    paths: usize,
    x0: f64,
    seed: u64,
    bins: usize,
    hist_lo: f64,
    hist_hi: f64,
    step_budget: u64,
}

pub fn simulate(a: SimulateArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let out = cfg.resolve_out(a.out, "out")?;
    let drift_kind = cfg.resolve(a.drift, "drift", "sign".to_string())?;
    let k = cfg.resolve(a.k, "k", 1.0)?;
    let sharpness = cfg.resolve_opt(a.sharpness, "N")?;
    let drift = match (drift_kind.as_str(), sharpness) {
        ("sign", None) => DriftSpec::exact_sign(k)?,
        ("sign", Some(_)) => {
            return Err(CliError::validation(
                "--N is only meaningful with --drift smooth".into(),
            ))
        }
        ("smooth", Some(n)) => DriftSpec::smoothed_sign(k, n)?,
        ("smooth", None) => {
            return Err(CliError::validation("--drift smooth requires --N".into()))
        }
        (other, _) => {
            return Err(CliError::validation(format!(
                "unknown drift {other:?}; expected sign or smooth"
            )))
        }
    };
    let default_h = match drift {
        DriftSpec::ExactSign { .. } => 0.001,
        DriftSpec::SmoothedSign { sharpness, .. } => smoothed_step_size(sharpness, 0.001),
    };
    let mut run = RunConfig::new(drift, cfg.resolve(a.h, "h", default_h)?, cfg.resolve(a.t, "T", 1.0)?, cfg.resolve(a.paths, "paths", 500)?, cfg.resolve(a.seed, "seed", 42)?);
    run.x0 = cfg.resolve(a.x0, "x0", 0.0)?;
    run.step_budget = cfg.resolve(a.budget, "budget", DEFAULT_STEP_BUDGET)?;
    let bins = cfg.resolve(a.bins, "bins", 50)?;
    let hist_lo = cfg.resolve_opt(a.hist_lo, "hist_lo")?;
    let hist_hi = cfg.resolve_opt(a.hist_hi, "hist_hi")?;

    let ensemble = simulate_ensemble(&run)?;
    let terminals = ensemble.terminal_values();
    let range = match (hist_lo, hist_hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        (None, None) => default_hist_range(&terminals),
        _ => {
            return Err(CliError::validation(
                "--hist-lo and --hist-hi must be given together".into(),
            ))
        }
    };
    let hist = ensemble.terminal_histogram(bins, Some(range))?;

    ensure_out_dir(&out)?;
    write_csv(
        &out.join("paths.csv"),
        "path_id,t,x",
        ensemble.values.iter().enumerate().flat_map(|(p, path)| {
            let times = &ensemble.times;
            path.iter()
                .zip(times)
                .map(move |(x, t)| vec![p.to_string(), fmt_f64(*t), fmt_f64(*x)])
                .collect::<Vec<_>>()
        }),
    )?;
    write_hist_csv(&out.join("hist.csv"), &hist)?;

    let crossings = ensemble.zero_crossings();
    let mean_crossings =
        crossings.iter().sum::<u64>() as f64 / crossings.len() as f64;
    write_summary(
        &out,
        "simulate",
        SimulateParams {
            drift,
            h: run.h,
            t: run.t,
            paths: run.paths,
            x0: run.x0,
            seed: run.seed,
            bins,
            hist_lo: range.0,
            hist_hi: range.1,
            step_budget: run.step_budget,
        },
        &["paths.csv", "hist.csv"],
        json!({
            "n_steps": run.n_steps(),
            "terminal_mean": mean(&terminals),
            "terminal_variance": sample_variance(&terminals),
            "mean_zero_crossings": mean_crossings,
        }),
    )
}

/// Symmetric terminal-value range clipped to [-5, 5].
fn default_hist_range(terminals: &[f64]) -> (f64, f64) {
    let widest = terminals.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let r = widest.min(5.0).max(1e-6);
    (-r, r)
}

// ----------------------------------------------------------- evolve-density

#[derive(Serialize)]
struct EvolveParams {
    k: f64,
    h: f64,
    alpha: f64,
    snapshots: Vec<usize>,
    half_span: f64,
    dx: f64,
    mass_tol: f64,
    schedule_steps: usize,
}

pub fn evolve_density(a: EvolveArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let out = cfg.resolve_out(a.out, "out")?;
    let k = cfg.resolve(a.k, "k", 1.0)?;
    let h = cfg.resolve(a.h, "h", 0.01)?;
    let alpha = cfg.resolve(a.alpha, "alpha", 0.5)?;
    let schedule = schedule_steps(h, alpha)?;
    let snapshots = match cfg.resolve_opt(a.snapshots, "snapshots")? {
        Some(text) => parse_list::<usize>(&text, "snapshot")?,
        None => vec![schedule],
    };
    let default_geometry = EvolveConfig::default_geometry(h, k)?;
    let dx = cfg.resolve(a.dx, "dx", default_geometry.dx)?;
    let half_span = cfg.resolve(a.half_span, "half_span", default_geometry.half_span)?;
    let geometry = GridGeometry::new(half_span, dx)?;
    let mut evolve_cfg = EvolveConfig::new(h, k, alpha, geometry, snapshots.clone());
    evolve_cfg.mass_tol = cfg.resolve(a.mass_tol, "mass_tol", DEFAULT_MASS_TOL)?;

    let snaps = evolve(&evolve_cfg)?;

    ensure_out_dir(&out)?;
    let mut outputs = Vec::new();
    let mut masses = Vec::new();
    for (n, density) in &snaps {
        let name = format!("density_{n}.csv");
        write_density_csv(&out.join(&name), density)?;
        masses.push(json!({ "n": n, "mass": density.mass() }));
        outputs.push(name);
    }
    let output_refs: Vec<&str> = outputs.iter().map(String::as_str).collect();
    write_summary(
        &out,
        "evolve-density",
        EvolveParams {
            k,
            h,
            alpha,
            snapshots,
            half_span: geometry.half_span,
            dx: geometry.dx,
            mass_tol: evolve_cfg.mass_tol,
            schedule_steps: schedule,
        },
        &output_refs,
        json!({ "snapshot_masses": masses }),
    )
}

// --------------------------------------------------------------- stationary

#[derive(Serialize)]
struct StationaryParams {
    kind: String,
    k: f64,
    sharpness: Option<u32>,
    quad_tol: f64,
    half_span: f64,
    dx: f64,
}

pub fn stationary(a: StationaryArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let out = cfg.resolve_out(a.out, "out")?;
    let kind = cfg.resolve(a.kind, "kind", "laplace".to_string())?;
    let k = cfg.resolve(a.k, "k", 1.0)?;
    let quad_tol = cfg.resolve(a.quad_tol, "quad_tol", DEFAULT_QUAD_TOL)?;
    let sharpness = cfg.resolve_opt(a.sharpness, "N")?;
    let density = match kind.as_str() {
        "laplace" => StationaryDensity::laplace(k)?,
        "smooth" => {
            let n = sharpness.ok_or_else(|| {
                CliError::validation("--kind smooth requires --N".into())
            })?;
            StationaryDensity::smoothed(k, n, quad_tol)?
        }
        other => {
            return Err(CliError::validation(format!(
                "unknown kind {other:?}; expected laplace or smooth"
            )))
        }
    };
    let dx = cfg.resolve(a.dx, "dx", 1e-3)?;
    let default_span = ((8.0 / k) / dx).ceil() * dx;
    let half_span = cfg.resolve(a.half_span, "half_span", default_span)?;
    let geometry = GridGeometry::new(half_span, dx)?;
    let sampled = density.sample(geometry)?;

    ensure_out_dir(&out)?;
    write_density_csv(&out.join("density.csv"), &sampled)?;
    write_json(&out.join("stationary.json"), &density)?;
    write_summary(
        &out,
        "stationary",
        StationaryParams {
            kind,
            k,
            sharpness,
            quad_tol,
            half_span,
            dx,
        },
        &["density.csv", "stationary.json"],
        json!({
            "mass": sampled.mass(),
            "variance": density.variance()?,
        }),
    )
}

// ------------------------------------------------------------------ compare

pub fn compare(mut a: CompareArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let out = cfg.resolve_out(a.out.take(), "out")?;
    match (&a.a, &a.b, &a.hist) {
        (Some(_), Some(_), None) => compare_grids(a, cfg, out),
        (None, None, Some(_)) => compare_hist(a, cfg, out),
        _ => Err(CliError::validation(
            "compare needs either --a and --b (grid mode) or --hist (histogram mode)".into(),
        )),
    }
}

#[derive(Serialize)]
struct CompareGridParams {
    a: PathBuf,
    b: PathBuf,
    lo: f64,
    hi: f64,
    log_floor: f64,
}

fn compare_grids(a: CompareArgs, cfg: &ConfigFile, out: PathBuf) -> Result<(), CliError> {
    let path_a = a.a.unwrap();
    let path_b = a.b.unwrap();
    let ga = read_density_csv(&path_a)?;
    let gb = read_density_csv(&path_b)?;
    let lo = cfg.resolve(a.lo, "lo", -ga.half_span())?;
    let hi = cfg.resolve(a.hi, "hi", ga.half_span())?;
    let log_floor = cfg.resolve(a.log_floor, "log_floor", 1e-12)?;
    let sup = sup_distance(&ga, &gb, (lo, hi))?;
    let log_sup = log_density_distance(&ga, &gb, (lo, hi), log_floor)?;

    ensure_out_dir(&out)?;
    write_csv(
        &out.join("compare.csv"),
        "x,a,b,abs_diff",
        (0..ga.len()).map(|i| {
            let (va, vb) = (ga.values()[i], gb.values()[i]);
            vec![
                fmt_f64(ga.node(i)),
                fmt_f64(va),
                fmt_f64(vb),
                fmt_f64((va - vb).abs()),
            ]
        }),
    )?;
    write_summary(
        &out,
        "compare",
        CompareGridParams {
            a: path_a,
            b: path_b,
            lo,
            hi,
            log_floor,
        },
        &["compare.csv"],
        json!({ "sup": sup, "log_sup": log_sup }),
    )
}

#[derive(Serialize)]
struct CompareHistParams {
    hist: PathBuf,
    reference: StationaryDensity,
}

fn compare_hist(a: CompareArgs, cfg: &ConfigFile, out: PathBuf) -> Result<(), CliError> {
    let hist_path = a.hist.unwrap();
    let hist = read_hist_csv(&hist_path)?;
    let kind = cfg.resolve(a.kind, "kind", "laplace".to_string())?;
    let k = cfg.resolve(a.k, "k", 1.0)?;
    let quad_tol = cfg.resolve(a.quad_tol, "quad_tol", DEFAULT_QUAD_TOL)?;
    let reference = match kind.as_str() {
        "laplace" => StationaryDensity::laplace(k)?,
        "smooth" => {
            let n = cfg
                .resolve_opt(a.sharpness, "N")?
                .ok_or_else(|| CliError::validation("--kind smooth requires --N".into()))?;
            StationaryDensity::smoothed(k, n, quad_tol)?
        }
        other => {
            return Err(CliError::validation(format!(
                "unknown kind {other:?}; expected laplace or smooth"
            )))
        }
    };
    let cmp = histogram_vs_density(&hist, &reference)?;

    ensure_out_dir(&out)?;
    write_csv(
        &out.join("compare.csv"),
        "x,a,b,abs_diff",
        hist.edges.windows(2).enumerate().map(|(i, e)| {
            let mid = 0.5 * (e[0] + e[1]);
            // Midpoint reference value; the summary uses bin averages.
            let rv = reference.value(mid);
            vec![
                fmt_f64(mid),
                fmt_f64(hist.density[i]),
                fmt_f64(rv),
                fmt_f64((hist.density[i] - rv).abs()),
            ]
        }),
    )?;
    write_summary(
        &out,
        "compare",
        CompareHistParams {
            hist: hist_path,
            reference,
        },
        &["compare.csv"],
        serde_json::to_value(cmp).unwrap(),
    )
}

// ----------------------------------------------------------- generator-check

#[derive(Serialize)]
struct GeneratorParams {
    density: String,
    var: Option<f64>,
    k: f64,
    h: f64,
    dx: f64,
    half_span: f64,
}

pub fn generator_check(a: GeneratorArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let out = cfg.resolve_out(a.out, "out")?;
    let density = cfg.resolve(a.density, "density", "gaussian".to_string())?;
    let k = cfg.resolve(a.k, "k", 1.0)?;
    let h = cfg.resolve(a.h, "h", 0.001)?;
    let dx = cfg.resolve(a.dx, "dx", h * k / 10.0)?;

    let (test_fn, d1, d2, default_span): (
        Box<dyn Fn(f64) -> f64>,
        Box<dyn Fn(f64) -> f64>,
        Box<dyn Fn(f64) -> f64>,
        f64,
    ) = match density.as_str() {
        "gaussian" => {
            let var = cfg.resolve(a.var, "var", 1.0)?;
            if !(var.is_finite() && var > 0.0) {
                return Err(CliError::validation(format!(
                    "gaussian variance must be positive, got {var}"
                )));
            }
            let norm = 1.0 / (2.0 * std::f64::consts::PI * var).sqrt();
            (
                Box::new(move |x: f64| norm * (-x * x / (2.0 * var)).exp()),
                Box::new(move |x: f64| -x / var * norm * (-x * x / (2.0 * var)).exp()),
                Box::new(move |x: f64| {
                    (x * x / (var * var) - 1.0 / var) * norm * (-x * x / (2.0 * var)).exp()
                }),
                8.0 * var.sqrt(),
            )
        }
        "laplace" => (
            Box::new(move |x: f64| laplace_density(x, k)),
            Box::new(move |x: f64| {
                -2.0 * k * signdrift::drift::sign(x) * laplace_density(x, k)
            }),
            Box::new(move |x: f64| 4.0 * k * k * laplace_density(x, k)),
            13.0 / k,
        ),
        other => {
            return Err(CliError::validation(format!(
                "unknown test density {other:?}; expected gaussian or laplace"
            )))
        }
    };
    let var = match density.as_str() {
        "gaussian" => Some(cfg.resolve(a.var, "var", 1.0)?),
        _ => None,
    };
    let default_span = (default_span / dx).ceil() * dx;
    let half_span = cfg.resolve(a.half_span, "half_span", default_span)?;
    let geometry = GridGeometry::new(half_span, dx)?;
    let f = DensityGrid::from_fn(geometry, &test_fn)?.renormalized()?;
    let est = generator_estimate(&f, h, k)?;

    ensure_out_dir(&out)?;
    let mut sup_err: f64 = 0.0;
    let mut rows = Vec::with_capacity(f.len());
    for i in 0..f.len() {
        let x = f.node(i);
        let reference = if x == 0.0 {
            f64::NAN
        } else {
            generator_limit_reference(k, x, &d1, &d2)?
        };
        let err = (est[i] - reference).abs();
        if x.abs() >= 0.5 && x.abs() <= 3.0 {
            sup_err = sup_err.max(err);
        }
        rows.push(vec![
            fmt_f64(x),
            fmt_f64(est[i]),
            fmt_f64(reference),
            fmt_f64(err),
        ]);
    }
    write_csv(&out.join("generator.csv"), "x,estimate,reference,abs_err", rows.into_iter())?;
    write_summary(
        &out,
        "generator-check",
        GeneratorParams {
            density,
            var,
            k,
            h,
            dx,
            half_span,
        },
        &["generator.csv"],
        json!({ "sup_abs_err_mid_window": sup_err }),
    )
}

// ------------------------------------------------------------- fourier-check

#[derive(Serialize)]
struct FourierParams {
    k: f64,
    h: f64,
    var: f64,
    omegas: Vec<f64>,
    dx: f64,
    half_span: f64,
}

pub fn fourier_check(a: FourierArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let out = cfg.resolve_out(a.out, "out")?;
    let k = cfg.resolve(a.k, "k", 1.0)?;
    let h = cfg.resolve(a.h, "h", 0.01)?;
    let var = cfg.resolve(a.var, "var", 0.25)?;
    let dx = cfg.resolve(a.dx, "dx", 1e-3)?;
    let half_span = cfg.resolve(a.half_span, "half_span", 6.0)?;
    let omegas = match cfg.resolve_opt(a.omegas, "omegas")? {
        Some(text) => parse_list::<f64>(&text, "omega")?,
        None => vec![0.0, 1.0, 5.0, 10.0],
    };
    for &omega in &omegas {
        if !omega_resolved(omega, dx) {
            eprintln!(
                "warning: |omega| dx = {:.3} > 0.5; frequency {omega} is undersampled",
                (omega * dx).abs()
            );
        }
    }
    if !(var.is_finite() && var > 0.0) {
        return Err(CliError::validation(format!(
            "variance must be positive, got {var}"
        )));
    }
    let geometry = GridGeometry::new(half_span, dx)?;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * var).sqrt();
    let f = DensityGrid::from_fn(geometry, |x| norm * (-x * x / (2.0 * var)).exp())?
        .renormalized()?;
    let samples = identity_check(&f, h, k, &omegas)?;

    ensure_out_dir(&out)?;
    write_csv(
        &out.join("transform.csv"),
        "omega,lhs_re,lhs_im,rhs,residual",
        samples.iter().map(|s| {
            vec![
                fmt_f64(s.omega),
                fmt_f64(s.lhs.re),
                fmt_f64(s.lhs.im),
                fmt_f64(s.rhs),
                fmt_f64(s.residual),
            ]
        }),
    )?;
    let max_residual = samples.iter().map(|s| s.residual).fold(0.0f64, f64::max);
    write_summary(
        &out,
        "fourier-check",
        FourierParams {
            k,
            h,
            var,
            omegas,
            dx,
            half_span,
        },
        &["transform.csv"],
        json!({ "max_residual": max_residual }),
    )
}

// ------------------------------------------------------------ variance-sweep

#[derive(Serialize)]
struct VarianceSweepParams {
    ks: Vec<f64>,
    h: f64,
    t: f64,
    paths: usize,
    x0: f64,
    seed: u64,
    step_budget: u64,
}

pub fn variance_sweep_cmd(a: VarianceSweepArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let out = cfg.resolve_out(a.out, "out")?;
    let ks = match cfg.resolve_opt(a.ks, "ks")? {
        Some(text) => parse_list::<f64>(&text, "gain")?,
        None => vec![1.0, 2.0, 3.0, 4.0],
    };
    let mut base = RunConfig::new(
        DriftSpec::exact_sign(1.0)?,
        cfg.resolve(a.h, "h", 0.001)?,
        cfg.resolve(a.t, "T", 1.0)?,
        cfg.resolve(a.paths, "paths", 5000)?,
        cfg.resolve(a.seed, "seed", 42)?,
    );
    base.x0 = cfg.resolve(a.x0, "x0", 0.0)?;
    base.step_budget = cfg.resolve(a.budget, "budget", DEFAULT_STEP_BUDGET)?;
    let sweep = variance_sweep(&ks, &base)?;

    ensure_out_dir(&out)?;
    write_csv(
        &out.join("sweep.csv"),
        "k,variance",
        sweep.iter().map(|(k, v)| vec![fmt_f64(*k), fmt_f64(*v)]),
    )?;
    let decreasing = sweep.windows(2).all(|w| w[0].1 > w[1].1);
    write_summary(
        &out,
        "variance-sweep",
        VarianceSweepParams {
            ks,
            h: base.h,
            t: base.t,
            paths: base.paths,
            x0: base.x0,
            seed: base.seed,
            step_budget: base.step_budget,
        },
        &["sweep.csv"],
        json!({ "strictly_decreasing": decreasing }),
    )
}

// -------------------------------------------------------------- smooth-sweep

#[derive(Serialize)]
struct SmoothSweepParams {
    sharpnesses: Vec<u32>,
    k: f64,
    quad_tol: f64,
    half_span: f64,
    dx: f64,
}

pub fn smooth_sweep(a: SmoothSweepArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let out = cfg.resolve_out(a.out, "out")?;
    let ns = match cfg.resolve_opt(a.sharpnesses, "Ns")? {
        Some(text) => parse_list::<u32>(&text, "sharpness")?,
        None => vec![1, 10, 100],
    };
    let k = cfg.resolve(a.k, "k", 1.0)?;
    let quad_tol = cfg.resolve(a.quad_tol, "quad_tol", DEFAULT_QUAD_TOL)?;
    let dx = cfg.resolve(a.dx, "dx", 1e-3)?;
    let default_span = ((8.0 / k) / dx).ceil() * dx;
    let half_span = cfg.resolve(a.half_span, "half_span", default_span)?;
    let geometry = GridGeometry::new(half_span, dx)?;
    let laplace = StationaryDensity::laplace(k)?.sample(geometry)?;

    ensure_out_dir(&out)?;
    let mut outputs = Vec::new();
    let mut rows = Vec::new();
    for &n in &ns {
        let density = StationaryDensity::smoothed(k, n, quad_tol)?;
        let sampled = density.sample(geometry)?;
        let name = format!("smooth_N{n}.csv");
        write_density_csv(&out.join(&name), &sampled)?;
        let window = half_span.min(3.0);
        let sup = sup_distance(&sampled, &laplace, (-window, window))?;
        let (phi0, d) = match density {
            StationaryDensity::Smoothed { phi0, d, .. } => (phi0, d),
            StationaryDensity::Laplace { .. } => unreachable!(),
        };
        rows.push(vec![n.to_string(), fmt_f64(phi0), fmt_f64(d), fmt_f64(sup)]);
        outputs.push(name);
    }
    write_csv(
        &out.join("sweep.csv"),
        "N,phi0,d,sup_dist_laplace",
        rows.into_iter(),
    )?;
    outputs.push("sweep.csv".to_string());
    let output_refs: Vec<&str> = outputs.iter().map(String::as_str).collect();
    write_summary(
        &out,
        "smooth-sweep",
        SmoothSweepParams {
            sharpnesses: ns,
            k,
            quad_tol,
            half_span,
            dx,
        },
        &output_refs,
        json!({}),
    )
}
