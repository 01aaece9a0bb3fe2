#!/usr/bin/env python3
"""Smoke test for the signdrift_py extension module.

Builds are found under target/release or target/debug; build one first with

    cargo build -p signdrift-py --release

then run

    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        REPO / "target" / "release" / "libsigndrift_py.so",
        REPO / "target" / "debug" / "libsigndrift_py.so",
        REPO / "target" / "release" / "libsigndrift_py.dylib",
        REPO / "target" / "debug" / "libsigndrift_py.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("no built extension found; run: cargo build -p signdrift-py --release")
    stage = Path(tempfile.mkdtemp(prefix="signdrift-py-"))
    shutil.copy2(built, stage / "signdrift_py.so")
    sys.path.insert(0, str(stage))
    import signdrift_py

    return signdrift_py


def check(label, ok):
    print(f"{'ok' if ok else 'FAIL'}  {label}")
    if not ok:
        sys.exit(1)


def main():
    sd = load_module()

    # Drift laws.
    check("sign(0) == 0", sd.sign(0.0) == 0.0)
    check("sign(-1e-12) == -1", sd.sign(-1e-12) == -1.0)
    check(
        "smoothed_sign(0.25, 2) == 0.6875",
        abs(sd.smoothed_sign(0.25, 2) - 0.6875) < 1e-15,
    )
    smooth = sd.DriftSpec.smoothed_sign(1.0, 2)
    check(
        "em_step hand value",
        abs(sd.em_step(0.25, smooth, 0.001, 0.002) - 0.2513125) < 1e-12,
    )
    check("smoothed_step_size(4) == 0.00025", sd.smoothed_step_size(4) == 0.00025)

    # Seeded simulation determinism.
    drift = sd.DriftSpec.exact_sign(1.0)
    cfg = sd.RunConfig(drift, 0.01, 0.5, 64, 42)
    a = sd.simulate(cfg)
    b = sd.simulate(cfg)
    check("simulate deterministic", a.path(7) == b.path(7))
    check(
        "terminal values match ensemble",
        sd.simulate_terminal(cfg) == a.terminal_values(),
    )
    hist = a.histogram(20)
    check("histogram counts sum to paths", sum(hist.counts) == 64)

    # Density recursion.
    half_span, dx = sd.default_evolve_geometry(0.1, 1.0)
    snaps = sd.evolve(0.1, 1.0, 0.0, half_span, dx, [0, 5, 10])
    check("evolve returns requested snapshots", [n for n, _ in snaps] == [0, 5, 10])
    check(
        "snapshot masses are unit",
        all(abs(g.mass() - 1.0) < 1e-6 for _, g in snaps),
    )
    check(
        "snapshots stay even",
        all(g.mirror_asymmetry() < 1e-10 for _, g in snaps),
    )

    # Stationary densities.
    check("laplace_density(0, 1) == 1", sd.laplace_density(0.0, 1.0) == 1.0)
    phi0 = sd.compute_phi0(1.0, 10_000)
    check("phi0(k=1, N=1e4) near 1", abs(phi0 - 1.0) < 1e-3)
    stat = sd.StationaryDensity.smoothed(1.0, 10)
    check("smoothed density value at 0 is phi0", stat.value(0.0) == stat.phi0)
    lap = sd.StationaryDensity.laplace(2.0)
    check("laplace variance 1/(2k^2)", lap.variance() == 0.125)

    # Transforms: Laplace characteristic function at omega = 2 is 1/2.
    grid = sd.laplace_grid(1.0, 10.0, 1e-3)
    re, im = sd.fourier_of_density(grid, 2.0)
    check("laplace characteristic value", abs(re - 0.5) < 1e-6 and abs(im) < 1e-10)
    gauss = sd.StationaryDensity.laplace(1.0).sample(10.0, 1e-3)
    samples = sd.identity_check(gauss, 0.01, 1.0, [0.0, 1.0, 5.0])
    check("transform identity residuals", all(s[4] < 1e-6 for s in samples))

    # Metrics.
    check("sup_distance of grid to itself", sd.sup_distance(grid, grid, -2.0, 2.0) == 0.0)
    res = sd.stationary_residual(grid, 1.0)
    worst = max(abs(r) for x, r in res if abs(x) <= 3.0)
    check("stationary residual of laplace small", worst < 1e-4)

    print("all smoke checks passed")


if __name__ == "__main__":
    main()
