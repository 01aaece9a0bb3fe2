//! Python bindings exposing the main types and operations of the signdrift
//! library: drift laws, seeded Euler-Maruyama ensembles, the density
//! recursion, stationary densities, the generator estimate, transforms, and
//! comparison metrics.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use signdrift as core;
use signdrift::grid::GridGeometry;

fn to_py_err(e: core::Error) -> PyErr {
    if e.is_numerical() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

#[pyclass(name = "DriftSpec", frozen, from_py_object)]
#[derive(Clone)]
struct PyDriftSpec {
    inner: core::DriftSpec,
}

#[pymethods]
impl PyDriftSpec {
    #[staticmethod]
    fn exact_sign(k: f64) -> PyResult<Self> {
        Ok(PyDriftSpec {
            inner: core::DriftSpec::exact_sign(k).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn smoothed_sign(k: f64, sharpness: u32) -> PyResult<Self> {
        Ok(PyDriftSpec {
            inner: core::DriftSpec::smoothed_sign(k, sharpness).map_err(to_py_err)?,
        })
    }

    /// Drift coefficient b(x).
    fn value(&self, x: f64) -> f64 {
        self.inner.value(x)
    }

    #[getter]
    fn k(&self) -> f64 {
        self.inner.gain()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

#[pyclass(name = "RunConfig", from_py_object)]
#[derive(Clone)]
struct PyRunConfig {
    inner: core::RunConfig,
}

#[pymethods]
impl PyRunConfig {
    #[new]
    #[pyo3(signature = (drift, h, t, paths, seed, x0 = 0.0, alpha = 0.5))]
    fn new(drift: PyDriftSpec, h: f64, t: f64, paths: usize, seed: u64, x0: f64, alpha: f64) -> Self {
        let mut inner = core::RunConfig::new(drift.inner, h, t, paths, seed);
        inner.x0 = x0;
        inner.alpha = alpha;
        PyRunConfig { inner }
    }

    fn n_steps(&self) -> usize {
        self.inner.n_steps()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[setter]
    fn set_step_budget(&mut self, budget: u64) {
        self.inner.step_budget = budget;
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

#[pyclass(name = "DensityGrid", frozen)]
struct PyDensityGrid {
    inner: core::DensityGrid,
}

#[pymethods]
impl PyDensityGrid {
    #[staticmethod]
    fn from_values(half_span: f64, dx: f64, values: Vec<f64>) -> PyResult<Self> {
        let geometry = GridGeometry::new(half_span, dx).map_err(to_py_err)?;
        Ok(PyDensityGrid {
            inner: core::DensityGrid::new(geometry, values).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn half_span(&self) -> f64 {
        self.inner.half_span()
    }

    #[getter]
    fn dx(&self) -> f64 {
        self.inner.dx()
    }

    fn xs(&self) -> Vec<f64> {
        self.inner.nodes().collect()
    }

    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    fn mass(&self) -> f64 {
        self.inner.mass()
    }

    fn mirror_asymmetry(&self) -> f64 {
        self.inner.mirror_asymmetry()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "DensityGrid(half_span={}, dx={}, nodes={})",
            self.inner.half_span(),
            self.inner.dx(),
            self.inner.len()
        )
    }
}

#[pyclass(name = "Histogram", frozen)]
struct PyHistogram {
    inner: core::Histogram,
}

#[pymethods]
impl PyHistogram {
    #[getter]
    fn edges(&self) -> Vec<f64> {
        self.inner.edges.clone()
    }

    #[getter]
    fn counts(&self) -> Vec<u64> {
        self.inner.counts.clone()
    }

    #[getter]
    fn density(&self) -> Vec<f64> {
        self.inner.density.clone()
    }

    #[getter]
    fn samples(&self) -> usize {
        self.inner.samples
    }
}

#[pyclass(name = "Ensemble", frozen)]
struct PyEnsemble {
    inner: core::TrajectoryEnsemble,
}

#[pymethods]
impl PyEnsemble {
    fn times(&self) -> Vec<f64> {
        self.inner.times.clone()
    }

    fn path(&self, index: usize) -> PyResult<Vec<f64>> {
        self.inner
            .values
            .get(index)
            .cloned()
            .ok_or_else(|| PyValueError::new_err(format!("no path {index}")))
    }

    fn mean_path(&self) -> Vec<f64> {
        self.inner.mean_path()
    }

    fn terminal_values(&self) -> Vec<f64> {
        self.inner.terminal_values()
    }

    fn zero_crossings(&self) -> Vec<u64> {
        self.inner.zero_crossings()
    }

    #[pyo3(signature = (bins, lo = None, hi = None))]
    fn histogram(&self, bins: usize, lo: Option<f64>, hi: Option<f64>) -> PyResult<PyHistogram> {
        let range = match (lo, hi) {
            (Some(lo), Some(hi)) => Some((lo, hi)),
            (None, None) => None,
            _ => return Err(PyValueError::new_err("give both lo and hi, or neither")),
        };
        Ok(PyHistogram {
            inner: self
                .inner
                .terminal_histogram(bins, range)
                .map_err(to_py_err)?,
        })
    }

    #[getter]
    fn paths(&self) -> usize {
        self.inner.values.len()
    }
}

#[pyclass(name = "StationaryDensity", frozen)]
struct PyStationaryDensity {
    inner: core::StationaryDensity,
}

#[pymethods]
impl PyStationaryDensity {
    #[staticmethod]
    fn laplace(k: f64) -> PyResult<Self> {
        Ok(PyStationaryDensity {
            inner: core::StationaryDensity::laplace(k).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (k, sharpness, quad_tol = 1e-10))]
    fn smoothed(k: f64, sharpness: u32, quad_tol: f64) -> PyResult<Self> {
        Ok(PyStationaryDensity {
            inner: core::StationaryDensity::smoothed(k, sharpness, quad_tol).map_err(to_py_err)?,
        })
    }

    fn value(&self, x: f64) -> f64 {
        self.inner.value(x)
    }

    fn variance(&self) -> PyResult<f64> {
        self.inner.variance().map_err(to_py_err)
    }

    fn sample(&self, half_span: f64, dx: f64) -> PyResult<PyDensityGrid> {
        let geometry = GridGeometry::new(half_span, dx).map_err(to_py_err)?;
        Ok(PyDensityGrid {
            inner: self.inner.sample(geometry).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn phi0(&self) -> Option<f64> {
        match self.inner {
            core::StationaryDensity::Smoothed { phi0, .. } => Some(phi0),
            core::StationaryDensity::Laplace { .. } => None,
        }
    }

    #[getter]
    fn d(&self) -> Option<f64> {
        match self.inner {
            core::StationaryDensity::Smoothed { d, .. } => Some(d),
            core::StationaryDensity::Laplace { .. } => None,
        }
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

#[pyfunction]
fn sign(x: f64) -> f64 {
    core::sign(x)
}

#[pyfunction]
fn smoothed_sign(x: f64, sharpness: u32) -> f64 {
    core::smoothed_sign(x, sharpness)
}

#[pyfunction]
fn em_step(x: f64, drift: PyDriftSpec, h: f64, w: f64) -> f64 {
    core::em_step(x, &drift.inner, h, w)
}

#[pyfunction]
#[pyo3(signature = (sharpness, base = 0.001))]
fn smoothed_step_size(sharpness: u32, base: f64) -> f64 {
    core::smoothed_step_size(sharpness, base)
}

#[pyfunction]
fn simulate(config: PyRunConfig) -> PyResult<PyEnsemble> {
    Ok(PyEnsemble {
        inner: core::simulate_ensemble(&config.inner).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn simulate_terminal(config: PyRunConfig) -> PyResult<Vec<f64>> {
    core::simulate_terminal(&config.inner).map_err(to_py_err)
}

#[pyfunction]
fn initial_density(h: f64, half_span: f64, dx: f64) -> PyResult<PyDensityGrid> {
    let geometry = GridGeometry::new(half_span, dx).map_err(to_py_err)?;
    Ok(PyDensityGrid {
        inner: core::initial_density(h, geometry).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn shift_and_mask(f: &PyDensityGrid, h: f64, k: f64) -> PyResult<PyDensityGrid> {
    Ok(PyDensityGrid {
        inner: core::shift_and_mask(&f.inner, h, k).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn gaussian_convolve(f: &PyDensityGrid, h: f64) -> PyResult<PyDensityGrid> {
    Ok(PyDensityGrid {
        inner: core::gaussian_convolve(&f.inner, h).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn recursion_step(f: &PyDensityGrid, h: f64, k: f64) -> PyResult<PyDensityGrid> {
    Ok(PyDensityGrid {
        inner: core::recursion_step(&f.inner, h, k).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn apply_hh(f: &PyDensityGrid, h: f64, k: f64) -> PyResult<PyDensityGrid> {
    Ok(PyDensityGrid {
        inner: core::apply_hh(&f.inner, h, k).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn schedule_steps(h: f64, alpha: f64) -> PyResult<usize> {
    core::schedule_steps(h, alpha).map_err(to_py_err)
}

#[pyfunction]
fn default_evolve_geometry(h: f64, k: f64) -> PyResult<(f64, f64)> {
    let g = core::EvolveConfig::default_geometry(h, k).map_err(to_py_err)?;
    Ok((g.half_span, g.dx))
}

#[pyfunction]
fn evolve(
    h: f64,
    k: f64,
    alpha: f64,
    half_span: f64,
    dx: f64,
    snapshots: Vec<usize>,
) -> PyResult<Vec<(usize, PyDensityGrid)>> {
    let geometry = GridGeometry::new(half_span, dx).map_err(to_py_err)?;
    let cfg = core::EvolveConfig::new(h, k, alpha, geometry, snapshots);
    Ok(core::evolve(&cfg)
        .map_err(to_py_err)?
        .into_iter()
        .map(|(n, g)| (n, PyDensityGrid { inner: g }))
        .collect())
}

#[pyfunction]
fn laplace_density(x: f64, k: f64) -> f64 {
    core::laplace_density(x, k)
}

#[pyfunction]
fn laplace_grid(k: f64, half_span: f64, dx: f64) -> PyResult<PyDensityGrid> {
    let geometry = GridGeometry::new(half_span, dx).map_err(to_py_err)?;
    Ok(PyDensityGrid {
        inner: core::laplace_grid(k, geometry).map_err(to_py_err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (k, sharpness, quad_tol = 1e-10))]
fn compute_phi0(k: f64, sharpness: u32, quad_tol: f64) -> PyResult<f64> {
    core::compute_phi0(k, sharpness, quad_tol).map_err(to_py_err)
}

#[pyfunction]
fn smoothed_density(x: f64, k: f64, sharpness: u32, phi0: f64) -> f64 {
    core::smoothed_density(x, k, sharpness, phi0)
}

#[pyfunction]
#[pyo3(signature = (f, k, exclude = 0.1))]
fn stationary_residual(f: &PyDensityGrid, k: f64, exclude: f64) -> PyResult<Vec<(f64, f64)>> {
    core::stationary_residual(&f.inner, k, exclude).map_err(to_py_err)
}

#[pyfunction]
fn generator_estimate(f: &PyDensityGrid, h: f64, k: f64) -> PyResult<Vec<f64>> {
    core::generator_estimate(&f.inner, h, k).map_err(to_py_err)
}

#[pyfunction]
fn generator_limit_reference(
    py: Python<'_>,
    k: f64,
    x: f64,
    df: Py<PyAny>,
    d2f: Py<PyAny>,
) -> PyResult<f64> {
    let call = |f: &Py<PyAny>, x: f64| -> f64 {
        f.call1(py, (x,))
            .and_then(|v| v.extract::<f64>(py))
            .unwrap_or(f64::NAN)
    };
    core::generator_limit_reference(k, x, |x| call(&df, x), |x| call(&d2f, x)).map_err(to_py_err)
}

#[pyfunction]
fn fourier_of_density(f: &PyDensityGrid, omega: f64) -> (f64, f64) {
    let v = core::fourier_of_density(&f.inner, omega);
    (v.re, v.im)
}

#[pyfunction]
fn laplace_halfline_transform(f: &PyDensityGrid, omega: f64) -> (f64, f64) {
    let v = core::laplace_halfline_transform(&f.inner, omega);
    (v.re, v.im)
}

/// Returns (omega, lhs_re, lhs_im, rhs, residual) per frequency.
#[pyfunction]
fn identity_check(
    f: &PyDensityGrid,
    h: f64,
    k: f64,
    omegas: Vec<f64>,
) -> PyResult<Vec<(f64, f64, f64, f64, f64)>> {
    Ok(core::identity_check(&f.inner, h, k, &omegas)
        .map_err(to_py_err)?
        .into_iter()
        .map(|s| (s.omega, s.lhs.re, s.lhs.im, s.rhs, s.residual))
        .collect())
}

#[pyfunction]
fn sup_distance(a: &PyDensityGrid, b: &PyDensityGrid, lo: f64, hi: f64) -> PyResult<f64> {
    core::analysis::sup_distance(&a.inner, &b.inner, (lo, hi)).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (a, b, lo, hi, floor = 1e-12))]
fn log_density_distance(
    a: &PyDensityGrid,
    b: &PyDensityGrid,
    lo: f64,
    hi: f64,
    floor: f64,
) -> PyResult<f64> {
    core::analysis::log_density_distance(&a.inner, &b.inner, (lo, hi), floor).map_err(to_py_err)
}

#[pyfunction]
fn variance_sweep(ks: Vec<f64>, base: PyRunConfig) -> PyResult<Vec<(f64, f64)>> {
    core::analysis::variance_sweep(&ks, &base.inner).map_err(to_py_err)
}

/// Returns {"l1", "sup", "variance_sample", "variance_ref"}.
#[pyfunction]
fn histogram_vs_density(
    py: Python<'_>,
    hist: &PyHistogram,
    reference: &PyStationaryDensity,
) -> PyResult<Py<PyAny>> {
    let cmp = core::analysis::histogram_vs_density(&hist.inner, &reference.inner)
        .map_err(to_py_err)?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("l1", cmp.l1)?;
    dict.set_item("sup", cmp.sup)?;
    dict.set_item("variance_sample", cmp.variance_sample)?;
    dict.set_item("variance_ref", cmp.variance_ref)?;
    Ok(dict.into())
}

#[pymodule]
fn signdrift_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDriftSpec>()?;
    m.add_class::<PyRunConfig>()?;
    m.add_class::<PyDensityGrid>()?;
    m.add_class::<PyHistogram>()?;
    m.add_class::<PyEnsemble>()?;
    m.add_class::<PyStationaryDensity>()?;
    m.add_function(wrap_pyfunction!(sign, m)?)?;
    m.add_function(wrap_pyfunction!(smoothed_sign, m)?)?;
    m.add_function(wrap_pyfunction!(em_step, m)?)?;
    m.add_function(wrap_pyfunction!(smoothed_step_size, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_terminal, m)?)?;
    m.add_function(wrap_pyfunction!(initial_density, m)?)?;
    m.add_function(wrap_pyfunction!(shift_and_mask, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_convolve, m)?)?;
    m.add_function(wrap_pyfunction!(recursion_step, m)?)?;
    m.add_function(wrap_pyfunction!(apply_hh, m)?)?;
    m.add_function(wrap_pyfunction!(schedule_steps, m)?)?;
    m.add_function(wrap_pyfunction!(default_evolve_geometry, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(laplace_density, m)?)?;
    m.add_function(wrap_pyfunction!(laplace_grid, m)?)?;
    m.add_function(wrap_pyfunction!(compute_phi0, m)?)?;
    m.add_function(wrap_pyfunction!(smoothed_density, m)?)?;
    m.add_function(wrap_pyfunction!(stationary_residual, m)?)?;
    m.add_function(wrap_pyfunction!(generator_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(generator_limit_reference, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_of_density, m)?)?;
    m.add_function(wrap_pyfunction!(laplace_halfline_transform, m)?)?;
    m.add_function(wrap_pyfunction!(identity_check, m)?)?;
    m.add_function(wrap_pyfunction!(sup_distance, m)?)?;
    m.add_function(wrap_pyfunction!(log_density_distance, m)?)?;
    m.add_function(wrap_pyfunction!(variance_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(histogram_vs_density, m)?)?;
    Ok(())
}
