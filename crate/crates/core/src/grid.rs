//! Uniform symmetric grids carrying sampled probability densities.

use crate::error::{Error, Result};

/// Geometry of a uniform grid on [-L, L] with a node at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridGeometry {
    pub half_span: f64,
    pub dx: f64,
}

impl GridGeometry {
    pub fn new(half_span: f64, dx: f64) -> Result<Self> {
        let g = GridGeometry { half_span, dx };
        g.half_node_count()?;
        Ok(g)
    }

    /// Number of nodes on each side of 0, i.e. M with L = M dx.
    pub fn half_node_count(&self) -> Result<usize> {
        if !(self.half_span.is_finite() && self.half_span > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "half-span must be positive and finite, got {}",
                self.half_span
            )));
        }
        if !(self.dx.is_finite() && self.dx > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "dx must be positive and finite, got {}",
                self.dx
            )));
        }
        let ratio = self.half_span / self.dx;
        let m = ratio.round();
        if (ratio - m).abs() > 1e-6 * m.max(1.0) {
            return Err(Error::InvalidConfig(format!(
                "half-span {} is not an integer multiple of dx {}",
                self.half_span, self.dx
            )));
        }
        Ok(m as usize)
    }

    pub fn node_count(&self) -> Result<usize> {
        Ok(2 * self.half_node_count()? + 1)
    }
}

/// A nonnegative density sampled at the nodes x_i = (i - M) dx of a
/// symmetric uniform grid, i = 0..2M.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    half_span: f64,
    dx: f64,
    half_nodes: usize,
    values: Vec<f64>,
}

impl DensityGrid {
    /// Wraps raw node values after validating geometry and nonnegativity.
    pub fn new(geometry: GridGeometry, values: Vec<f64>) -> Result<Self> {
        let m = geometry.half_node_count()?;
        if values.len() != 2 * m + 1 {
            return Err(Error::InvalidConfig(format!(
                "expected {} node values, got {}",
                2 * m + 1,
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidConfig(format!(
                "density values must be finite and nonnegative, found {bad}"
            )));
        }
        Ok(DensityGrid {
            half_span: geometry.half_span,
            dx: geometry.dx,
            half_nodes: m,
            values,
        })
    }

    /// Samples a function at the grid nodes. Negative samples are rejected.
    pub fn from_fn(geometry: GridGeometry, f: impl Fn(f64) -> f64) -> Result<Self> {
        let m = geometry.half_node_count()?;
        let n = 2 * m + 1;
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            values.push(f(node_at(i, m, geometry.dx)));
        }
        DensityGrid::new(geometry, values)
    }

    pub fn geometry(&self) -> GridGeometry {
        GridGeometry {
            half_span: self.half_span,
            dx: self.dx,
        }
    }

    pub fn half_span(&self) -> f64 {
        self.half_span
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Index of the node at x = 0.
    pub fn center(&self) -> usize {
        self.half_nodes
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Node coordinate x_i = (i - M) dx; mirrored indices produce exactly
    /// negated coordinates.
    pub fn node(&self, i: usize) -> f64 {
        node_at(i, self.half_nodes, self.dx)
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.node(i))
    }

    /// Trapezoidal mass: dx * (sum of values with the two end nodes halved).
    pub fn mass(&self) -> f64 {
        let s = kahan_sum(self.values.iter().copied());
        let ends = 0.5 * (self.values[0] + self.values[self.len() - 1]);
        (s - ends) * self.dx
    }

    /// Scales the values so the trapezoidal mass is 1.
    pub fn renormalized(mut self) -> Result<Self> {
        let m = self.mass();
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "cannot renormalize density with mass {m}"
            )));
        }
        for v in &mut self.values {
            *v /= m;
        }
        Ok(self)
    }

    /// Largest |f(x) - f(-x)| over mirrored node pairs.
    pub fn mirror_asymmetry(&self) -> f64 {
        let n = self.len();
        (0..self.half_nodes)
            .map(|i| (self.values[i] - self.values[n - 1 - i]).abs())
            .fold(0.0, f64::max)
    }

    pub fn check_unit_mass(&self, tol: f64) -> Result<()> {
        let m = self.mass();
        if (m - 1.0).abs() > tol {
            return Err(Error::MassViolation { mass: m, tol });
        }
        Ok(())
    }

    /// Indices of nodes with lo <= x <= hi (with a tiny tolerance so window
    /// bounds that coincide with nodes are included).
    pub fn window_indices(&self, lo: f64, hi: f64) -> Result<Vec<usize>> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::InvalidConfig(format!(
                "invalid window [{lo}, {hi}]"
            )));
        }
        let slack = 1e-9 * self.dx;
        let idx: Vec<usize> = (0..self.len())
            .filter(|&i| {
                let x = self.node(i);
                x >= lo - slack && x <= hi + slack
            })
            .collect();
        if idx.is_empty() {
            return Err(Error::EmptyWindow { lo, hi });
        }
        Ok(idx)
    }
}

fn node_at(i: usize, half_nodes: usize, dx: f64) -> f64 {
    (i as isize - half_nodes as isize) as f64 * dx
}

/// Compensated summation; keeps long density sums accurate to a few ulps.
pub(crate) fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}
