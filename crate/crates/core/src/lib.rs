//! Numerical study of the scalar SDE with discontinuous restoring drift,
//!
//!   dx_t = -k sign(x_t) dt + dB_t,
//!
//! via three routes that can be cross-validated against each other:
//!
//! * seeded Euler-Maruyama Monte-Carlo simulation ([`simulate`]),
//! * grid-based propagation of the step-induced density recursion
//!   ([`recursion`], [`generator`]),
//! * closed-form stationary Fokker-Planck densities, both for the exact sign
//!   drift (Laplace) and its saturating-cubic smoothing ([`fokker_planck`]).
//!
//! [`transforms`] verifies a Fourier/half-line-transform identity of the
//! shifted density, and [`analysis`] provides the comparison metrics.

pub mod analysis;
pub mod drift;
pub mod error;
pub mod fokker_planck;
pub mod generator;
pub mod grid;
pub mod quad;
pub mod recursion;
pub mod simulate;
pub mod transforms;

pub use drift::{sign, smoothed_sign, DriftSpec};
pub use error::{Error, Result};
pub use fokker_planck::{
    compute_phi0, laplace_density, laplace_grid, smoothed_density, stationary_residual,
    StationaryDensity,
};
pub use generator::{apply_hh, generator_estimate, generator_limit_reference};
pub use grid::{DensityGrid, GridGeometry};
pub use recursion::{
    evolve, gaussian_convolve, initial_density, recursion_step, recursion_step_with_tol,
    schedule_steps, shift_and_mask, EvolveConfig,
};
pub use simulate::{
    em_step, histogram, simulate_ensemble, simulate_path, simulate_terminal, smoothed_step_size,
    Histogram, RunConfig, TrajectoryEnsemble,
};
pub use transforms::{fourier_of_density, identity_check, laplace_halfline_transform, TransformSample};
