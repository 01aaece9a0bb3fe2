//! Error type shared across the crate.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter failed validation before any computation ran.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The shift distance h*k does not land on a whole number of grid nodes.
    #[error("shift h*k = {shift} is not an integer multiple of dx = {dx}")]
    MisalignedShift { shift: f64, dx: f64 },

    /// The shift distance reaches past the grid boundary.
    #[error("shift h*k = {shift} must be smaller than the grid half-span {half_span}")]
    ShiftTooWide { shift: f64, half_span: f64 },

    /// The truncated Gaussian kernel does not fit inside the grid.
    #[error("kernel radius {radius} exceeds the grid span {span}")]
    KernelTooWide { radius: f64, span: f64 },

    /// The grid cannot hold the requested density to the required mass.
    #[error("grid too narrow: captured mass {captured} below {required}")]
    GridTooNarrow { captured: f64, required: f64 },

    /// A density operation produced (or received) mass outside tolerance.
    #[error("density mass {mass} violates unit-mass tolerance {tol}")]
    MassViolation { mass: f64, tol: f64 },

    /// Adaptive quadrature hit its subdivision cap before reaching tolerance.
    #[error("quadrature did not converge within the iteration cap")]
    QuadratureDidNotConverge,

    /// A step schedule or path budget exceeded its cap.
    #[error("requested work {requested} exceeds cap {cap}")]
    BudgetExceeded { requested: u64, cap: u64 },

    /// Two grids that must share geometry do not.
    #[error("grid geometries differ: {0}")]
    GeometryMismatch(String),

    /// A window selected no grid nodes.
    #[error("window [{lo}, {hi}] contains no grid nodes")]
    EmptyWindow { lo: f64, hi: f64 },

    /// An operation requiring an even density received an asymmetric one.
    #[error("density is not even: mirrored-node difference {asymmetry} exceeds {tol}")]
    NotEven { asymmetry: f64, tol: f64 },

    /// The generator reference is undefined at the drift discontinuity.
    #[error("generator reference is undefined at x = 0")]
    UndefinedAtOrigin,

    /// An ensemble or grid had too little data for the operation.
    #[error("{0}")]
    TooFewSamples(String),
}

impl Error {
    /// True for failures of the numerics themselves (as opposed to input
    /// validation); the CLI maps these to a distinct exit code.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::MassViolation { .. } | Error::QuadratureDidNotConverge
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
