use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module.
///
/// [`Error::kind`] groups them into the coarse classes the command-line tool
/// maps onto exit codes.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Validation(String),

    #[error("x = {x} lies outside the tabulated range [{min}, {max}]")]
    Extrapolation { x: f64, min: f64, max: f64 },

    #[error("gamma function pole at z = -{index}")]
    Pole { index: u64 },

    #[error("parameter pole: {0}")]
    ParameterPole(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("energy E = 0 is the branch point of k = sqrt(2mE)/hbar")]
    BranchPoint,

    #[error("energy within {distance:.3e} hbar*omega of the oscillator pole n = {index}")]
    NearPole { index: u64, distance: f64 },

    #[error("|W| = {magnitude:.3e} is below the eigenvalue threshold")]
    NearEigenvalue { magnitude: f64 },

    #[error("Wronskian not constant: relative spread {spread:.3e}")]
    ModeInconsistency { spread: f64 },

    #[error("integration domain too small: {0}")]
    DomainTooSmall(String),

    #[error("mode integration blew up: {0}")]
    Stiffness(String),

    #[error("dressed pole: 1 - gamma G_Q(0,0,E) = {magnitude:.3e}")]
    DressedPole { magnitude: f64 },

    #[error("singular time t = 0; the kernel is a delta distribution there")]
    SingularTime,

    #[error("caustic: |sin(omega t)| = {magnitude:.3e}")]
    Caustic { magnitude: f64 },

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("series diverges: {0}")]
    Divergence(String),

    #[error("contour error: {0}")]
    Contour(String),

    #[error("integrand tail ratio {ratio:.3e} exceeds the truncation bound")]
    Truncation { ratio: f64 },

    #[error("evolution config: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("grid mismatch: {0}")]
    Shape(String),

    #[error("check failed: {0}")]
    Check(String),
}

/// Coarse error classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input: invalid parameters, malformed grids, out-of-range points.
    Validation,
    /// Poles, caustics, singular times, drifting Wronskians.
    Numerical,
    /// Iterative procedures that did not reach their tolerance.
    Convergence,
    /// A diagnostic check reported failure.
    Check,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            Validation(_) | Extrapolation { .. } | ParameterPole(_) | Config(_) | Shape(_) => {
                ErrorKind::Validation
            }
            Convergence(_) | Divergence(_) | Truncation { .. } | Contour(_) => {
                ErrorKind::Convergence
            }
            Check(_) => ErrorKind::Check,
            _ => ErrorKind::Numerical,
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
