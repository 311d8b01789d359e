use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the numerical kernels and model builders.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    NotSquare { rows: usize, cols: usize },
    /// Largest `|A[i][j] - conj(A[j][i])|` exceeded the Hermiticity tolerance.
    NotHermitian { deviation: f64, tol: f64 },
    IndexOutOfRange { index: usize, len: usize },
    DimensionMismatch { expected: usize, found: usize },
    DimensionTooSmall { dim: usize, min: usize },
    /// The `perp -> sub` block of a superoperator does not vanish.
    NotBlockTriangular { residual: f64 },
    SingularBlock { condition: f64 },
    /// A map of a family is numerically singular at `time`.
    SingularMap { time: f64, condition: f64 },
    NotTracePreserving { deviation: f64 },
    NotHermiticityPreserving { deviation: f64 },
    TimeOutOfRange { time: f64, start: f64, end: f64 },
    /// `norm * dt` of a propagation step exceeded the admissible bound.
    StepTooLarge { time: f64, norm_dt: f64, limit: f64 },
    InvalidInput(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSquare { rows, cols } => write!(f, "matrix is not square ({rows}x{cols})"),
            Error::NotHermitian { deviation, tol } => {
                write!(f, "matrix is not Hermitian (deviation {deviation:e} > {tol:e})")
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::DimensionTooSmall { dim, min } => {
                write!(f, "dimension {dim} is below the minimum {min}")
            }
            Error::NotBlockTriangular { residual } => {
                write!(f, "superoperator is not block triangular (residual {residual:e})")
            }
            Error::SingularBlock { condition } => {
                write!(f, "diagonal block is singular (condition estimate {condition:e})")
            }
            Error::SingularMap { time, condition } => {
                write!(f, "map at t = {time} is singular (condition estimate {condition:e})")
            }
            Error::NotTracePreserving { deviation } => {
                write!(f, "generator is not trace preserving (deviation {deviation:e})")
            }
            Error::NotHermiticityPreserving { deviation } => {
                write!(f, "generator does not preserve Hermiticity (deviation {deviation:e})")
            }
            Error::TimeOutOfRange { time, start, end } => {
                write!(f, "time {time} outside the sampled range [{start}, {end}]")
            }
            Error::StepTooLarge { time, norm_dt, limit } => write!(
                f,
                "propagation step at t = {time} too large (norm*dt = {norm_dt} > {limit}); refine the grid"
            ),
            Error::InvalidInput(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for Error {}
