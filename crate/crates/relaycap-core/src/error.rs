use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of the function.
    Domain(&'static str),
    /// Two conditioning eigenvalues closer than the admissible gap.
    DegenerateSpectrum { gap: f64 },
    /// A density series evaluated to a clearly negative value.
    NegativeDensity { lambda: f64, value: f64 },
    /// Adaptive quadrature hit its subdivision budget.
    Quadrature { estimate: f64, error: f64 },
    /// An iterative routine ran out of iterations.
    NoConvergence(&'static str),
    /// Cholesky factorization met a non-positive pivot.
    Factorization,
    /// Parameters do not put the system in the requested asymptotic regime.
    Regime(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::DegenerateSpectrum { gap } => {
                write!(f, "degenerate spectrum: eigenvalue gap {gap:e} below 1e-9")
            }
            Error::NegativeDensity { lambda, value } => {
                write!(f, "density series negative at lambda={lambda}: {value:e}")
            }
            Error::Quadrature { estimate, error } => write!(
                f,
                "quadrature did not converge: estimate {estimate}, error estimate {error:e}"
            ),
            Error::NoConvergence(what) => write!(f, "{what} did not converge"),
            Error::Factorization => write!(f, "matrix is not positive definite"),
            Error::Regime(what) => write!(f, "regime precondition violated: {what}"),
        }
    }
}

impl core::error::Error for Error {}
