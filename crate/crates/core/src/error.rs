use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Adaptive quadrature ran out of evaluations before meeting its tolerance.
    #[error(
        "quadrature did not converge: error estimate {error_estimate:e} exceeds tolerance \
         {tolerance:e} after {evaluations} evaluations"
    )]
    NonConvergence {
        tolerance: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    /// The integration interval is empty, reversed or not finite.
    #[error("invalid integration interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    /// The integrand did not decay as the supplied hint promised.
    #[error("no tail bound available: {0}")]
    TailBoundUnavailable(String),

    /// The integrand returned NaN or infinity away from any marked singularity.
    #[error("integrand is not finite at {at}")]
    NonFiniteIntegrand { at: f64 },

    /// Gamma evaluated at a non-positive integer.
    #[error("gamma function has a pole at {0}")]
    Pole(f64),

    /// Argument outside the domain of a function.
    #[error("argument outside the domain: {0}")]
    Domain(String),

    /// A series whose parameters violate its convergence condition.
    #[error("series does not converge: {0}")]
    SeriesDivergence(String),

    /// Alternating-series cancellation destroyed more digits than the budget allows.
    #[error(
        "cancellation exceeds the precision budget: value {value:e} with estimated \
         absolute error {error_estimate:e}"
    )]
    PrecisionLoss { value: f64, error_estimate: f64 },

    /// Spectral density evaluated on one of its singular frequencies.
    #[error("frequency {lambda} is within 1e-12 of the singular point {location}")]
    SingularPoint { lambda: f64, location: f64 },

    /// The requested limit regime does not match the zero-frequency weight of the spectrum.
    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),

    /// Spectrum parameters violate the model constraints.
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    /// Equation order or sign is not admissible.
    #[error("invalid equation: {0}")]
    InvalidEquation(String),

    /// Frequency grid or query grid is unusable.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// Realizations in an ensemble do not share a grid, or a query misses the grid.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Writing or reading an export failed.
    #[error("i/o failure: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
