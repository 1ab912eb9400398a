use thiserror::Error;

/// Errors raised by the numerical engine.
#[derive(Debug, Error)]
pub enum SalpeterError {
    #[error("domain error in {function}: argument {argument} outside {requirement}")]
    Domain {
        function: &'static str,
        argument: String,
        requirement: &'static str,
    },

    #[error("overflow in {function}: {detail}")]
    Overflow {
        function: &'static str,
        detail: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular kernel evaluated at zero separation")]
    KernelSingularity,

    #[error("cannot normalize a zero state")]
    ZeroState,

    #[error(
        "momentum profile shifted by {shift} exits the ladder (max |p| = {p_max}); \
         enlarge the grid or shorten the evolution"
    )]
    LadderAliasing { shift: f64, p_max: f64 },

    #[error(
        "grid spacing does not resolve the Compton wavelength: dx / (hbar/(m c)) = {ratio:.3}; \
         refine the grid below ratio 1"
    )]
    ComptonUnderResolved { ratio: f64 },

    #[error("series current requires m > 0 (the expansion has no massless limit)")]
    MasslessSeries,

    #[error("series current diverging at order {order}: partial sums grow; band-limit violated")]
    SeriesDivergence { order: usize },

    #[error("quadrature did not converge: requested {requested:e}, achieved {achieved:e}")]
    QuadratureNonConvergence { requested: f64, achieved: f64 },

    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },

    #[error("figure index {0} out of range 1..=10")]
    FigureOutOfRange(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SalpeterError>;
