use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "quadrature did not converge: achieved relative error {achieved:.3e} \
         after {subdivisions} subdivisions (target {target:.3e})"
    )]
    QuadratureNonConvergence {
        achieved: f64,
        target: f64,
        subdivisions: u32,
    },

    #[error("band index {index} out of range 1..={max}")]
    BandIndexOutOfRange { index: usize, max: usize },

    #[error("kernel is singular at zero separation")]
    SingularSeparation,

    #[error(
        "covariance embedding rejected (min eigenvalue ratio {min_eig_ratio:.3e}, \
         wrap bias {wrap_bias:.3e} of band variance); increase padding_factor \
         (currently {padding_factor})"
    )]
    EmbeddingRejected {
        min_eig_ratio: f64,
        wrap_bias: f64,
        padding_factor: usize,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error(
        "path exited the field window at t = {exit_time} (sample {index}); \
         enlarge the window or shorten the horizon"
    )]
    WindowExit { exit_time: f64, index: usize },

    #[error("requested clock time {requested} exceeds the functional horizon {horizon}")]
    ClockBeyondHorizon { requested: f64, horizon: f64 },

    #[error("ball radius {radius} below grid resolution (needs >= {min_radius})")]
    RadiusBelowResolution { radius: f64, min_radius: f64 },

    #[error("ball of radius {radius} around ({x}, {y}) leaves the grid window")]
    BallOutsideWindow { radius: f64, x: f64, y: f64 },

    #[error("stacks are not nested: {0}")]
    NotNested(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("file format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
