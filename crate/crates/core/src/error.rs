use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("selection rule violated: {0}")]
    Selection(String),

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error(
        "norm drift {drift:e} at t = {time:e} s exceeds {limit:e}; reduce the step (dt = {dt:e} s)"
    )]
    NormDrift {
        drift: f64,
        time: f64,
        dt: f64,
        limit: f64,
    },

    #[error("time step {dt:e} s does not resolve the fastest rate {rate:e} rad/s (need dt <= {max_dt:e} s)")]
    StepTooLarge { dt: f64, rate: f64, max_dt: f64 },

    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("atom data: {0}")]
    AtomData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
