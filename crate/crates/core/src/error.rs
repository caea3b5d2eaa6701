use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("non-finite value in `{field}`")]
    NonFinite { field: &'static str },

    #[error("integration diverged at t = {t} s (non-finite state; try a smaller dt)")]
    Diverged { t: f64 },

    #[error("influx schedule not aligned to the integration grid: {0}")]
    Misaligned(String),

    #[error("empty harvest window [{from}, {to})")]
    EmptyWindow { from: f64, to: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("degenerate normalizer: range of the reference vector is zero")]
    DegenerateNormalizer,

    #[error("spectral radius is zero; cannot rescale")]
    ZeroSpectralRadius,

    #[error("config key `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("trial {seed}: {source}")]
    Trial {
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
