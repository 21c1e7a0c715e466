use thiserror::Error;

/// Errors raised by signal construction, synthesis and analysis.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation was handed values that violate its domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A requested frequency cannot be represented at the given sampling rate.
    #[error("{f_hz} Hz cannot be generated at {fs} Sa/s (aliasing)")]
    Aliasing { f_hz: f64, fs: f64 },

    /// Phase estimation was attempted on an all-zero signal.
    #[error("phase is undefined for an all-zero signal")]
    UndefinedPhase,

    /// The carrier template is unusable (zero energy in a projection window).
    #[error("degenerate carrier template: {0}")]
    DegenerateTemplate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// A waveform or manifest file does not match the expected layout.
    #[error("malformed file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
