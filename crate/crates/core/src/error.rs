use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The superposition (nearly) vanishes, so it cannot be normalized.
    #[error("degenerate state: squared norm {norm_sq:e} is too small to normalize")]
    DegenerateState { norm_sq: f64 },

    #[error("truncated Fock computation did not converge: {0}")]
    Unconverged(String),

    #[error("anti-normal to normal ordering conversion is inconsistent (residual {residual:e})")]
    ConversionInconsistent { residual: f64 },

    #[error("mean photon number vanishes")]
    ZeroMeanPhoton,

    #[error("squeezing order must be even and positive, got {0}")]
    OddOrder(u32),

    #[error("moment table only covers order {have}, need {need}")]
    TableTooSmall { have: u32, need: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short code written to the `error` column of sweep output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DegenerateState { .. } => "DegenerateState",
            Error::Unconverged(_) => "Unconverged",
            Error::ConversionInconsistent { .. } => "ConversionInconsistent",
            Error::ZeroMeanPhoton => "ZeroMeanPhoton",
            Error::OddOrder(_) => "OddOrder",
            Error::TableTooSmall { .. } => "TableTooSmall",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Config(_) => "Config",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
