use thiserror::Error;

/// Errors produced by the models in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of an operation.
    #[error("{0}")]
    Domain(String),
    /// A configuration is internally inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Peak detection was asked to search a spectrum with no energy.
    #[error("no spectral peak: input has no energy")]
    NoPeak,
    /// A request falls outside the tabulated reference data.
    #[error("outside reference data: {0}")]
    OutsideData(String),
    /// The device library has no power calibration for the requested design.
    #[error("library `{library}` has no power calibration for the {design} design")]
    MissingCalibration { library: String, design: String },
}

impl Error {
    /// Stable machine-readable code, used by the CLI's `ERROR:<code>:` prefix.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Config(_) => "config",
            Error::NoPeak => "no-peak",
            Error::OutsideData(_) => "outside-data",
            Error::MissingCalibration { .. } => "calibration",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain_err {
    ($($arg:tt)*) => {
        $crate::Error::Domain(format!($($arg)*))
    };
}
pub(crate) use domain_err;
