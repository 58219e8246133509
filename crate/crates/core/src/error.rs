use std::path::PathBuf;

use crate::lattice::Basis;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("lattice size {0} must be a power of two and at least 8")]
    InvalidLatticeSize(usize),

    #[error("{what} = {value} is out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: String,
        range: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("expected an operand in the {expected} basis, got {found}")]
    WrongBasis { expected: Basis, found: Basis },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("invalid damping kernel: {0}")]
    InvalidKernel(String),

    #[error("damping kernel is not positive semidefinite (minimum eigenvalue {0:e})")]
    KernelNotPsd(f64),

    #[error("dense oracle is limited to n_sites <= {max}, got {found}")]
    OracleTooLarge { max: usize, found: usize },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("scenario cannot be grid-doubled: {0}")]
    NotDoublable(String),

    #[error("no records to write")]
    EmptyRecords,

    #[error("failed to parse scenario {}: {message}", path.display())]
    Parse { path: PathBuf, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn out_of_range(
        what: &'static str,
        value: impl ToString,
        range: impl ToString,
    ) -> Self {
        Error::OutOfRange {
            what,
            value: value.to_string(),
            range: range.to_string(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
