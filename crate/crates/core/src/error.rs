use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure category. The CLI maps each class to a fixed exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Ingestion,
    Parameter,
    Guard,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("point set is empty")]
    EmptyPointSet,

    #[error("point {index} has a non-finite coordinate")]
    NonFinitePoint { index: usize },

    #[error("k = {k} is outside 1..={n}")]
    InvalidK { k: usize, n: usize },

    #[error("id {id} out of range for {n} points")]
    IdOutOfRange { id: usize, n: usize },

    #[error("matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("invalid distance {value} at ({i}, {j})")]
    InvalidDistance { i: usize, j: usize, value: f64 },

    #[error("nonzero diagonal entry at {i}")]
    NonzeroDiagonal { i: usize },

    #[error("symmetry violated: d({i},{j}) = {dij} but d({j},{i}) = {dji}")]
    Asymmetric { i: usize, j: usize, dij: f64, dji: f64 },

    #[error("triangle inequality violated: d({i},{j}) = {dij} > d({i},{via}) + d({via},{j}) = {bound}")]
    TriangleViolation { i: usize, j: usize, via: usize, dij: f64, bound: f64 },

    #[error("neighbor rank m = {m} is outside 1..={n}")]
    RankOutOfRange { m: usize, n: usize },

    #[error("neighborhood profile was computed for (n={profile_n}, k={profile_k}), instance is (n={n}, k={k})")]
    ProfileMismatch { profile_n: usize, profile_k: usize, n: usize, k: usize },

    #[error("fairness parameter {0} is outside [1, 2]")]
    AlphaOutOfRange(f64),

    #[error("facility set is empty")]
    NoFacilities,

    #[error("{0} requires a Euclidean point metric")]
    NotEuclidean(&'static str),

    #[error("{what} supports at most {limit} points, got {n}")]
    GuardExceeded { what: &'static str, limit: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("column `{0}` not found in input")]
    MissingColumn(String),

    #[error("longitude {lon} is more than 6 degrees from the central meridian of zone {zone}")]
    OutOfZone { lon: f64, zone: u8 },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io { .. } | Error::Csv(_) | Error::MissingColumn(_) | Error::OutOfZone { .. } => {
                ErrorClass::Ingestion
            }
            Error::GuardExceeded { .. } => ErrorClass::Guard,
            _ => ErrorClass::Parameter,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
