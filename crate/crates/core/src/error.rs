use std::path::PathBuf;

/// Errors raised anywhere in the feature, clustering and validation pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("series `{label}` has length {got}, need at least {need}")]
    InvalidLength {
        label: String,
        need: usize,
        got: usize,
    },

    #[error("series `{0}` contains a non-finite value")]
    NonFinite(String),

    #[error("series `{0}` starts at zero and cannot be scaled by its initial value")]
    DegenerateScale(String),

    #[error("lag {lag} is out of range for a series of length {len}")]
    InvalidLag { lag: usize, len: usize },

    #[error("series `{0}` has zero variance")]
    DegenerateVariance(String),

    #[error("series `{0}` has an identically zero spectrum")]
    DegenerateSpectrum(String),

    #[error("weight `{kind}` has order {kind_order} but {got} frequencies were supplied")]
    WeightArity {
        kind: String,
        kind_order: usize,
        got: usize,
    },

    #[error("brute-force oracle refuses T = {0} (limit 256)")]
    OracleSize(usize),

    #[error("unstable model: {0}")]
    UnstableModel(String),

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("invalid number of clusters k = {k} for {n} observations")]
    InvalidK { k: usize, n: usize },

    #[error("invalid dissimilarity matrix: {0}")]
    InvalidDissimilarity(String),

    #[error("feature column `{0}` is constant and cannot be standardized")]
    ConstantFeature(String),

    #[error("invalid sample size {m} for {n} observations")]
    InvalidSampleSize { m: usize, n: usize },

    #[error("two cluster centroids coincide; Davies-Bouldin index is undefined")]
    DegenerateCentroids,

    #[error("input mismatch: {0}")]
    InputMismatch(String),

    #[error("AUC is undefined: {0}")]
    UndefinedAuc(String),

    #[error("{}: schema error: {msg}", file.display())]
    Schema { file: PathBuf, msg: String },

    #[error("{}: row {row}: {msg}", file.display())]
    Parse {
        file: PathBuf,
        row: usize,
        msg: String,
    },

    #[error("{}: duplicate date {date}", file.display())]
    DuplicateDate { file: PathBuf, date: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("series `{label}`: {source}")]
    Row {
        label: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
