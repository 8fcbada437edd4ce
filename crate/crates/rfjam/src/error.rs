//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("degenerate ray geometry: dist = {dist} m")]
    DegenerateGeometry { dist: f64 },
    #[error("angle-of-departure cosine out of range: {aod_cos}")]
    InvalidAodCos { aod_cos: f64 },
    #[error("tap/symbol length mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
}

#[derive(Debug, Error)]
pub enum EstimatorError {
    #[error("underdetermined system: K = {k} pilots for {n} taps (need K > 2N)")]
    Underdetermined { k: usize, n: usize },
    #[error("singular design matrix (pivot {pivot:.3e})")]
    IllConditioned { pivot: f64 },
    #[error("need at least 2 block estimates, got {got}")]
    TooFewBlocks { got: usize },
    #[error("invalid block interval: {dt_block} s")]
    InvalidBlockInterval { dt_block: f64 },
}

#[derive(Debug, Error)]
pub enum VrsError {
    #[error("need at least 2 observations, got {got}")]
    TooShort { got: usize },
    #[error("delta_u and own speed sequences differ in length: {delta_u} vs {own_speed}")]
    LengthMismatch { delta_u: usize, own_speed: usize },
    #[error("epsilon must be positive, got {epsilon}")]
    InvalidEpsilon { epsilon: f64 },
}

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("empty delivery window")]
    EmptyWindow,
    #[error("noise power must be positive, got {noise_mw}")]
    InvalidNoise { noise_mw: f64 },
}

#[derive(Debug, Error)]
pub enum MlError {
    #[error("empty training set")]
    EmptyTrain,
    #[error("class {class} missing from the training data")]
    EmptyClass { class: String },
    #[error("invalid k = {k} for training set of {n}")]
    InvalidK { k: usize, n: usize },
    #[error("prediction/truth length mismatch: {predictions} vs {truths}")]
    LengthMismatch { predictions: usize, truths: usize },
    #[error("feature width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("no records to write")]
    NoRecords,
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed row {line} in {path}: {reason}")]
    Malformed {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("unknown experiment case: {name}")]
    UnknownCase { name: String },
    #[error(transparent)]
    Ml(#[from] MlError),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown config key: {key}")]
    UnknownKey { key: String },
    #[error("invalid value for {key}: {value}")]
    InvalidValue { key: String, value: String },
    #[error("missing required key: {key}")]
    MissingKey { key: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
