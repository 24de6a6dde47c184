use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid genome: expected {expected} bits, got {actual}")]
    InvalidGenomeLength { expected: usize, actual: usize },
    #[error("invalid genome: unexpected character {0:?}")]
    InvalidGenomeChar(char),
    #[error("parameter out of range: {0}")]
    InvalidParams(String),
    #[error("invalid unit type: {0}")]
    InvalidUnitType(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("individual {0} has not been evaluated")]
    Unevaluated(usize),
    #[error("run {run} has no generation {generation}")]
    MissingGeneration { run: u64, generation: usize },
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error("malformed artifact {path}: {reason}")]
    Artifact { path: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    TomlDe(#[from] toml::de::Error),
    #[error(transparent)]
    TomlSer(#[from] toml::ser::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
