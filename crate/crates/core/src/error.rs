use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qudit dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("graph edge ({0}, {1}) is a self-loop")]
    SelfLoop(String, String),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(String, String),
    #[error("edge endpoint '{0}' is not a declared vertex")]
    UnknownEndpoint(String),
    #[error("duplicate vertex '{0}'")]
    DuplicateVertex(String),
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("unknown subsystem '{0}'")]
    UnknownSubsystem(String),
    #[error("state has {actual} amplitudes but subsystems require {expected}")]
    AmplitudeCountMismatch { expected: usize, actual: usize },
    #[error("state vector would need {required} amplitudes, above the cap of {cap}")]
    AmplitudeCapExceeded { required: u128, cap: usize },
    #[error("state norm {0} is not 1 within tolerance")]
    NotNormalized(f64),
    #[error("matrix is not unitary: worst deviation {0:.3e}")]
    NotUnitary(f64),
    #[error("interferometer has {rows} rows but the scenario declares {expected} input channels")]
    ChannelCountMismatch { rows: usize, expected: usize },
    #[error("detection pattern has {len} clicks, expected {photons}")]
    PatternSizeMismatch { len: usize, photons: usize },
    #[error("mode index {index} out of range 1..={modes}")]
    ModeOutOfRange { index: usize, modes: usize },
    #[error("row index {index} out of range for a {rows}-row interferometer")]
    RowOutOfRange { index: usize, rows: usize },
    #[error("bipartition leaves one side empty")]
    EmptyCut,
    #[error("bipartition does not cover subsystem '{0}'")]
    CutNotCovering(String),
    #[error("expansion size cap exceeded: {photons} photons over {modes} modes")]
    ExpansionCapExceeded { photons: usize, modes: usize },
    #[error("outcome has zero probability; no heralded state")]
    ZeroProbabilityOutcome,
    #[error("collision factorization needs a two-photon collision pattern, got {0}")]
    NotACollisionPattern(String),
    #[error("operation needs a collision-free two-photon pattern, got {0}")]
    NotARelevantPattern(String),
    #[error("dimension mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{0}")]
    InvalidScenario(String),
    #[error("rank bound violated during optimization: {0}")]
    TheoremViolation(String),
    #[error("invalid objective: {0}")]
    InvalidObjective(String),
}
