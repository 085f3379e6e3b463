use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed bitstring: {0}")]
    Bitstring(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("invalid document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({u}, {v}) references a node outside 0..{n}")]
    EdgeOutOfRange { u: usize, v: usize, n: usize },
    #[error("expected {expected} identifiers, got {got}")]
    IdCountMismatch { expected: usize, got: usize },
    #[error("identifiers must be distinct")]
    DuplicateIds,
    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),
    #[error("no single edge flip breaks the isomorphism of the base graph")]
    PerturbationImpossible,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("no certificate for node {0}")]
    MissingCertificate(u64),
    #[error("certificate given for unknown node {0}")]
    UnknownNode(u64),
    #[error("certificate of node {id} has {len} bits, above the engine limit of {limit}")]
    OverlongCertificate { id: u64, len: usize, limit: usize },
    #[error("not a yes-instance: {0}")]
    NotMember(String),
    #[error("prover failed: {0}")]
    Prover(String),
    #[error("views come from different models")]
    ModelMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FalsifierError {
    #[error("search needs {required} assignments, above the cap of {cap}")]
    CapExceeded { required: u128, cap: u128 },
    #[error("instance is a yes-instance; soundness search needs a no-instance")]
    YesInstance,
    #[error("instance is not a path")]
    NotAPath,
    #[error("certificates are not globally accepted on the input path")]
    NotAccepting,
    #[error("attack requires model {0}")]
    WrongModel(String),
    #[error("chunk pool is empty")]
    EmptyPool,
    #[error("chunk identifiers overlap across the pool")]
    OverlappingIds,
    #[error("chunk has {got} nodes, expected {expected}")]
    ChunkLength { expected: usize, got: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("unknown scheme {0:?}")]
    Unknown(String),
    #[error("bad parameter for scheme {scheme}: {message}")]
    BadParameter { scheme: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RandomizedError {
    #[error("acceptance probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("trials must be at least 1")]
    NoTrials,
}
