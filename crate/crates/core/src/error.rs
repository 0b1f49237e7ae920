use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("the zero vector does not define a direction")]
    ZeroDirection,
    #[error("angle {0} is outside [0, pi]")]
    AngleOutOfRange(f64),
    #[error("invalid polygon size n = {0}, need n >= 2")]
    InvalidN(usize),
    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("trajectory passes within epsilon of a vertex at crossing {crossing} (side {side})")]
    VertexHit { crossing: usize, side: usize },
    #[error("start point is not strictly inside the polygon")]
    StartOutside,
    #[error("exact mode unavailable: {0}")]
    ExactUnavailable(String),
    #[error("word is not admissible in any transition diagram")]
    Inadmissible,
    #[error("word is admissible in several diagrams {0:?}")]
    Ambiguous(Vec<usize>),
    #[error("invalid expansion prefix: {0}")]
    InvalidPrefix(String),
    #[error("interpolation synthesis failed: {0}")]
    SynthesisFailure(String),
    #[error("input word is not admissible in diagram {0}")]
    InadmissibleInput(usize),
    #[error("word is not coherent")]
    NotCoherent,
    #[error("window exhausted after {depth_reached} renormalization steps")]
    InsufficientWindow { depth_reached: usize },
    #[error("ambiguous diagram at step {step}: candidates {candidates:?}")]
    AmbiguousDiagram { step: usize, candidates: Vec<usize> },
    #[error("words over different alphabets ({0} vs {1} letters)")]
    AlphabetMismatch(usize, usize),
    #[error("trace log is empty")]
    EmptyLog,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
