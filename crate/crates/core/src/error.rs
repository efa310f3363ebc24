use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expansion too weak: minimal slope {lambda_min} <= required {required}")]
    ExpansionTooWeak { lambda_min: f64, required: f64 },
    #[error("degenerate arc: c_minus = {0} must lie in (0, 1)")]
    DegenerateArc(f64),
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("point {0} is a discontinuity of the map")]
    AtDiscontinuity(f64),
    #[error("model lies on a stratum (cusp point {which} within tolerance of a discontinuity)")]
    OnStratum { which: usize },
    #[error("cannot shift an empty word")]
    EmptyWord,
    #[error("could not parse word: {0}")]
    BadWord(String),
    #[error("empty cylinder at depth {depth}")]
    EmptyCylinder { depth: usize },
    #[error("kneading data differ at index {index}")]
    KneadingMismatch { index: usize },
    #[error("no fixed points: model is not in O++")]
    NoFixedPoints,
    #[error("lambda {0} is below the golden ratio")]
    LambdaBelowPhi(f64),
    #[error("arc budget exceeded ({0} arcs)")]
    ArcBudgetExceeded(usize),
    #[error("no trapping interval: model is neither up nor down Lorenz")]
    NoTrappingInterval,
    #[error("not Markov: crossing {piece} fails with margin {margin}")]
    NotMarkov { piece: &'static str, margin: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cone bound violated: {bound} >= 1")]
    ConeBoundViolated { bound: f64 },
    #[error("point x = {0} lies on a discontinuity fiber")]
    OnDiscontinuity(f64),
    #[error("tracking lost at loop parameter {at} (jump {jump})")]
    TrackingLost { at: f64, jump: f64 },
    #[error("kneading shooting failed: {0}")]
    ShootingFailed(String),
    #[error("missing palette entry for label `{0}`")]
    MissingPaletteEntry(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("validation error in field `{0}`")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Validation(_) => 2,
            Error::ArcBudgetExceeded(_) => 4,
            Error::Io(_) => 1,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
