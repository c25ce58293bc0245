use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PsletError {
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no harmonic well around q0 = {q0}: {reason}")]
    NonBinding { q0: f64, reason: &'static str },
    #[error("no admissible root of the expansion-point equation: {0}")]
    NoRoot(String),
    #[error("harmonic frequency w = {w} is too small for the hierarchy")]
    DegenerateFrequency { w: f64 },
    #[error("hierarchy solved to order {have}, energy order needs {need}")]
    InsufficientOrder { have: usize, need: usize },
    #[error("Padé linear system is singular (condition estimate {condition:e})")]
    SingularSystem { condition: f64 },
    #[error("Padé denominator vanishes at 1/lbar = {at}")]
    PoleAtEvaluation { at: f64 },
    #[error("no eigenvalue with {nodes} nodes in [{lo}, {hi}]")]
    NoEigenvalueInBracket { lo: f64, hi: f64, nodes: usize },
    #[error("grid too coarse: step halving moved E from {coarse} to {fine}")]
    GridTooCoarse { coarse: f64, fine: f64 },
}

impl PsletError {
    /// Stable machine-readable code used in CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            Self::InvalidPotential(_) => "INVALID_POTENTIAL",
            Self::InvalidArgument(_) => "INVALID_ARGUMENT",
            Self::NonBinding { .. } => "NON_BINDING",
            Self::NoRoot(_) => "NO_ROOT",
            Self::DegenerateFrequency { .. } => "DEGENERATE_FREQUENCY",
            Self::InsufficientOrder { .. } => "INSUFFICIENT_ORDER",
            Self::SingularSystem { .. } => "SINGULAR_PADE",
            Self::PoleAtEvaluation { .. } => "PADE_POLE",
            Self::NoEigenvalueInBracket { .. } => "NO_EIGENVALUE_IN_BRACKET",
            Self::GridTooCoarse { .. } => "GRID_TOO_COARSE",
        }
    }

    pub fn is_configuration_error(&self) -> bool {
        matches!(self, Self::InvalidPotential(_) | Self::InvalidArgument(_))
    }
}

pub type Result<T, E = PsletError> = std::result::Result<T, E>;
