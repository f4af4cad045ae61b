//! Error types for the reduction and verification layers.

use std::fmt;

/// Errors from exact arithmetic and partial fractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactError {
    /// Numerator degree is at least the total pole multiplicity.
    DegreeTooLarge { deg_f: usize, total_mult: u32 },
    /// Two poles share the same shift.
    DuplicatePole { shift: i64 },
    /// Harmonic number of a negative argument.
    NegativeArgument { n: i64 },
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::DegreeTooLarge { deg_f, total_mult } => write!(
                f,
                "numerator degree {} must be below total pole multiplicity {}",
                deg_f, total_mult
            ),
            ExactError::DuplicatePole { shift } => {
                write!(f, "duplicate pole shift {}", shift)
            }
            ExactError::NegativeArgument { n } => {
                write!(f, "harmonic number needs n >= 0, got {}", n)
            }
        }
    }
}

impl std::error::Error for ExactError {}

/// Errors from shifted-series and chain-series reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesError {
    /// Residue coefficients do not sum to zero.
    NonzeroResidueSum,
    /// A telescoped-sum shift is negative.
    NegativeShift { shift: i64 },
    /// The series fails its convergence test.
    Divergent,
    /// An elementary step lost integrability; indicates a convergence-test bug.
    InternalDivergence(&'static str),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::NonzeroResidueSum => write!(f, "residue coefficients must sum to zero"),
            SeriesError::NegativeShift { shift } => {
                write!(f, "telescoped sum needs shifts >= 0, got {}", shift)
            }
            SeriesError::Divergent => write!(f, "series is divergent"),
            SeriesError::InternalDivergence(what) => {
                write!(f, "internal divergence during {}", what)
            }
        }
    }
}

impl std::error::Error for SeriesError {}

/// Errors from word-integral reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordError {
    /// The word integral diverges.
    Divergent,
    /// A rewriting step produced an unintegrable piece that did not cancel.
    InternalDivergence(&'static str),
}

impl fmt::Display for WordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordError::Divergent => write!(f, "word integral is divergent"),
            WordError::InternalDivergence(what) => {
                write!(f, "internal divergence during {}", what)
            }
        }
    }
}

impl std::error::Error for WordError {}

/// Errors from big zeta reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BigZetaError {
    /// The defining multiple series diverges.
    Divergent,
    /// No identical rows to collapse (no-op signal).
    NoIdenticalRows,
    /// The rewriting engine ran out of applicable moves or fuel.
    NonTerminating(String),
    /// A matrix failed quasi-basic validation.
    NotQuasiBasic,
    /// Propagated series error.
    Series(SeriesError),
}

impl fmt::Display for BigZetaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BigZetaError::Divergent => write!(f, "big zeta series is divergent"),
            BigZetaError::NoIdenticalRows => write!(f, "no identical rows to collapse"),
            BigZetaError::NonTerminating(what) => {
                write!(f, "big zeta rewriting did not terminate: {}", what)
            }
            BigZetaError::NotQuasiBasic => write!(f, "matrix is not quasi-basic"),
            BigZetaError::Series(e) => write!(f, "series reduction failed: {}", e),
        }
    }
}

impl std::error::Error for BigZetaError {}

impl From<SeriesError> for BigZetaError {
    fn from(e: SeriesError) -> Self {
        BigZetaError::Series(e)
    }
}

/// Errors from Brown/Selberg reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BrownError {
    /// The iterated integral diverges.
    Divergent,
    /// A change-of-variables precondition failed.
    PositiveExponent { which: String },
    /// A polylog factor is outside the supported classes.
    UnsupportedFactor(String),
    /// The two reduction routes disagreed.
    RouteMismatch(String),
    Series(SeriesError),
    Word(WordError),
    BigZeta(Box<BigZetaError>),
}

impl fmt::Display for BrownError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BrownError::Divergent => write!(f, "iterated integral is divergent"),
            BrownError::PositiveExponent { which } => {
                write!(f, "change of variables needs nonpositive exponents: {}", which)
            }
            BrownError::UnsupportedFactor(what) => write!(f, "unsupported factor: {}", what),
            BrownError::RouteMismatch(what) => write!(f, "reduction routes disagree: {}", what),
            BrownError::Series(e) => write!(f, "{}", e),
            BrownError::Word(e) => write!(f, "{}", e),
            BrownError::BigZeta(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for BrownError {}

impl From<SeriesError> for BrownError {
    fn from(e: SeriesError) -> Self {
        BrownError::Series(e)
    }
}

impl From<WordError> for BrownError {
    fn from(e: WordError) -> Self {
        BrownError::Word(e)
    }
}

impl From<BigZetaError> for BrownError {
    fn from(e: BigZetaError) -> Self {
        BrownError::BigZeta(Box::new(e))
    }
}

/// Errors from the numeric verification layer.
#[derive(Clone, Debug, PartialEq)]
pub enum NumericError {
    /// Requested precision cannot be certified.
    PrecisionUnreachable { digits: u32 },
    /// The target series/integral diverges.
    Divergent,
    /// Adaptive quadrature exhausted its subdivision budget.
    ToleranceUnreached { achieved: f64, requested: f64 },
    /// Index outside evaluator limits (weight <= 10, depth <= 4).
    OutOfRange(String),
}

impl fmt::Display for NumericError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericError::PrecisionUnreachable { digits } => {
                write!(f, "cannot certify {} digits", digits)
            }
            NumericError::Divergent => write!(f, "target is divergent"),
            NumericError::ToleranceUnreached { achieved, requested } => {
                write!(f, "quadrature reached {:e}, requested {:e}", achieved, requested)
            }
            NumericError::OutOfRange(what) => write!(f, "out of evaluator range: {}", what),
        }
    }
}

impl std::error::Error for NumericError {}
