use thiserror::Error;

use crate::exact::{AlgebraicTag, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty interval: lower bound {lower} is not below upper bound {upper}")]
    EmptyInterval { lower: Rational, upper: Rational },

    #[error("a partition needs at least two breakpoints, got {0}")]
    TooFewBreakpoints(usize),

    #[error("breakpoints must be strictly increasing (breakpoint {index} is {value})")]
    NotStrictlyIncreasing { index: usize, value: Rational },

    #[error("number of subintervals must be positive")]
    ZeroSubintervals,

    #[error("partitions cover different intervals: [{0}, {1}] vs [{2}, {3}]")]
    MismatchedBase(Rational, Rational, Rational, Rational),

    #[error("expected {expected} tags, got {got}")]
    TagCount { expected: usize, got: usize },

    #[error("tag {tag} does not lie in subinterval {index}")]
    TagOutsideInterval { index: usize, tag: AlgebraicTag },

    #[error("point {0} lies outside [0, 1]")]
    OutsideUnitInterval(AlgebraicTag),

    #[error("denominator {0} is too large to rank")]
    DenominatorTooLarge(String),

    #[error("cannot evaluate {oracle} exactly at {tag}")]
    InexactEvaluation { oracle: String, tag: AlgebraicTag },

    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(Rational),

    #[error("family member {index} has diameter {diameter}, not below delta {delta}")]
    MeshTooCoarse {
        index: usize,
        diameter: Rational,
        delta: Rational,
    },

    #[error("direct sum norm {direct} disagrees with closed form {closed_form}")]
    OracleMismatch {
        direct: Rational,
        closed_form: Rational,
    },

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("radius list must be nonempty and contain only positive values")]
    InvalidRadii,
}

pub type Result<T> = std::result::Result<T, Error>;
