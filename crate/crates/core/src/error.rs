use thiserror::Error;

use crate::lattice::{CurveClass, DivisorClass};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("reflection index {0} out of range 0..=7")]
    IndexOutOfRange(usize),

    #[error("malformed Cremona index set {0:?}: need four distinct indices in 1..=8")]
    MalformedIndexSet(Vec<usize>),

    #[error("no standard form reached after {steps} Cremona steps")]
    StepLimitExceeded { steps: usize },

    #[error("class is not integral: {0}")]
    NotIntegral(Box<DivisorClass>),

    #[error("curve class {class} violates {which}")]
    HypothesisViolated { class: Box<CurveClass>, which: String },

    #[error("{class} is not nef: intersection with {witness} is negative")]
    NotNef {
        class: Box<DivisorClass>,
        witness: Box<CurveClass>,
    },

    #[error("{class} is not effective: {reason}")]
    NotEffective { class: Box<DivisorClass>, reason: String },

    #[error("{class} is not movable: {reason}")]
    NotMovable { class: Box<DivisorClass>, reason: String },

    #[error("oracle instance too large: {0}")]
    ScaleExceeded(String),

    #[error("malformed cone problem: {0}")]
    MalformedProblem(String),

    #[error("certificate check failed: {0}")]
    InvalidCertificate(String),
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}
