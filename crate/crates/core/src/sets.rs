//! Decidable sets of positive integers, given as membership predicates.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use dashu_int::ops::BitTest;
use dashu_int::UBig;
use thiserror::Error;

use crate::encodings::{phi, square_split};
use crate::machine::{eval_shared, EvalOutcome, Program};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PredicateError {
    #[error("membership program did not halt on {x} within {budget} steps")]
    Overrun { x: String, budget: u64 },
    #[error("membership program answered {value} on {x}; expected 1 (member) or 2 (non-member)")]
    BadAnswer { x: String, value: u64 },
    #[error("membership program cannot take {x} as input")]
    Overflow { x: String },
}

/// A total membership test.
pub trait Predicate: Sync {
    fn test(&self, x: &UBig) -> Result<bool, PredicateError>;
}

impl<F> Predicate for F
where
    F: Fn(&UBig) -> bool + Sync,
{
    fn test(&self, x: &UBig) -> Result<bool, PredicateError> {
        Ok(self(x))
    }
}

/// The built-in set registry, plus sets decided by a counter machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetSpec {
    All,
    Empty,
    Squares,
    NonSquares,
    Odds,
    Evens,
    /// `phi^-1(n)`.
    PhiFiber(u64),
    /// Decided by `program`: output 1 means member, 2 means non-member.
    /// Running past `budget` is an error, never a guess.
    Program {
        program: Arc<Program>,
        budget: u64,
    },
}

impl Predicate for SetSpec {
    fn test(&self, x: &UBig) -> Result<bool, PredicateError> {
        Ok(match self {
            SetSpec::All => true,
            SetSpec::Empty => false,
            SetSpec::Squares => square_split(x).is_some(),
            SetSpec::NonSquares => square_split(x).is_none(),
            SetSpec::Odds => x.bit(0),
            SetSpec::Evens => !x.bit(0),
            SetSpec::PhiFiber(n) => phi(x) == *n,
            SetSpec::Program { program, budget } => {
                let input =
                    u64::try_from(x).map_err(|_| PredicateError::Overflow { x: x.to_string() })?;
                return match eval_shared(program, input, *budget) {
                    EvalOutcome::Halted { value: 1, .. } => Ok(true),
                    EvalOutcome::Halted { value: 2, .. } => Ok(false),
                    EvalOutcome::Halted { value, .. } => Err(PredicateError::BadAnswer {
                        x: x.to_string(),
                        value,
                    }),
                    EvalOutcome::OutOfBudget { .. } => Err(PredicateError::Overrun {
                        x: x.to_string(),
                        budget: *budget,
                    }),
                    EvalOutcome::Overflow { .. } => {
                        Err(PredicateError::Overflow { x: x.to_string() })
                    }
                };
            }
        })
    }
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::All => f.write_str("all"),
            SetSpec::Empty => f.write_str("empty"),
            SetSpec::Squares => f.write_str("squares"),
            SetSpec::NonSquares => f.write_str("nonsquares"),
            SetSpec::Odds => f.write_str("odds"),
            SetSpec::Evens => f.write_str("evens"),
            SetSpec::PhiFiber(n) => write!(f, "phi-fiber:{n}"),
            SetSpec::Program { budget, .. } => write!(f, "program(budget={budget})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error(
    "unknown set `{0}` (expected all, empty, squares, nonsquares, odds, evens or phi-fiber:<n>)"
)]
pub struct UnknownSet(pub String);

/// Parses registry names. Program-decided sets need a file and a budget and
/// are built by the caller.
impl FromStr for SetSpec {
    type Err = UnknownSet;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "all" => SetSpec::All,
            "empty" => SetSpec::Empty,
            "squares" => SetSpec::Squares,
            "nonsquares" => SetSpec::NonSquares,
            "odds" => SetSpec::Odds,
            "evens" => SetSpec::Evens,
            _ => {
                let n = s
                    .strip_prefix("phi-fiber:")
                    .and_then(|n| n.parse::<u64>().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| UnknownSet(s.to_owned()))?;
                SetSpec::PhiFiber(n)
            }
        })
    }
}
