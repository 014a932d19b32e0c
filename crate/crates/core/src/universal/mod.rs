//! Universal functions built on the machine numbering.
//!
//! The base function is `V(z) = gamma(e, x)` where `z = interleave(e, x)`;
//! off the image of `interleave`, `V` diverges. The other constructions are
//! thin wrappers around `V`:
//!
//! * square embedding: `U(x) = V(y)` if `x = y^2`, else `1`;
//! * `phi` pullback: `U(x) = V(phi(x))`;
//! * mixed: `U(x) = V(y)` if `x = y^2`, else `F(x)` for a supplied `F`.
//!
//! Bookkeeping (square roots, `phi`, deinterleaving) costs no budget; only
//! simulated machine steps count.

mod compiler;
mod dovetail;
mod reduction;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use dashu_int::UBig;

use crate::encodings::{deinterleave, phi, square_split};
use crate::machine::{gamma_start, EvalOutcome, Execution, GoedelIndex, Program};

pub use compiler::{
    compile_cu, probe_programmable, CompileOutcome, CompilerConstants, CuCompiler, ProbeEntry,
    ProbeReport, ProbeResult,
};
pub use dovetail::{enumerate_domain, DomainEnumeration, DomainEnumerator, Emission};
pub use reduction::{theta, theta_enumerated, CeSetSpec, Enumeration, ReductionError};

/// How an evaluation begins, before any budget is spent.
#[derive(Debug, Clone)]
pub enum Start {
    /// Halts without executing an instruction.
    Halted {
        value: u64,
    },
    /// Diverges by construction.
    Diverges,
    /// The argument does not fit the machine word.
    Overflow,
    Running(Execution),
}

impl Start {
    pub fn finish(self, budget: u64) -> EvalOutcome {
        match self {
            Start::Halted { value } => EvalOutcome::Halted { value, steps: 0 },
            Start::Diverges => EvalOutcome::OutOfBudget { steps: budget },
            Start::Overflow => EvalOutcome::Overflow { steps: 0 },
            Start::Running(execution) => execution.finish(budget),
        }
    }
}

/// A partially computable unary function evaluated under a step budget.
pub trait Evaluator: Sync {
    fn start(&self, x: &UBig) -> Start;

    fn eval(&self, x: &UBig, budget: u64) -> EvalOutcome {
        self.start(x).finish(budget)
    }

    fn eval_u64(&self, x: u64, budget: u64) -> EvalOutcome {
        self.eval(&UBig::from(x), budget)
    }
}

fn machine_start(program: Arc<Program>, x: &UBig) -> Start {
    match u64::try_from(x) {
        Ok(input) => Start::Running(Execution::new(program, input)),
        Err(_) => Start::Overflow,
    }
}

fn v_start(z: &UBig) -> Start {
    let Some((index, argument)) = deinterleave(z) else {
        return Start::Diverges;
    };
    let index = GoedelIndex::new(index).expect("deinterleave yields positive components");
    match u64::try_from(&argument) {
        Ok(input) => Start::Running(gamma_start(&index, input)),
        Err(_) => Start::Overflow,
    }
}

fn square_start(x: &UBig, otherwise: impl FnOnce() -> Start) -> Start {
    match square_split(x) {
        Some(root) => v_start(&root),
        None => otherwise(),
    }
}

/// The base universal function `V`.
pub fn v_eval(z: &UBig, budget: u64) -> EvalOutcome {
    v_start(z).finish(budget)
}

/// Square embedding: `V(y)` on `y^2`, the constant 1 elsewhere.
pub fn u_sq_eval(x: &UBig, budget: u64) -> EvalOutcome {
    square_start(x, || Start::Halted { value: 1 }).finish(budget)
}

/// `phi` pullback: `V(phi(x))`.
pub fn u_phi_eval(x: &UBig, budget: u64) -> EvalOutcome {
    v_start(&UBig::from(phi(x))).finish(budget)
}

/// Mixed combinator: `V(y)` on `y^2`, `F(x)` elsewhere.
pub fn u_mix_eval(x: &UBig, f: &Program, budget: u64) -> EvalOutcome {
    square_start(x, || machine_start(Arc::new(f.clone()), x)).finish(budget)
}

/// The named universal functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniversalSpec {
    BaseV,
    SquareEmbed,
    PhiPullback,
    /// Square embedding with `F` answering off the squares.
    Mixed(Arc<Program>),
}

impl UniversalSpec {
    pub fn mixed(f: Program) -> Self {
        UniversalSpec::Mixed(Arc::new(f))
    }

    pub fn name(&self) -> &'static str {
        match self {
            UniversalSpec::BaseV => "base_v",
            UniversalSpec::SquareEmbed => "square_embed",
            UniversalSpec::PhiPullback => "phi_pullback",
            UniversalSpec::Mixed(_) => "mixed",
        }
    }
}

impl Evaluator for UniversalSpec {
    fn start(&self, x: &UBig) -> Start {
        match self {
            UniversalSpec::BaseV => v_start(x),
            UniversalSpec::SquareEmbed => square_start(x, || Start::Halted { value: 1 }),
            UniversalSpec::PhiPullback => v_start(&UBig::from(phi(x))),
            UniversalSpec::Mixed(f) => square_start(x, || machine_start(Arc::clone(f), x)),
        }
    }
}

impl fmt::Display for UniversalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown universal function `{0}` (expected base_v, square_embed or phi_pullback)")]
pub struct UnknownUniversal(pub String);

/// Parses the program-free names; `mixed:<file>` needs a loader and is
/// handled by the caller.
impl FromStr for UniversalSpec {
    type Err = UnknownUniversal;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "base_v" => Ok(UniversalSpec::BaseV),
            "square_embed" => Ok(UniversalSpec::SquareEmbed),
            "phi_pullback" => Ok(UniversalSpec::PhiPullback),
            other => Err(UnknownUniversal(other.to_owned())),
        }
    }
}
