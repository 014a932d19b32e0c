//! A total Gödel numbering of programs, built from the Cantor pairing.
//!
//! A program `[i1, ..., iL]` is numbered
//! `pair(L + 1, pair(c(i1), pair(c(i2), ... c(iL))))`, with instruction code
//! `c(i) = pair(opcode, pair(register + 1, target))` (opcode 1 = INC with
//! target 1, opcode 2 = DECJZ). The empty program is `pair(1, 1) = 1`.
//!
//! Decoding is total. Any index that does not describe a program within the
//! caps (too long, register too high, unknown opcode, jump target past the
//! end) decodes to the diverging program `DECJZ 1 1`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use dashu_int::UBig;

use super::exec::{eval_shared, EvalOutcome, Execution};
use super::program::{Instruction, Program, LENGTH_CAP, REGISTER_CAP};
use crate::encodings::{pair, pair_u64, unpair};

const OP_INC: u64 = 1;
const OP_DECJZ: u64 = 2;

/// A positive integer naming a program.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GoedelIndex(UBig);

impl GoedelIndex {
    /// Returns `None` for zero.
    pub fn new(value: UBig) -> Option<Self> {
        (!value.is_zero()).then_some(Self(value))
    }

    pub fn as_ubig(&self) -> &UBig {
        &self.0
    }

    pub fn into_ubig(self) -> UBig {
        self.0
    }
}

impl From<u64> for GoedelIndex {
    fn from(value: u64) -> Self {
        assert!(value >= 1, "Gödel indices are positive");
        Self(UBig::from(value))
    }
}

impl fmt::Display for GoedelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is not a positive integer")]
pub struct ParseIndexError(String);

impl FromStr for GoedelIndex {
    type Err = ParseIndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let value: UBig = s
            .trim()
            .parse()
            .map_err(|_| ParseIndexError(s.to_owned()))?;
        GoedelIndex::new(value).ok_or_else(|| ParseIndexError(s.to_owned()))
    }
}

/// `DECJZ 1 1`: register 1 is always zero, so this spins forever.
pub fn diverging_program() -> Program {
    Program::new(vec![Instruction::DecJz {
        register: 1,
        target: 1,
    }])
    .expect("diverging program is well formed")
}

fn instruction_code(instr: &Instruction) -> UBig {
    let (op, register, target) = match *instr {
        Instruction::Inc { register } => (OP_INC, register, 1),
        Instruction::DecJz { register, target } => (OP_DECJZ, register, target),
    };
    pair(
        &UBig::from(op),
        &pair_u64(register as u64 + 1, target as u64),
    )
}

pub fn encode_program(program: &Program) -> GoedelIndex {
    let codes: Vec<UBig> = program
        .instructions()
        .iter()
        .map(instruction_code)
        .collect();
    let body = match codes.split_last() {
        None => UBig::ONE,
        Some((last, init)) => init
            .iter()
            .rev()
            .fold(last.clone(), |acc, code| pair(code, &acc)),
    };
    GoedelIndex(pair(&UBig::from(program.len() as u64 + 1), &body))
}

fn decode_instruction(code: &UBig, len: usize) -> Option<Instruction> {
    let (op, operands) = unpair(code);
    let (register_plus_one, target) = unpair(&operands);
    let register = usize::try_from(&register_plus_one).ok()? - 1;
    if register >= REGISTER_CAP {
        return None;
    }
    if op == UBig::from(OP_INC) {
        return Some(Instruction::Inc { register });
    }
    if op != UBig::from(OP_DECJZ) {
        return None;
    }
    let target = usize::try_from(&target).ok()?;
    (target <= len + 1).then_some(Instruction::DecJz { register, target })
}

fn try_decode(index: &UBig) -> Option<Program> {
    let (len_plus_one, mut rest) = unpair(index);
    let len = usize::try_from(&len_plus_one).ok()? - 1;
    if len > LENGTH_CAP {
        return None;
    }
    let mut instructions = Vec::with_capacity(len);
    for i in 0..len {
        let code = if i + 1 == len {
            std::mem::replace(&mut rest, UBig::ONE)
        } else {
            let (code, tail) = unpair(&rest);
            rest = tail;
            code
        };
        instructions.push(decode_instruction(&code, len)?);
    }
    Program::new(instructions).ok()
}

/// Total inverse of [`encode_program`].
pub fn decode_index(index: &GoedelIndex) -> Program {
    try_decode(&index.0).unwrap_or_else(diverging_program)
}

/// Starts the program named by `index` on `input`.
pub fn gamma_start(index: &GoedelIndex, input: u64) -> Execution {
    Execution::new(Arc::new(decode_index(index)), input)
}

/// The enumeration function: runs program `index` on `input` within `budget`.
pub fn gamma(index: &GoedelIndex, input: u64, budget: u64) -> EvalOutcome {
    eval_shared(&Arc::new(decode_index(index)), input, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::parse_program;

    fn index_of(text: &str) -> GoedelIndex {
        encode_program(&parse_program(text).unwrap())
    }

    #[test]
    fn empty_program_is_one() {
        assert_eq!(index_of(""), GoedelIndex::from(1));
        assert!(decode_index(&GoedelIndex::from(1)).is_empty());
    }

    #[test]
    fn small_indices() {
        // c(INC 0) = pair(1, pair(1, 1)) = 1, so [INC 0] = pair(2, 1) = 3.
        assert_eq!(index_of("INC 0"), GoedelIndex::from(3));
        // [INC 0, INC 0] = pair(3, pair(1, 1)) = pair(3, 1) = 6.
        assert_eq!(index_of("INC 0\nINC 0"), GoedelIndex::from(6));
        // c(DECJZ 0 3) = pair(2, pair(1, 3)) = pair(2, 4) = 12,
        // c(DECJZ 1 1) = pair(2, pair(2, 1)) = pair(2, 3) = 8,
        // pair(12, 8) = 183, pair(3, 183) = 17023.
        assert_eq!(index_of("DECJZ 0 3\nDECJZ 1 1"), GoedelIndex::from(17023));
    }

    #[test]
    fn gamma_runs_decoded_program() {
        let succ = index_of("INC 0");
        assert_eq!(
            gamma(&succ, 7, 100),
            EvalOutcome::Halted { value: 8, steps: 1 }
        );
        assert_eq!(
            gamma(&GoedelIndex::from(1), 5, 10),
            EvalOutcome::Halted { value: 5, steps: 0 }
        );
        let div = encode_program(&diverging_program());
        for x in 1..20 {
            for budget in [1, 10, 1000] {
                assert_eq!(
                    gamma(&div, x, budget),
                    EvalOutcome::OutOfBudget { steps: budget }
                );
            }
        }
    }

    #[test]
    fn malformed_indices_diverge() {
        // Opcode 3: pair(2, pair(3, pair(1, 1))) = pair(2, 6) = 23.
        assert_eq!(decode_index(&GoedelIndex::from(23)), diverging_program());
        // Register over the cap.
        let code = pair(&UBig::from(OP_INC), &pair_u64(REGISTER_CAP as u64 + 1, 1));
        let index = GoedelIndex(pair(&UBig::from(2u8), &code));
        assert_eq!(decode_index(&index), diverging_program());
        // Jump target past len + 1.
        let code = pair(&UBig::from(OP_DECJZ), &pair_u64(1, 3));
        let index = GoedelIndex(pair(&UBig::from(2u8), &code));
        assert_eq!(decode_index(&index), diverging_program());
        // Length over the cap.
        let index = GoedelIndex(pair(&UBig::from(LENGTH_CAP as u64 + 2), &UBig::ONE));
        assert_eq!(decode_index(&index), diverging_program());
    }

    #[test]
    fn parse_index() {
        assert_eq!(
            "17023".parse::<GoedelIndex>().unwrap(),
            GoedelIndex::from(17023)
        );
        assert!("0".parse::<GoedelIndex>().is_err());
        assert!("-4".parse::<GoedelIndex>().is_err());
        assert!("abc".parse::<GoedelIndex>().is_err());
    }
}
