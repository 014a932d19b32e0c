//! Shared inputs for the criterion benches.

use halting_lab::machine::{encode_program, parse_program};
use halting_lab::{GoedelIndex, Program};

/// `r0 <- 2 * r0` via register 1, then back; runs in time linear in the input.
pub const DOUBLER: &str = "\
DECJZ 0 5
INC 1
INC 1
DECJZ 2 1
DECJZ 1 8
INC 0
DECJZ 2 5
";

pub fn doubler() -> Program {
    parse_program(DOUBLER).expect("fixture parses")
}

/// A straight-line program of `len` increments, for numbering costs by length.
pub fn increments(len: usize) -> Program {
    parse_program(&"INC 0\n".repeat(len)).expect("fixture parses")
}

pub fn index_of(program: &Program) -> GoedelIndex {
    encode_program(program)
}
