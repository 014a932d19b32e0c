//! Two-instruction counter machines: text format, step-bounded interpreter
//! and a total Gödel numbering.

mod exec;
mod numbering;
mod program;

pub use exec::{eval, eval_shared, EvalOutcome, Execution, Progress};
pub use numbering::{
    decode_index, diverging_program, encode_program, gamma, gamma_start, GoedelIndex,
    ParseIndexError,
};
pub use program::{parse_program, Instruction, Program, ProgramError, LENGTH_CAP, REGISTER_CAP};
