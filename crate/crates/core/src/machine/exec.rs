use std::sync::Arc;

use serde::Serialize;

use super::program::{Instruction, Program};

/// Result of a budgeted evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EvalOutcome {
    /// Reached address `len + 1` after `steps` instructions.
    Halted { value: u64, steps: u64 },
    /// Still running when the budget ran out; `steps` equals the budget.
    OutOfBudget { steps: u64 },
    /// The argument or a register left the 64-bit machine word.
    Overflow { steps: u64 },
}

impl EvalOutcome {
    pub fn is_halted(&self) -> bool {
        matches!(self, EvalOutcome::Halted { .. })
    }

    pub fn value(&self) -> Option<u64> {
        match *self {
            EvalOutcome::Halted { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn steps(&self) -> u64 {
        match *self {
            EvalOutcome::Halted { steps, .. }
            | EvalOutcome::OutOfBudget { steps }
            | EvalOutcome::Overflow { steps } => steps,
        }
    }
}

/// Where a suspended [`Execution`] stands after [`Execution::advance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Progress {
    Halted {
        value: u64,
        steps: u64,
    },
    /// The step limit was reached without halting.
    Suspended {
        steps: u64,
    },
    Overflow {
        steps: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Running,
    /// Parked on `DECJZ r t` at address `t` with `r = 0`.
    SelfLoop,
    Halted(u64),
    Overflow,
}

/// A resumable run of a program on one input.
///
/// Advancing to a step limit in several calls gives the same outcome as one
/// call with the final limit, which is what lets dovetailing resume work
/// instead of restarting it.
#[derive(Debug, Clone)]
pub struct Execution {
    program: Arc<Program>,
    registers: Vec<u64>,
    pc: usize,
    steps: u64,
    state: State,
}

impl Execution {
    /// Starts `program` on `input`: register 0 holds `input - 1`, all others 0.
    pub fn new(program: Arc<Program>, input: u64) -> Self {
        assert!(input >= 1, "machine inputs are positive integers");
        let mut registers = vec![0; program.register_count()];
        registers[0] = input - 1;
        Self {
            program,
            registers,
            pc: 0,
            steps: 0,
            state: State::Running,
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Runs until the machine halts or has executed `limit` instructions in total.
    pub fn advance(&mut self, limit: u64) -> Progress {
        let instructions = self.program.instructions();
        while self.state == State::Running {
            let Some(instr) = instructions.get(self.pc) else {
                self.state = match self.registers[0].checked_add(1) {
                    Some(value) => State::Halted(value),
                    None => State::Overflow,
                };
                break;
            };
            if self.steps >= limit {
                break;
            }
            self.steps += 1;
            match *instr {
                Instruction::Inc { register } => match self.registers[register].checked_add(1) {
                    Some(v) => {
                        self.registers[register] = v;
                        self.pc += 1;
                    }
                    None => self.state = State::Overflow,
                },
                Instruction::DecJz { register, target } => {
                    if self.registers[register] == 0 {
                        if target - 1 == self.pc {
                            self.state = State::SelfLoop;
                        }
                        self.pc = target - 1;
                    } else {
                        self.registers[register] -= 1;
                        self.pc += 1;
                    }
                }
            }
        }

        match self.state {
            State::Halted(value) => Progress::Halted {
                value,
                steps: self.steps,
            },
            State::Overflow => Progress::Overflow { steps: self.steps },
            State::SelfLoop => {
                self.steps = self.steps.max(limit);
                Progress::Suspended { steps: self.steps }
            }
            State::Running => Progress::Suspended { steps: self.steps },
        }
    }

    /// Advances to `budget` and reports the outcome.
    pub fn finish(mut self, budget: u64) -> EvalOutcome {
        match self.advance(budget) {
            Progress::Halted { value, steps } => EvalOutcome::Halted { value, steps },
            Progress::Suspended { steps } => EvalOutcome::OutOfBudget { steps },
            Progress::Overflow { steps } => EvalOutcome::Overflow { steps },
        }
    }
}

/// Runs `program` on `input` for at most `budget` steps.
///
/// Halting at address `len + 1` costs no step; the output is register 0 plus one.
pub fn eval(program: &Program, input: u64, budget: u64) -> EvalOutcome {
    Execution::new(Arc::new(program.clone()), input).finish(budget)
}

/// [`eval`] on a shared program without cloning it.
pub fn eval_shared(program: &Arc<Program>, input: u64, budget: u64) -> EvalOutcome {
    Execution::new(Arc::clone(program), input).finish(budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::parse_program;

    fn prog(text: &str) -> Program {
        parse_program(text).unwrap()
    }

    #[test]
    fn empty_program_is_identity() {
        assert_eq!(
            eval(&Program::default(), 5, 10),
            EvalOutcome::Halted { value: 5, steps: 0 }
        );
    }

    #[test]
    fn single_increment() {
        assert_eq!(
            eval(&prog("INC 0"), 5, 10),
            EvalOutcome::Halted { value: 6, steps: 1 }
        );
    }

    #[test]
    fn self_loop_exhausts_budget() {
        let p = prog("DECJZ 1 1");
        assert_eq!(eval(&p, 3, 1000), EvalOutcome::OutOfBudget { steps: 1000 });
        assert_eq!(eval(&p, 3, 1), EvalOutcome::OutOfBudget { steps: 1 });
    }

    #[test]
    fn budget_is_exact() {
        // Clears r0 one step pair at a time: 2x + 1 steps on input x + 1.
        let p = prog("DECJZ 0 3\nDECJZ 1 1\n");
        assert_eq!(eval(&p, 4, 7), EvalOutcome::Halted { value: 1, steps: 7 });
        assert_eq!(eval(&p, 4, 6), EvalOutcome::OutOfBudget { steps: 6 });
        assert_eq!(eval(&p, 1, 1), EvalOutcome::Halted { value: 1, steps: 1 });
    }

    #[test]
    fn zero_budget_still_halts_trivially() {
        assert_eq!(
            eval(&Program::default(), 9, 0),
            EvalOutcome::Halted { value: 9, steps: 0 }
        );
        assert_eq!(
            eval(&prog("INC 0"), 9, 0),
            EvalOutcome::OutOfBudget { steps: 0 }
        );
    }

    #[test]
    fn resumed_runs_match_single_runs() {
        let p = Arc::new(prog(
            "DECJZ 0 4\nINC 1\nDECJZ 2 1\nDECJZ 1 6\nINC 0\nDECJZ 2 4\n",
        ));
        for input in 1..20 {
            for budget in 0..80 {
                let mut ex = Execution::new(Arc::clone(&p), input);
                for limit in (0..budget).step_by(3) {
                    ex.advance(limit);
                }
                assert_eq!(ex.finish(budget), eval_shared(&p, input, budget));
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        let p = prog("INC 0");
        assert_eq!(eval(&p, u64::MAX, 10), EvalOutcome::Overflow { steps: 1 });
        assert_eq!(
            eval(&Program::default(), u64::MAX, 10).value(),
            Some(u64::MAX)
        );
    }
}
