use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Registers are numbered `0..REGISTER_CAP`.
pub const REGISTER_CAP: usize = 64;

/// Longest program the numbering will decode.
pub const LENGTH_CAP: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instruction {
    /// Add one to the register and fall through.
    Inc { register: usize },
    /// If the register is zero jump to `target` (1-based, `len + 1` halts),
    /// otherwise decrement it and fall through.
    DecJz { register: usize, target: usize },
}

impl Instruction {
    pub fn register(&self) -> usize {
        match *self {
            Instruction::Inc { register } | Instruction::DecJz { register, .. } => register,
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Inc { register } => write!(f, "INC {register}"),
            Instruction::DecJz { register, target } => write!(f, "DECJZ {register} {target}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: jump target {target} outside [1, {max}]")]
    TargetOutOfRange {
        line: usize,
        target: usize,
        max: usize,
    },
    #[error("line {line}: register {register} exceeds the cap of {cap} registers")]
    RegisterOverCap {
        line: usize,
        register: usize,
        cap: usize,
    },
    #[error("program has {len} instructions, more than the cap of {cap}")]
    TooLong { len: usize, cap: usize },
}

/// A validated counter-machine program.
///
/// Every jump target lies in `[1, len + 1]` and every register index is
/// below [`REGISTER_CAP`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Program {
    instructions: Vec<Instruction>,
    register_count: usize,
}

impl Default for Program {
    fn default() -> Self {
        Self {
            instructions: Vec::new(),
            register_count: 1,
        }
    }
}

impl Program {
    /// Validates `instructions`. Errors report the 1-based address of the
    /// offending instruction as the line.
    pub fn new(instructions: Vec<Instruction>) -> Result<Self, ProgramError> {
        let lines: Vec<usize> = (1..=instructions.len()).collect();
        Self::validated(instructions, &lines)
    }

    fn validated(instructions: Vec<Instruction>, lines: &[usize]) -> Result<Self, ProgramError> {
        if instructions.len() > LENGTH_CAP {
            return Err(ProgramError::TooLong {
                len: instructions.len(),
                cap: LENGTH_CAP,
            });
        }
        let max_target = instructions.len() + 1;
        for (instr, &line) in instructions.iter().zip(lines) {
            let register = instr.register();
            if register >= REGISTER_CAP {
                return Err(ProgramError::RegisterOverCap {
                    line,
                    register,
                    cap: REGISTER_CAP,
                });
            }
            if let Instruction::DecJz { target, .. } = *instr {
                if target == 0 || target > max_target {
                    return Err(ProgramError::TargetOutOfRange {
                        line,
                        target,
                        max: max_target,
                    });
                }
            }
        }
        let register_count = instructions
            .iter()
            .map(|i| i.register() + 1)
            .max()
            .unwrap_or(0)
            .max(1);
        Ok(Self {
            instructions,
            register_count,
        })
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Registers touched by the program, always including the input register.
    pub fn register_count(&self) -> usize {
        self.register_count
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for instr in &self.instructions {
            writeln!(f, "{instr}")?;
        }
        Ok(())
    }
}

/// Parses the line format `INC <reg>` / `DECJZ <reg> <target>`.
///
/// Blank lines and `#` comments (whole-line or trailing) are ignored.
pub fn parse_program(text: &str) -> Result<Program, ProgramError> {
    let mut instructions = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let code = raw.split('#').next().unwrap_or("").trim();
        if code.is_empty() {
            continue;
        }
        let syntax = |message: String| ProgramError::Syntax { line, message };
        let number = |tok: &str, what: &str| {
            tok.parse::<usize>()
                .map_err(|_| syntax(format!("invalid {what} `{tok}`")))
        };
        let tokens: Vec<&str> = code.split_whitespace().collect();
        let instr = match tokens.as_slice() {
            [op, reg] if op.eq_ignore_ascii_case("INC") => Instruction::Inc {
                register: number(reg, "register")?,
            },
            [op, reg, target] if op.eq_ignore_ascii_case("DECJZ") => Instruction::DecJz {
                register: number(reg, "register")?,
                target: number(target, "jump target")?,
            },
            [op, ..] if op.eq_ignore_ascii_case("INC") => {
                return Err(syntax("expected `INC <reg>`".into()))
            }
            [op, ..] if op.eq_ignore_ascii_case("DECJZ") => {
                return Err(syntax("expected `DECJZ <reg> <target>`".into()))
            }
            [op, ..] => return Err(syntax(format!("unknown instruction `{op}`"))),
            [] => unreachable!("blank lines are skipped"),
        };
        instructions.push(instr);
        lines.push(line);
    }
    Program::validated(instructions, &lines)
}

impl FromStr for Program {
    type Err = ProgramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_program(s)
    }
}
