//! Post machine programs and their execution over a two-way infinite
//! symbol space.
//!
//! A program is a fixed list of instructions addressed `1..=n`. Execution
//! starts at address 1. Each instruction is one of:
//!
//! * a write or move (`MARK`, `UNMARK`, `RIGHT`, `LEFT`) followed by an
//!   unconditional jump,
//! * a conditional branch (`BRANCH`) that senses the current box,
//! * `STOP`.
//!
//! Only branches make decisions, so they are the resource the rest of the
//! crate counts.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

/// Address of an instruction inside a [`Program`]. Valid addresses are
/// `1..=program.len()`.
pub type InstrAddr = u32;

/// Address of a box on the symbol space.
pub type BoxAddr = i64;

/// Default step cap used by the CLI and the adversary.
pub const DEFAULT_STEP_CAP: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instruction {
    Mark {
        next: InstrAddr,
    },
    Unmark {
        next: InstrAddr,
    },
    MoveRight {
        next: InstrAddr,
    },
    MoveLeft {
        next: InstrAddr,
    },
    Branch {
        on_marked: InstrAddr,
        on_blank: InstrAddr,
    },
    Stop,
}

impl Instruction {
    /// The fixed successor of a write or move instruction.
    pub fn fixed_next(&self) -> Option<InstrAddr> {
        match *self {
            Instruction::Mark { next }
            | Instruction::Unmark { next }
            | Instruction::MoveRight { next }
            | Instruction::MoveLeft { next } => Some(next),
            Instruction::Branch { .. } | Instruction::Stop => None,
        }
    }

    pub fn is_branch(&self) -> bool {
        matches!(self, Instruction::Branch { .. })
    }

    pub fn is_stop(&self) -> bool {
        matches!(self, Instruction::Stop)
    }

    /// Every address this instruction may jump to, in `marked, blank` order
    /// for branches.
    pub fn targets(&self) -> Vec<InstrAddr> {
        match *self {
            Instruction::Branch {
                on_marked,
                on_blank,
            } => vec![on_marked, on_blank],
            Instruction::Stop => Vec::new(),
            _ => self.fixed_next().into_iter().collect(),
        }
    }

    /// Whether `to` may immediately follow this instruction.
    pub fn may_precede(&self, to: InstrAddr) -> bool {
        self.targets().contains(&to)
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Instruction::Mark { next } => write!(f, "MARK -> {next}"),
            Instruction::Unmark { next } => write!(f, "UNMARK -> {next}"),
            Instruction::MoveRight { next } => write!(f, "RIGHT -> {next}"),
            Instruction::MoveLeft { next } => write!(f, "LEFT -> {next}"),
            Instruction::Branch {
                on_marked,
                on_blank,
            } => {
                write!(f, "BRANCH marked={on_marked} blank={on_blank}")
            }
            Instruction::Stop => f.write_str("STOP"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate address {address}")]
    DuplicateAddress { line: usize, address: InstrAddr },
    #[error("address {missing} is missing (addresses must run 1..={max} without gaps)")]
    Gap { missing: InstrAddr, max: InstrAddr },
    #[error("program is empty: address 1 is required")]
    Empty,
    #[error("instruction {address} jumps to {target}, which does not exist")]
    DanglingTarget {
        address: InstrAddr,
        target: InstrAddr,
    },
}

/// A validated, immutable Post machine program.
///
/// Every jump target refers to an existing instruction and the addresses
/// are exactly `1..=len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Program {
    instructions: Vec<Instruction>,
}

impl Program {
    /// Builds a program from instructions listed in address order
    /// (`instructions[0]` is address 1).
    pub fn new(instructions: Vec<Instruction>) -> Result<Self, ParseError> {
        if instructions.is_empty() {
            return Err(ParseError::Empty);
        }
        let len = instructions.len() as InstrAddr;
        for (i, instr) in instructions.iter().enumerate() {
            for target in instr.targets() {
                if target == 0 || target > len {
                    return Err(ParseError::DanglingTarget {
                        address: i as InstrAddr + 1,
                        target,
                    });
                }
            }
        }
        Ok(Program { instructions })
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut slots: Vec<Option<Instruction>> = Vec::new();
        let mut lines_of: Vec<usize> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (address, instr) = parse_line(line, line_no)?;
            let slot = address as usize - 1;
            if slot >= slots.len() {
                slots.resize(slot + 1, None);
                lines_of.resize(slot + 1, 0);
            }
            if slots[slot].is_some() {
                return Err(ParseError::DuplicateAddress {
                    line: line_no,
                    address,
                });
            }
            slots[slot] = Some(instr);
            lines_of[slot] = line_no;
        }
        if slots.is_empty() {
            return Err(ParseError::Empty);
        }
        let max = slots.len() as InstrAddr;
        let instructions = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or(ParseError::Gap {
                    missing: i as InstrAddr + 1,
                    max,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Program::new(instructions)
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn get(&self, address: InstrAddr) -> Option<&Instruction> {
        if address == 0 {
            return None;
        }
        self.instructions.get(address as usize - 1)
    }

    /// Iterates `(address, instruction)` pairs in address order.
    pub fn iter(&self) -> impl Iterator<Item = (InstrAddr, &Instruction)> {
        self.instructions
            .iter()
            .enumerate()
            .map(|(i, instr)| (i as InstrAddr + 1, instr))
    }

    /// Runs the program from address 1. See [`MachineState::run`].
    pub fn run(&self, space: SymbolSpace, initial_head: BoxAddr, step_cap: u64) -> RunResult {
        MachineState::new(space, initial_head).run(self, step_cap)
    }
}

impl FromStr for Program {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Program::parse(s)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (addr, instr) in self.iter() {
            writeln!(f, "{addr}: {instr}")?;
        }
        Ok(())
    }
}

fn parse_line(line: &str, line_no: usize) -> Result<(InstrAddr, Instruction), ParseError> {
    let syntax = |message: String| ParseError::Syntax {
        line: line_no,
        message,
    };
    let (addr_text, body) = line
        .split_once(':')
        .ok_or_else(|| syntax("expected `<addr>: <instruction>`".into()))?;
    let address = parse_addr(addr_text.trim()).map_err(&syntax)?;
    let mut words = body.split_whitespace();
    let opcode = words
        .next()
        .ok_or_else(|| syntax("missing instruction".into()))?;
    let rest: Vec<&str> = words.collect();

    let jump = |rest: &[&str]| -> Result<InstrAddr, ParseError> {
        match rest {
            ["->", target] => parse_addr(target).map_err(&syntax),
            _ => Err(syntax(format!("expected `{opcode} -> <next>`"))),
        }
    };

    let instr = match opcode.to_ascii_uppercase().as_str() {
        "MARK" => Instruction::Mark { next: jump(&rest)? },
        "UNMARK" => Instruction::Unmark { next: jump(&rest)? },
        "RIGHT" => Instruction::MoveRight { next: jump(&rest)? },
        "LEFT" => Instruction::MoveLeft { next: jump(&rest)? },
        "STOP" => {
            if !rest.is_empty() {
                return Err(syntax("STOP takes no operands".into()));
            }
            Instruction::Stop
        }
        "BRANCH" => {
            let mut on_marked = None;
            let mut on_blank = None;
            for operand in &rest {
                let (key, value) = operand
                    .split_once('=')
                    .ok_or_else(|| syntax(format!("bad BRANCH operand `{operand}`")))?;
                let slot = match key {
                    "marked" => &mut on_marked,
                    "blank" => &mut on_blank,
                    _ => return Err(syntax(format!("unknown BRANCH operand `{key}`"))),
                };
                if slot.is_some() {
                    return Err(syntax(format!("repeated BRANCH operand `{key}`")));
                }
                *slot = Some(parse_addr(value).map_err(&syntax)?);
            }
            match (on_marked, on_blank) {
                (Some(on_marked), Some(on_blank)) => Instruction::Branch {
                    on_marked,
                    on_blank,
                },
                _ => return Err(syntax("BRANCH needs marked=<a> blank=<b>".into())),
            }
        }
        other => return Err(syntax(format!("unknown instruction `{other}`"))),
    };
    Ok((address, instr))
}

fn parse_addr(text: &str) -> Result<InstrAddr, String> {
    match text.parse::<InstrAddr>() {
        Ok(0) => Err("addresses start at 1".into()),
        Ok(a) => Ok(a),
        Err(_) => Err(format!("bad address `{text}`")),
    }
}

/// The symbol space. Only marked boxes are stored; every other box is blank.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SymbolSpace {
    marked: BTreeSet<BoxAddr>,
}

impl SymbolSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_marked(&self, address: BoxAddr) -> bool {
        self.marked.contains(&address)
    }

    /// Sets the state of a box. Returns the previous state.
    pub fn set(&mut self, address: BoxAddr, marked: bool) -> bool {
        if marked {
            !self.marked.insert(address)
        } else {
            self.marked.remove(&address)
        }
    }

    pub fn marked(&self) -> impl Iterator<Item = BoxAddr> + '_ {
        self.marked.iter().copied()
    }

    pub fn marked_count(&self) -> usize {
        self.marked.len()
    }
}

impl FromIterator<BoxAddr> for SymbolSpace {
    fn from_iter<I: IntoIterator<Item = BoxAddr>>(iter: I) -> Self {
        SymbolSpace {
            marked: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MachineState {
    pub head: BoxAddr,
    pub ip: InstrAddr,
    pub space: SymbolSpace,
    pub branches_executed: u64,
    pub steps_executed: u64,
    /// Addresses of executed instructions, in order.
    pub trace: Vec<InstrAddr>,
}

/// What a single [`MachineState::step`] did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Continue,
    Halted,
    /// The instruction at `ip` tried to mark a marked box or unmark a blank
    /// one. Nothing was executed and the state is unchanged.
    Inapplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Halted,
    StepCapExceeded,
    ApplicabilityViolation { at_step: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub status: RunStatus,
    pub final_state: MachineState,
}

impl RunResult {
    pub fn halted(&self) -> bool {
        self.status == RunStatus::Halted
    }
}

impl MachineState {
    pub fn new(space: SymbolSpace, initial_head: BoxAddr) -> Self {
        MachineState {
            head: initial_head,
            ip: 1,
            space,
            branches_executed: 0,
            steps_executed: 0,
            trace: Vec::new(),
        }
    }

    /// Executes the instruction at `ip`.
    ///
    /// # Panics
    ///
    /// If `ip` does not address an instruction of `program`. Validated
    /// programs never jump outside themselves, so this only happens when a
    /// state is paired with the wrong program.
    pub fn step(&mut self, program: &Program) -> Step {
        let instr = *program.get(self.ip).unwrap_or_else(|| {
            panic!(
                "ip {} outside program of {} instructions",
                self.ip,
                program.len()
            )
        });
        let current = self.space.is_marked(self.head);
        let next = match instr {
            Instruction::Mark { next } => {
                if current {
                    return Step::Inapplicable;
                }
                self.space.set(self.head, true);
                Some(next)
            }
            Instruction::Unmark { next } => {
                if !current {
                    return Step::Inapplicable;
                }
                self.space.set(self.head, false);
                Some(next)
            }
            Instruction::MoveRight { next } => {
                self.head += 1;
                Some(next)
            }
            Instruction::MoveLeft { next } => {
                self.head -= 1;
                Some(next)
            }
            Instruction::Branch {
                on_marked,
                on_blank,
            } => {
                self.branches_executed += 1;
                Some(if current { on_marked } else { on_blank })
            }
            Instruction::Stop => None,
        };
        self.trace.push(self.ip);
        self.steps_executed += 1;
        match next {
            Some(next) => {
                self.ip = next;
                Step::Continue
            }
            None => Step::Halted,
        }
    }

    /// Steps until `STOP`, an inapplicable write, or `step_cap` executed
    /// instructions.
    pub fn run(mut self, program: &Program, step_cap: u64) -> RunResult {
        while self.steps_executed < step_cap {
            match self.step(program) {
                Step::Continue => {}
                Step::Halted => {
                    return RunResult {
                        status: RunStatus::Halted,
                        final_state: self,
                    }
                }
                Step::Inapplicable => {
                    return RunResult {
                        status: RunStatus::ApplicabilityViolation {
                            at_step: self.steps_executed,
                        },
                        final_state: self,
                    }
                }
            }
        }
        RunResult {
            status: RunStatus::StepCapExceeded,
            final_state: self,
        }
    }
}
