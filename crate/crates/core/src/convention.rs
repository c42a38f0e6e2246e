//! Symbol space conventions for bipartite inputs.
//!
//! A convention fixes, once for every run of a machine, where the head
//! starts, where the symbol space is split into two partitions, where each
//! part of an input is placed, and how the yes/no answer is read back after
//! the machine halts.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::machine::{BoxAddr, SymbolSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConventionError {
    #[error("box strings must be non-empty")]
    EmptyBoxString,
    #[error("invalid box character {0:?} (expected 'b' or 'm')")]
    BadBoxChar(char),
    #[error("first_anchor {first_anchor} must lie below split {split}")]
    FirstAnchor {
        first_anchor: BoxAddr,
        split: BoxAddr,
    },
    #[error("second_anchor {second_anchor} must not lie below split {split}")]
    SecondAnchor {
        second_anchor: BoxAddr,
        split: BoxAddr,
    },
    #[error("{0} part of {1} boxes does not fit its partition")]
    PartTooLong(PartitionId, usize),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionId {
    First,
    Second,
}

impl fmt::Display for PartitionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionId::First => "first",
            PartitionId::Second => "second",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn opposite(self) -> Verdict {
        match self {
            Verdict::Accept => Verdict::Reject,
            Verdict::Reject => Verdict::Accept,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        })
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "accept" | "yes" => Ok(Verdict::Accept),
            "reject" | "no" => Ok(Verdict::Reject),
            other => Err(format!("expected accept or reject, got `{other}`")),
        }
    }
}

/// A non-empty run of box states, written with `b` (blank) and `m` (marked).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxString(Vec<bool>);

impl BoxString {
    pub fn new(boxes: Vec<bool>) -> Result<Self, ConventionError> {
        if boxes.is_empty() {
            return Err(ConventionError::EmptyBoxString);
        }
        Ok(BoxString(boxes))
    }

    pub fn boxes(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for BoxString {
    type Err = ConventionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let boxes = s
            .trim()
            .chars()
            .map(|c| match c {
                'm' => Ok(true),
                'b' => Ok(false),
                other => Err(ConventionError::BadBoxChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        BoxString::new(boxes)
    }
}

impl fmt::Display for BoxString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &m in &self.0 {
            f.write_str(if m { "m" } else { "b" })?;
        }
        Ok(())
    }
}

impl Serialize for BoxString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// An input of two parts, one per partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BipartiteInput {
    pub first: BoxString,
    pub second: BoxString,
}

impl BipartiteInput {
    pub fn new(first: BoxString, second: BoxString) -> Self {
        BipartiteInput { first, second }
    }

    /// Parses the two-line `first: <bm>` / `second: <bm>` file format.
    pub fn parse(text: &str) -> Result<Self, ConventionError> {
        let mut first = None;
        let mut second = None;
        for (line, key, value) in key_values(text, ':')? {
            let slot = match key {
                "first" => &mut first,
                "second" => &mut second,
                other => {
                    return Err(ConventionError::Syntax {
                        line,
                        message: format!("unknown key `{other}`"),
                    })
                }
            };
            *slot = Some(value.parse::<BoxString>()?);
        }
        match (first, second) {
            (Some(first), Some(second)) => Ok(BipartiteInput { first, second }),
            _ => Err(ConventionError::Syntax {
                line: 0,
                message: "both `first:` and `second:` lines are required".into(),
            }),
        }
    }
}

impl fmt::Display for BipartiteInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "first: {}", self.first)?;
        writeln!(f, "second: {}", self.second)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Convention {
    initial_head: BoxAddr,
    /// Addresses below `split` form the first partition.
    split: BoxAddr,
    /// Rightmost box of the first part.
    first_anchor: BoxAddr,
    /// Leftmost box of the second part.
    second_anchor: BoxAddr,
    answer_box: BoxAddr,
    answer_marked_means: Verdict,
}

impl Default for Convention {
    /// Head at 0, first part ending at -1, second part starting at 0, answer
    /// read from box 0 with marked meaning accept.
    fn default() -> Self {
        Convention {
            initial_head: 0,
            split: 0,
            first_anchor: -1,
            second_anchor: 0,
            answer_box: 0,
            answer_marked_means: Verdict::Accept,
        }
    }
}

impl Convention {
    pub fn new(
        initial_head: BoxAddr,
        split: BoxAddr,
        first_anchor: BoxAddr,
        second_anchor: BoxAddr,
        answer_box: BoxAddr,
        answer_marked_means: Verdict,
    ) -> Result<Self, ConventionError> {
        if first_anchor >= split {
            return Err(ConventionError::FirstAnchor {
                first_anchor,
                split,
            });
        }
        if second_anchor < split {
            return Err(ConventionError::SecondAnchor {
                second_anchor,
                split,
            });
        }
        Ok(Convention {
            initial_head,
            split,
            first_anchor,
            second_anchor,
            answer_box,
            answer_marked_means,
        })
    }

    pub fn initial_head(&self) -> BoxAddr {
        self.initial_head
    }
    pub fn split(&self) -> BoxAddr {
        self.split
    }
    pub fn first_anchor(&self) -> BoxAddr {
        self.first_anchor
    }
    pub fn second_anchor(&self) -> BoxAddr {
        self.second_anchor
    }
    pub fn answer_box(&self) -> BoxAddr {
        self.answer_box
    }
    pub fn answer_marked_means(&self) -> Verdict {
        self.answer_marked_means
    }

    pub fn partition_of(&self, address: BoxAddr) -> PartitionId {
        if address < self.split {
            PartitionId::First
        } else {
            PartitionId::Second
        }
    }

    /// Places both parts on an otherwise blank symbol space.
    pub fn layout(&self, input: &BipartiteInput) -> Result<SymbolSpace, ConventionError> {
        let first_len = input.first.len() as i64;
        let first_start =
            self.first_anchor
                .checked_sub(first_len - 1)
                .ok_or(ConventionError::PartTooLong(
                    PartitionId::First,
                    input.first.len(),
                ))?;
        self.second_anchor
            .checked_add(input.second.len() as i64 - 1)
            .ok_or(ConventionError::PartTooLong(
                PartitionId::Second,
                input.second.len(),
            ))?;

        let first = input.first.boxes().iter().zip(first_start..);
        let second = input.second.boxes().iter().zip(self.second_anchor..);
        Ok(first
            .chain(second)
            .filter(|(&marked, _)| marked)
            .map(|(_, addr)| addr)
            .collect())
    }

    /// Reads the answer box of a halted machine's symbol space.
    pub fn read_verdict(&self, space: &SymbolSpace) -> Verdict {
        if space.is_marked(self.answer_box) {
            self.answer_marked_means
        } else {
            self.answer_marked_means.opposite()
        }
    }

    /// Parses `key=value` lines for all six fields. Missing keys keep their
    /// [`Default`] value.
    pub fn parse(text: &str) -> Result<Self, ConventionError> {
        let d = Convention::default();
        let (mut head, mut split, mut fa, mut sa, mut ab, mut means) = (
            d.initial_head,
            d.split,
            d.first_anchor,
            d.second_anchor,
            d.answer_box,
            d.answer_marked_means,
        );
        for (line, key, value) in key_values(text, '=')? {
            let syntax = |message: String| ConventionError::Syntax { line, message };
            let int = || {
                value
                    .parse::<BoxAddr>()
                    .map_err(|_| syntax(format!("`{key}` needs an integer, got `{value}`")))
            };
            match key {
                "initial_head" => head = int()?,
                "split" => split = int()?,
                "first_anchor" => fa = int()?,
                "second_anchor" => sa = int()?,
                "answer_box" => ab = int()?,
                "answer_marked_means" => means = value.parse().map_err(syntax)?,
                other => return Err(syntax(format!("unknown key `{other}`"))),
            }
        }
        Convention::new(head, split, fa, sa, ab, means)
    }
}

impl FromStr for Convention {
    type Err = ConventionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Convention::parse(s)
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "initial_head={}", self.initial_head)?;
        writeln!(f, "split={}", self.split)?;
        writeln!(f, "first_anchor={}", self.first_anchor)?;
        writeln!(f, "second_anchor={}", self.second_anchor)?;
        writeln!(f, "answer_box={}", self.answer_box)?;
        writeln!(f, "answer_marked_means={}", self.answer_marked_means)
    }
}

fn key_values(text: &str, sep: char) -> Result<Vec<(usize, &str, &str)>, ConventionError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once(sep)
            .ok_or_else(|| ConventionError::Syntax {
                line: idx + 1,
                message: format!("expected `key{sep}value`"),
            })?;
        out.push((idx + 1, key.trim(), value.trim()));
    }
    Ok(out)
}
