//! Seeded generators for programs, conventions, and inputs.
//!
//! Used by the property tests, the acceptance suite, and the `lemma2` CLI
//! probe. All generators take the RNG by reference so callers control
//! reproducibility.

use rand::Rng;

use crate::convention::{BipartiteInput, BoxString, Convention, Verdict};
use crate::machine::{InstrAddr, Instruction, Program};

/// A random valid program of `size` instructions (at least 1).
///
/// Jump targets are uniform over the program. `STOP` and `BRANCH` are
/// weighted up so that a fair share of programs halt.
pub fn random_program<R: Rng + ?Sized>(rng: &mut R, size: usize) -> Program {
    let size = size.max(1);
    let target = |rng: &mut R| rng.random_range(1..=size as InstrAddr);
    let instructions = (0..size)
        .map(|_| match rng.random_range(0..10) {
            0 => Instruction::Mark { next: target(rng) },
            1 => Instruction::Unmark { next: target(rng) },
            2 | 3 => Instruction::MoveRight { next: target(rng) },
            4 | 5 => Instruction::MoveLeft { next: target(rng) },
            6 | 7 => Instruction::Branch {
                on_marked: target(rng),
                on_blank: target(rng),
            },
            _ => Instruction::Stop,
        })
        .collect();
    Program::new(instructions).expect("generated targets are in range")
}

/// A random valid convention with all fields within a few boxes of zero.
pub fn random_convention<R: Rng + ?Sized>(rng: &mut R) -> Convention {
    let split = rng.random_range(-8..=8);
    let first_anchor = split - rng.random_range(1..=3);
    let second_anchor = split + rng.random_range(0..=2);
    let initial_head = rng.random_range(split - 6..=split + 6);
    let answer_box = rng.random_range(split - 6..=split + 6);
    let answer_marked_means = if rng.random_bool(0.5) {
        Verdict::Accept
    } else {
        Verdict::Reject
    };
    Convention::new(
        initial_head,
        split,
        first_anchor,
        second_anchor,
        answer_box,
        answer_marked_means,
    )
    .expect("anchors are generated on the correct side of the split")
}

/// A random non-empty box string of length `1..=max_len`.
pub fn random_box_string<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> BoxString {
    let len = rng.random_range(1..=max_len.max(1));
    BoxString::new((0..len).map(|_| rng.random_bool(0.5)).collect())
        .expect("length is at least one")
}

pub fn random_input<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> BipartiteInput {
    BipartiteInput::new(
        random_box_string(rng, max_len),
        random_box_string(rng, max_len),
    )
}
