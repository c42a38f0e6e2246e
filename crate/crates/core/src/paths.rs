//! Execution paths and their static enumeration by branch budget.
//!
//! A *path* is the exact sequence of instruction addresses a machine may
//! execute starting at address 1. It is *terminated* when it ends in `STOP`
//! and *open* otherwise.
//!
//! A *line* is a forced run of zero or more write/move instructions that
//! ends in a branch or `STOP`. Every instruction begins at most one line,
//! and a write/move instruction stuck in a cycle with no exit begins none.
//! Paths are built by appending lines to open paths that end in a branch,
//! which gives the ceiling: for any budget `m`, terminated paths with at
//! most `m` branches plus open paths with exactly `m + 1` branches ending in
//! a branch never number more than `2^m`.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::machine::{InstrAddr, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    Terminated,
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Path {
    pub addresses: Vec<InstrAddr>,
    pub kind: PathKind,
    pub branch_count: u64,
}

impl Path {
    pub fn is_terminated(&self) -> bool {
        self.kind == PathKind::Terminated
    }

    fn from_line(addresses: Vec<InstrAddr>, program: &Program) -> Path {
        let mut path = Path {
            addresses: Vec::new(),
            kind: PathKind::Open,
            branch_count: 0,
        };
        path.append(&addresses, program);
        path
    }

    fn append(&mut self, line: &[InstrAddr], program: &Program) {
        for &a in line {
            let instr = program
                .get(a)
                .expect("line addresses come from the program");
            if instr.is_branch() {
                self.branch_count += 1;
            }
        }
        self.addresses.extend_from_slice(line);
        if line
            .last()
            .and_then(|&a| program.get(a))
            .is_some_and(|i| i.is_stop())
        {
            self.kind = PathKind::Terminated;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Line {
    /// Zero or more write/move addresses, then one branch or `STOP`.
    Addresses(Vec<InstrAddr>),
    /// The forced chain enters a cycle and never reaches a branch or `STOP`.
    Divergent,
}

/// Follows fixed successors from `start` until a branch or `STOP`.
///
/// # Panics
///
/// If `start` is not an address of `program`.
pub fn line_from(program: &Program, start: InstrAddr) -> Line {
    let mut seen = HashSet::new();
    let mut addresses = Vec::new();
    let mut at = start;
    loop {
        let instr = program
            .get(at)
            .unwrap_or_else(|| panic!("line start {at} is not in the program"));
        if !seen.insert(at) {
            return Line::Divergent;
        }
        addresses.push(at);
        match instr.fixed_next() {
            Some(next) => at = next,
            None => return Line::Addresses(addresses),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathSet {
    pub budget: u32,
    /// Terminated paths with at most `budget` branches.
    pub terminated: Vec<Path>,
    /// Open paths with exactly `budget + 1` branches, each ending in a branch.
    pub open: Vec<Path>,
}

impl PathSet {
    pub fn total(&self) -> u128 {
        (self.terminated.len() + self.open.len()) as u128
    }

    pub fn bound(&self) -> u128 {
        1u128 << self.budget
    }
}

/// Enumerates all paths level by level, extending each open path by the
/// lines its two branch outcomes begin. Divergent lines are dropped. A
/// branch whose two targets coincide contributes one extension, since the
/// resulting paths are identical.
pub fn enumerate_paths(program: &Program, budget: u32) -> PathSet {
    let mut set = PathSet {
        budget,
        terminated: Vec::new(),
        open: Vec::new(),
    };
    let Line::Addresses(first) = line_from(program, 1) else {
        return set;
    };
    let first = Path::from_line(first, program);
    if first.is_terminated() {
        set.terminated.push(first);
        return set;
    }
    let mut open = vec![first];
    for _ in 0..budget {
        let mut next_open = Vec::with_capacity(open.len() * 2);
        for path in open {
            let last = *path.addresses.last().expect("open paths are non-empty");
            let mut targets = program.get(last).expect("address from program").targets();
            targets.dedup();
            for target in targets {
                if let Line::Addresses(line) = line_from(program, target) {
                    let mut extended = path.clone();
                    extended.append(&line, program);
                    if extended.is_terminated() {
                        set.terminated.push(extended);
                    } else {
                        next_open.push(extended);
                    }
                }
            }
        }
        open = next_open;
    }
    set.open = open;
    set
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("empty trace")]
    EmptyTrace,
    #[error("trace starts at {0}, not at address 1")]
    BadStart(InstrAddr),
    #[error("trace step {index}: {from} cannot be followed by {to}")]
    BadSuccessor {
        index: usize,
        from: InstrAddr,
        to: InstrAddr,
    },
    #[error("trace mentions address {0}, which is not in the program")]
    UnknownAddress(InstrAddr),
}

/// The path a run followed. Terminated iff the trace ends in `STOP`.
///
/// Branch re-executions are counted separately.
pub fn path_of(trace: &[InstrAddr], program: &Program) -> Result<Path, PathError> {
    let &start = trace.first().ok_or(PathError::EmptyTrace)?;
    if start != 1 {
        return Err(PathError::BadStart(start));
    }
    if let Some(&a) = trace.iter().find(|&&a| program.get(a).is_none()) {
        return Err(PathError::UnknownAddress(a));
    }
    let mut branch_count = 0;
    for (index, &a) in trace.iter().enumerate() {
        let instr = program.get(a).ok_or(PathError::UnknownAddress(a))?;
        if instr.is_branch() {
            branch_count += 1;
        }
        if let Some(&to) = trace.get(index + 1) {
            if !instr.may_precede(to) {
                return Err(PathError::BadSuccessor { index, from: a, to });
            }
        }
    }
    let ends_in_stop = program
        .get(*trace.last().unwrap())
        .is_some_and(|i| i.is_stop());
    Ok(Path {
        addresses: trace.to_vec(),
        kind: if ends_in_stop {
            PathKind::Terminated
        } else {
            PathKind::Open
        },
        branch_count,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BudgetLevel {
    pub m: u32,
    pub terminated_count: usize,
    pub open_count: usize,
    pub bound: u128,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathBoundReport {
    pub levels: Vec<BudgetLevel>,
}

impl PathBoundReport {
    pub fn holds(&self) -> bool {
        self.levels.iter().all(|l| l.holds)
    }
}

/// Checks the `2^m` ceiling for every budget `0..=m_max`.
pub fn verify_path_bound(program: &Program, m_max: u32) -> PathBoundReport {
    let levels = (0..=m_max)
        .map(|m| {
            let set = enumerate_paths(program, m);
            BudgetLevel {
                m,
                terminated_count: set.terminated.len(),
                open_count: set.open.len(),
                bound: set.bound(),
                holds: set.total() <= set.bound(),
            }
        })
        .collect();
    PathBoundReport { levels }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::SymbolSpace;
    use crate::random::random_program;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const BRANCH3: &str = "1: BRANCH marked=2 blank=3\n2: STOP\n3: STOP";
    const TREE: &str = "1: BRANCH marked=2 blank=3\n\
                        2: RIGHT -> 4\n\
                        3: RIGHT -> 5\n\
                        4: BRANCH marked=6 blank=7\n\
                        5: BRANCH marked=8 blank=9\n\
                        6: STOP\n7: STOP\n8: STOP\n9: STOP";

    fn prog(text: &str) -> Program {
        Program::parse(text).unwrap()
    }

    fn addrs(paths: &[Path]) -> Vec<Vec<InstrAddr>> {
        paths.iter().map(|p| p.addresses.clone()).collect()
    }

    #[test]
    fn lines() {
        assert_eq!(line_from(&prog("1: STOP"), 1), Line::Addresses(vec![1]));
        assert_eq!(
            line_from(&prog("1: RIGHT -> 2\n2: BRANCH marked=1 blank=1"), 1),
            Line::Addresses(vec![1, 2])
        );
        assert_eq!(line_from(&prog("1: RIGHT -> 1"), 1), Line::Divergent);
        assert_eq!(
            line_from(&prog("1: RIGHT -> 2\n2: LEFT -> 1\n3: STOP"), 1),
            Line::Divergent
        );
    }

    #[test]
    fn enumerate_examples() {
        let s = enumerate_paths(&prog("1: STOP"), 0);
        assert_eq!(addrs(&s.terminated), vec![vec![1]]);
        assert!(s.open.is_empty());

        let s = enumerate_paths(&prog(BRANCH3), 1);
        assert_eq!(addrs(&s.terminated), vec![vec![1, 2], vec![1, 3]]);
        assert!(s.open.is_empty());
        assert!(s.terminated.iter().all(|p| p.branch_count == 1));

        let s = enumerate_paths(&prog(BRANCH3), 0);
        assert!(s.terminated.is_empty());
        assert_eq!(addrs(&s.open), vec![vec![1]]);

        for m in 0..4 {
            let s = enumerate_paths(&prog("1: RIGHT -> 1"), m);
            assert_eq!(s.total(), 0);
        }
    }

    #[test]
    fn coinciding_targets_count_once() {
        let p = prog("1: BRANCH marked=1 blank=1");
        for m in 0..6 {
            let s = enumerate_paths(&p, m);
            assert_eq!(s.open.len(), 1);
            assert_eq!(s.open[0].branch_count, m as u64 + 1);
        }
    }

    #[test]
    fn bound_reports() {
        let r = verify_path_bound(&prog("1: STOP"), 3);
        let sums: Vec<usize> = r
            .levels
            .iter()
            .map(|l| l.terminated_count + l.open_count)
            .collect();
        assert_eq!(sums, vec![1, 1, 1, 1]);
        assert!(r.holds());

        // Depth-two tree: one open path, then both halves open, then four leaves.
        let r = verify_path_bound(&prog(TREE), 2);
        let sums: Vec<(usize, usize)> = r
            .levels
            .iter()
            .map(|l| (l.terminated_count, l.open_count))
            .collect();
        assert_eq!(sums, vec![(0, 1), (0, 2), (4, 0)]);
        assert!(r.holds());
    }

    #[test]
    fn path_of_examples() {
        let p = path_of(&[1, 3], &prog(BRANCH3)).unwrap();
        assert_eq!(p.kind, PathKind::Terminated);
        assert_eq!(p.branch_count, 1);

        let p = path_of(&[1], &prog("1: STOP")).unwrap();
        assert_eq!((p.kind, p.branch_count), (PathKind::Terminated, 0));

        let looping = prog("1: BRANCH marked=2 blank=1\n2: STOP");
        let p = path_of(&[1, 1, 2], &looping).unwrap();
        assert_eq!((p.kind, p.branch_count), (PathKind::Terminated, 2));
        let p = path_of(&[1, 1], &looping).unwrap();
        assert_eq!(p.kind, PathKind::Open);
    }

    #[test]
    fn path_of_rejects_bad_traces() {
        let p = prog(BRANCH3);
        assert_eq!(path_of(&[], &p), Err(PathError::EmptyTrace));
        assert_eq!(path_of(&[2], &p), Err(PathError::BadStart(2)));
        assert_eq!(
            path_of(&[1, 3, 2], &p),
            Err(PathError::BadSuccessor {
                index: 1,
                from: 3,
                to: 2
            })
        );
        assert_eq!(path_of(&[1, 7], &p), Err(PathError::UnknownAddress(7)));
    }

    fn program_from(seed: u64) -> Program {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let size = rng.random_range(1..=40);
        random_program(&mut rng, size)
    }

    proptest! {
        #[test]
        fn ceiling_holds(seed in any::<u64>()) {
            prop_assert!(verify_path_bound(&program_from(seed), 8).holds());
        }

        #[test]
        fn enumerated_paths_are_well_formed(seed in any::<u64>(), m in 0u32..6) {
            let p = program_from(seed);
            let set = enumerate_paths(&p, m);
            let mut seen = HashSet::new();
            for path in set.terminated.iter().chain(&set.open) {
                prop_assert!(seen.insert(path.addresses.clone()), "duplicate path");
                let rebuilt = path_of(&path.addresses, &p).unwrap();
                prop_assert_eq!(&rebuilt, path);
            }
            for path in &set.terminated {
                prop_assert!(path.branch_count <= m as u64);
            }
            for path in &set.open {
                prop_assert_eq!(path.branch_count, m as u64 + 1);
                prop_assert!(p.get(*path.addresses.last().unwrap()).unwrap().is_branch());
            }
        }

        #[test]
        fn real_runs_are_enumerated(seed in any::<u64>(), head in -4i64..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = program_from(seed);
            let space: SymbolSpace = (0..6).filter(|_| rng.random_bool(0.5)).map(|a| a - 3).collect();
            let run = p.run(space, head, 2_000);
            if run.halted() {
                let path = path_of(&run.final_state.trace, &p).unwrap();
                prop_assert!(path.is_terminated());
                if path.branch_count <= 8 {
                    let m = path.branch_count as u32;
                    prop_assert!(enumerate_paths(&p, m).terminated.contains(&path));
                }
            }
        }

        #[test]
        fn prefixes_come_from_lower_budgets(seed in any::<u64>(), m in 1u32..6) {
            let p = program_from(seed);
            let lower = enumerate_paths(&p, m - 1);
            let set = enumerate_paths(&p, m);
            for path in set.terminated.iter().chain(&set.open) {
                if path.is_terminated() && path.branch_count < m as u64 {
                    prop_assert!(lower.terminated.contains(path));
                    continue;
                }
                // Cut just after the m-th branch: that prefix is an open path
                // of the previous budget.
                let mut seen = 0;
                let cut = path.addresses.iter().position(|&a| {
                    if p.get(a).unwrap().is_branch() { seen += 1; }
                    seen == m as u64
                }).unwrap();
                let prefix = &path.addresses[..=cut];
                prop_assert!(lower.open.iter().any(|o| o.addresses == prefix));
            }
        }
    }
}
