//! Post machines, bipartite input conventions, and an adversary that refutes
//! any Post machine claiming to decide satisfiability of `φ1 & φ2` within
//! `2^n - 1` branches on `n`-variable conjuncts.
//!
//! ```
//! use postlb::{full_representation, Adversary, Convention, Mode, Program, Style};
//!
//! let machine: Program = "1: STOP".parse().unwrap();
//! let repr = full_representation(2, Style::MintermDnf).unwrap();
//! let adversary = Adversary::new(&machine, Convention::default(), &repr, Mode::Plain, 1000).unwrap();
//! let outcome = adversary.attack().unwrap();
//! assert_eq!(outcome.kind(), "crossed_counterexample");
//! ```

pub mod attack;
pub mod boolean;
pub mod convention;
pub mod encoding;
pub mod machine;
pub mod paths;
pub mod random;
pub mod reduction;

pub use attack::{
    probe_crossing, Adversary, AttackError, AttackOutcome, CrossingProbe, Decision, Mode,
};
pub use boolean::{
    full_representation, sat_conj, truth_table, Assignment, Formula, FormulaSet, SatResult, Style,
    TruthTable,
};
pub use convention::{BipartiteInput, BoxString, Convention, Verdict};
pub use encoding::{decode_formula, encode_formula};
pub use machine::{Instruction, Program, RunResult, RunStatus, SymbolSpace};
pub use paths::{enumerate_paths, path_of, verify_path_bound, Path, PathSet};
pub use reduction::{to_3cnf, CnfFormula, ReductionMap};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/machine.md")]
    mod machine {}
    #[doc = include_str!("../../../book/src/conventions.md")]
    mod conventions {}
    #[doc = include_str!("../../../book/src/paths.md")]
    mod paths {}
    #[doc = include_str!("../../../book/src/boolean.md")]
    mod boolean {}
    #[doc = include_str!("../../../book/src/reduction.md")]
    mod reduction {}
    #[doc = include_str!("../../../book/src/encoding.md")]
    mod encoding {}
    #[doc = include_str!("../../../book/src/adversary.md")]
    mod adversary {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
