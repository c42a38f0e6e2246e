//! CNF to 3CNF by clause splitting, and the De Morgan dual.
//!
//! Clauses wider than three literals are cut into a chain linked by fresh
//! variables; narrower clauses are padded by repeating their last literal.
//! Each conjunct slot draws fresh variables from its own block
//! (`fresh_base + slot * conjunct_stride ..`), so the images of two conjuncts
//! never share a fresh variable and satisfiability carries over to their
//! conjunction.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::boolean::{sat_conj, sat_sparse, BooleanError, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("formula is not in CNF: {0}")]
    NotCnf(String),
    #[error("fresh_base {fresh_base} does not exceed original variable x{max_var}")]
    FreshBaseTooLow { fresh_base: u32, max_var: u32 },
    #[error("conjunct {conjunct} needs more than {stride} fresh variables")]
    FreshExhausted { conjunct: u8, stride: u32 },
    #[error("conjunct id must be 0 or 1, got {0}")]
    BadConjunct(u8),
    #[error("invalid reduction map: {0}")]
    BadMap(String),
    #[error(transparent)]
    Boolean(#[from] BooleanError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Literal {
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn negated(self) -> Literal {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    fn to_formula(self) -> Formula {
        Formula::literal(self.var, self.positive)
    }
}

/// A disjunction of literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Clause(pub Vec<Literal>);

/// A conjunction of non-empty clauses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CnfFormula {
    pub clauses: Vec<Clause>,
}

impl CnfFormula {
    /// Reads a formula shaped as an AND-tree of OR-trees of literals.
    pub fn from_formula(f: &Formula) -> Result<Self, ReductionError> {
        let mut conjuncts = Vec::new();
        flatten(f, true, &mut conjuncts);
        let clauses = conjuncts
            .into_iter()
            .map(|c| {
                let mut terms = Vec::new();
                flatten(c, false, &mut terms);
                terms
                    .into_iter()
                    .map(|t| match t {
                        Formula::Var(k) => Ok(Literal {
                            var: *k,
                            positive: true,
                        }),
                        Formula::Not(inner) => match inner.as_ref() {
                            Formula::Var(k) => Ok(Literal {
                                var: *k,
                                positive: false,
                            }),
                            _ => Err(ReductionError::NotCnf(format!("`{t}` is not a literal"))),
                        },
                        _ => Err(ReductionError::NotCnf(format!("`{t}` is not a literal"))),
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map(Clause)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CnfFormula { clauses })
    }

    pub fn to_formula(&self) -> Formula {
        Formula::and_all(self.clauses.iter().map(|c| {
            Formula::or_all(c.0.iter().map(|l| l.to_formula())).expect("clauses are non-empty")
        }))
        .expect("at least one clause")
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.clauses
            .iter()
            .flat_map(|c| c.0.iter().map(|l| l.var))
            .collect()
    }

    pub fn max_var(&self) -> u32 {
        self.vars().into_iter().next_back().unwrap_or(0)
    }

    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(|c| c.0.len()).sum()
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

impl FromStr for CnfFormula {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CnfFormula::from_formula(&s.parse()?)
    }
}

fn flatten<'a>(f: &'a Formula, conj: bool, out: &mut Vec<&'a Formula>) {
    match (f, conj) {
        (Formula::And(l, r), true) | (Formula::Or(l, r), false) => {
            flatten(l, conj, out);
            flatten(r, conj, out);
        }
        _ => out.push(f),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ReductionMap {
    fresh_base: u32,
    conjunct_stride: u32,
}

impl ReductionMap {
    pub fn new(fresh_base: u32, conjunct_stride: u32) -> Result<Self, ReductionError> {
        if fresh_base == 0 || conjunct_stride == 0 {
            return Err(ReductionError::BadMap(
                "fresh_base and conjunct_stride must be positive".into(),
            ));
        }
        fresh_base
            .checked_add(conjunct_stride.saturating_mul(2))
            .ok_or_else(|| ReductionError::BadMap("fresh variable blocks overflow".into()))?;
        Ok(ReductionMap {
            fresh_base,
            conjunct_stride,
        })
    }

    /// A map with room for the canonical CNF of any `n`-variable function:
    /// at most `2^n` clauses, each needing at most `n` fresh variables.
    pub fn for_arity(n: u32) -> Self {
        let stride = (1u32 << n.min(16)).saturating_mul(n.max(1));
        ReductionMap::new(n + 1, stride).expect("positive and small")
    }

    pub fn fresh_base(&self) -> u32 {
        self.fresh_base
    }

    pub fn conjunct_stride(&self) -> u32 {
        self.conjunct_stride
    }

    /// The block of fresh variables reserved for `conjunct`.
    pub fn fresh_range(&self, conjunct: u8) -> Range<u32> {
        let start = self.fresh_base + conjunct as u32 * self.conjunct_stride;
        start..start + self.conjunct_stride
    }
}

/// Rewrites `f` so that every clause has exactly three literals.
pub fn to_3cnf(
    f: &CnfFormula,
    map: &ReductionMap,
    conjunct: u8,
) -> Result<CnfFormula, ReductionError> {
    if conjunct > 1 {
        return Err(ReductionError::BadConjunct(conjunct));
    }
    let max_var = f.max_var();
    if max_var >= map.fresh_base {
        return Err(ReductionError::FreshBaseTooLow {
            fresh_base: map.fresh_base,
            max_var,
        });
    }
    let block = map.fresh_range(conjunct);
    let mut fresh = block.clone();
    let mut next_fresh = || {
        fresh
            .next()
            .map(|var| Literal {
                var,
                positive: true,
            })
            .ok_or(ReductionError::FreshExhausted {
                conjunct,
                stride: map.conjunct_stride,
            })
    };

    let mut clauses = Vec::with_capacity(f.clauses.len());
    for Clause(lits) in &f.clauses {
        match lits.len() {
            0 => return Err(ReductionError::NotCnf("empty clause".into())),
            1..=3 => {
                let mut padded = lits.clone();
                let last = *padded.last().unwrap();
                padded.resize(3, last);
                clauses.push(Clause(padded));
            }
            k => {
                let mut link = next_fresh()?;
                clauses.push(Clause(vec![lits[0], lits[1], link]));
                for &lit in &lits[2..k - 2] {
                    let next = next_fresh()?;
                    clauses.push(Clause(vec![link.negated(), lit, next]));
                    link = next;
                }
                clauses.push(Clause(vec![link.negated(), lits[k - 2], lits[k - 1]]));
            }
        }
    }
    Ok(CnfFormula { clauses })
}

/// Summary of a reduction, as reported by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionSummary {
    pub input_clauses: usize,
    pub output_clauses: usize,
    pub fresh_variables: Vec<u32>,
}

impl ReductionSummary {
    pub fn new(input: &CnfFormula, output: &CnfFormula, map: &ReductionMap, conjunct: u8) -> Self {
        let block = map.fresh_range(conjunct);
        ReductionSummary {
            input_clauses: input.clauses.len(),
            output_clauses: output.clauses.len(),
            fresh_variables: output
                .vars()
                .into_iter()
                .filter(|v| block.contains(v))
                .collect(),
        }
    }
}

/// One `(φ1, φ2, t(φ1), t(φ2))` quadruple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImagePair {
    pub first: Formula,
    pub second: Formula,
    pub first_image: Formula,
    pub second_image: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub pairs_checked: usize,
    /// Indices into the checked list where satisfiability disagreed.
    pub violations: Vec<usize>,
}

impl PreservationReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `sat(t(φ1) & t(φ2)) == sat(φ1 & φ2)` for every pair. Originals are
/// decided over `x1..xn`; images over every variable they mention.
pub fn preserves_sat_over_conjunction(
    pairs: &[ImagePair],
    arity: u32,
) -> Result<PreservationReport, ReductionError> {
    let mut violations = Vec::new();
    for (i, p) in pairs.iter().enumerate() {
        let original = sat_conj(&p.first, &p.second, arity)?.is_sat();
        let image = sat_sparse(&[&p.first_image, &p.second_image])?.is_some();
        if original != image {
            violations.push(i);
        }
    }
    Ok(PreservationReport {
        pairs_checked: pairs.len(),
        violations,
    })
}

/// Pushes a negation through `φ`: `&` and `|` swap, literals flip,
/// constants flip, and double negations cancel. The result computes the
/// complement of `φ`, so `φ` is falsifiable iff the result is satisfiable.
pub fn dualize(phi: &Formula) -> Formula {
    match phi {
        Formula::Const(b) => Formula::Const(!b),
        Formula::Var(k) => Formula::Var(*k).not(),
        Formula::Not(inner) => inner.as_ref().clone(),
        Formula::And(l, r) => dualize(l).or(dualize(r)),
        Formula::Or(l, r) => dualize(l).and(dualize(r)),
    }
}
