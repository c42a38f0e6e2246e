//! The fooling-family adversary.
//!
//! Given a candidate decider for "is `φ1 & φ2` satisfiable" and a full
//! representation of the `n`-variable functions, the adversary runs the
//! machine once on `(φ_f, φ_¬f)` for every function `f`. Each of those
//! conjunctions is unsatisfiable, so a correct decider must reject all of
//! them. If every run rejects within `2^n - 1` branches, the `2^(2^n)` runs
//! share at most `2^(2^n - 1)` terminated paths, so two runs `g != h` follow
//! the same path. Crossing their inputs gives `(φ_g, φ_¬h)` and `(φ_h, φ_¬g)`.
//! Both crossed runs follow the same path and reject, yet on an assignment
//! where `g` and `h` differ one of the crossed conjunctions is satisfied.
//!
//! [`Adversary::attack`] always produces an [`AttackOutcome`] and re-checks
//! it before returning. In [`Mode::Reduced`] every conjunct is passed
//! through the 3CNF reduction first, with the first and second parts drawing
//! fresh variables from disjoint blocks.

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::boolean::{
    sat_conj, sat_sparse, truth_table, Assignment, BooleanError, Formula, FormulaSet, SatResult,
    TruthTable,
};
use crate::convention::{BipartiteInput, Convention, ConventionError, Verdict};
use crate::encoding::encode_formula;
use crate::machine::{Program, RunResult, RunStatus};
use crate::paths::{path_of, Path};
use crate::reduction::{to_3cnf, CnfFormula, ReductionError, ReductionMap};

/// Default step cap for adversary runs.
pub const DEFAULT_ATTACK_STEP_CAP: u64 = 100_000;
/// Largest arity attacked without [`Adversary::allow_large`].
pub const MAX_DEFAULT_ARITY: u32 = 3;
/// Hard ceiling on the arity of an attack.
pub const MAX_ARITY: u32 = 4;

#[derive(Debug, Error)]
pub enum AttackError {
    #[error("representation of arity {arity} has {len} members, not all {expected} functions")]
    NotFull {
        arity: u32,
        len: usize,
        expected: u128,
    },
    #[error("arity {0} is too large for an attack (at most {MAX_DEFAULT_ARITY}, or {MAX_ARITY} with the large-family override)")]
    ArityTooLarge(u32),
    #[error(transparent)]
    Convention(#[from] ConventionError),
    #[error(transparent)]
    Boolean(#[from] BooleanError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("collision search needs a violation-free family")]
    FamilyNotClean,
    #[error("functions {g} and {h} do not share a terminated, rejecting path")]
    NotColliding { g: u64, h: u64 },
    #[error("internal error: crossed run {pair:?} left the shared path (simulator bug)")]
    CrossingFailed { pair: (u64, u64) },
    #[error("internal error: {runs} clean runs over only {distinct_paths} paths, yet no two share a path")]
    PigeonholeFailed { runs: usize, distinct_paths: usize },
    #[error("internal error: {0}")]
    Internal(String),
    #[error("outcome failed re-verification: {0}")]
    Verification(String),
}

/// How conjuncts are presented to the machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Plain,
    /// Every conjunct goes through the 3CNF reduction; the first part uses
    /// conjunct slot 0 and the second part slot 1.
    Reduced(ReductionMap),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Accept,
    Reject,
    Undecided,
}

impl From<Verdict> for Decision {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Accept => Decision::Accept,
            Verdict::Reject => Decision::Reject,
        }
    }
}

/// One part of an input: the function it stands for, its representative,
/// and the formula actually written to the tape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conjunct {
    pub function_index: u64,
    pub formula: Formula,
    /// Equal to `formula` in plain mode, its 3CNF image in reduced mode.
    pub presented: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub first: Conjunct,
    pub second: Conjunct,
    pub input: BipartiteInput,
    pub result: RunResult,
    pub decision: Decision,
    /// `None` only when the very first instruction was inapplicable.
    pub path: Option<Path>,
}

impl Run {
    pub fn terminated_path(&self) -> Option<&Path> {
        self.path
            .as_ref()
            .filter(|p| p.is_terminated() && self.result.halted())
    }
}

/// The run on `(φ_f, φ_¬f)` for one function `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub function_index: u64,
    pub table: TruthTable,
    pub run: Run,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunFamily {
    pub arity: u32,
    /// `2^n - 1`.
    pub budget: u64,
    pub records: Vec<RunRecord>,
    /// `2^(2^n)`.
    pub expected_size: u128,
}

impl RunFamily {
    /// Number of distinct terminated paths followed by the records.
    pub fn distinct_terminated_paths(&self) -> usize {
        self.records
            .iter()
            .filter_map(|r| r.run.terminated_path())
            .map(|p| &p.addresses)
            .collect::<std::collections::HashSet<_>>()
            .len()
    }

    /// `2^(2^n - 1)`: the most terminated paths with at most `budget`
    /// branches any machine can have.
    pub fn path_ceiling(&self) -> u128 {
        1u128 << self.budget
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttackOutcome {
    /// A family run accepted an unsatisfiable conjunction.
    CorrectnessViolation {
        record: RunRecord,
        oracle: SatResult,
    },
    /// A family run executed more than `budget` branches.
    BudgetViolation { record: RunRecord, budget: u64 },
    /// A family run did not halt within the step cap.
    StepCapViolation { record: RunRecord, step_cap: u64 },
    /// A family run tried to mark a marked box or unmark a blank one.
    InapplicableRun { record: RunRecord },
    /// Two family runs `g`, `h` share a path; `crossed` is the crossed run
    /// that rejects a conjunction satisfied by `witness`.
    CrossedCounterexample {
        g: u64,
        h: u64,
        shared_path: Path,
        crossed: Run,
        witness: Assignment,
        machine_verdict: Verdict,
    },
}

impl AttackOutcome {
    pub fn kind(&self) -> &'static str {
        match self {
            AttackOutcome::CorrectnessViolation { .. } => "correctness_violation",
            AttackOutcome::BudgetViolation { .. } => "budget_violation",
            AttackOutcome::StepCapViolation { .. } => "step_cap_violation",
            AttackOutcome::InapplicableRun { .. } => "inapplicable_run",
            AttackOutcome::CrossedCounterexample { .. } => "crossed_counterexample",
        }
    }

    /// The run the outcome cites.
    pub fn cited_run(&self) -> &Run {
        match self {
            AttackOutcome::CorrectnessViolation { record, .. }
            | AttackOutcome::BudgetViolation { record, .. }
            | AttackOutcome::StepCapViolation { record, .. }
            | AttackOutcome::InapplicableRun { record } => &record.run,
            AttackOutcome::CrossedCounterexample { crossed, .. } => crossed,
        }
    }

    /// A flat, serializable summary.
    pub fn report(&self) -> OutcomeReport {
        let run = self.cited_run();
        let state = &run.result.final_state;
        let (function_indices, oracle_verdict, witness) = match self {
            AttackOutcome::CrossedCounterexample { g, h, witness, .. } => {
                (vec![*g, *h], "sat", Some(witness.clone()))
            }
            AttackOutcome::CorrectnessViolation { record, .. }
            | AttackOutcome::BudgetViolation { record, .. }
            | AttackOutcome::StepCapViolation { record, .. }
            | AttackOutcome::InapplicableRun { record } => {
                (vec![record.function_index], "unsat", None)
            }
        };
        OutcomeReport {
            kind: self.kind(),
            function_indices,
            conjunct_functions: [run.first.function_index, run.second.function_index],
            formulas: [
                run.first.presented.to_string(),
                run.second.presented.to_string(),
            ],
            path: run
                .path
                .as_ref()
                .map(|p| p.addresses.clone())
                .unwrap_or_default(),
            inputs: [run.input.first.to_string(), run.input.second.to_string()],
            status: run.result.status,
            branches_executed: state.branches_executed,
            steps_executed: state.steps_executed,
            machine_verdict: run.decision,
            oracle_verdict,
            witness_assignment: witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutcomeReport {
    pub kind: &'static str,
    pub function_indices: Vec<u64>,
    /// Functions represented by the first and second parts of the cited run.
    pub conjunct_functions: [u64; 2],
    pub formulas: [String; 2],
    pub path: Vec<u32>,
    pub inputs: [String; 2],
    pub status: RunStatus,
    pub branches_executed: u64,
    pub steps_executed: u64,
    pub machine_verdict: Decision,
    pub oracle_verdict: &'static str,
    pub witness_assignment: Option<Assignment>,
}

/// A candidate decider together with everything fixed across its runs.
#[derive(Debug, Clone)]
pub struct Adversary<'a> {
    machine: &'a Program,
    convention: Convention,
    repr: &'a FormulaSet,
    mode: Mode,
    step_cap: u64,
}

impl<'a> Adversary<'a> {
    /// Checks that `repr` is full and of arity at most 3.
    pub fn new(
        machine: &'a Program,
        convention: Convention,
        repr: &'a FormulaSet,
        mode: Mode,
        step_cap: u64,
    ) -> Result<Self, AttackError> {
        Self::build(machine, convention, repr, mode, step_cap, MAX_DEFAULT_ARITY)
    }

    /// Like [`Adversary::new`] but accepts arity 4 (65,536 runs).
    pub fn allow_large(
        machine: &'a Program,
        convention: Convention,
        repr: &'a FormulaSet,
        mode: Mode,
        step_cap: u64,
    ) -> Result<Self, AttackError> {
        Self::build(machine, convention, repr, mode, step_cap, MAX_ARITY)
    }

    fn build(
        machine: &'a Program,
        convention: Convention,
        repr: &'a FormulaSet,
        mode: Mode,
        step_cap: u64,
        max_arity: u32,
    ) -> Result<Self, AttackError> {
        if repr.arity() > max_arity {
            return Err(AttackError::ArityTooLarge(repr.arity()));
        }
        if !repr.is_full() {
            return Err(AttackError::NotFull {
                arity: repr.arity(),
                len: repr.len(),
                expected: repr.function_count(),
            });
        }
        Ok(Adversary {
            machine,
            convention,
            repr,
            mode,
            step_cap: step_cap.max(1),
        })
    }

    pub fn arity(&self) -> u32 {
        self.repr.arity()
    }

    /// `2^n - 1`.
    pub fn budget(&self) -> u64 {
        (1u64 << self.arity()) - 1
    }

    fn function_count(&self) -> u64 {
        1u64 << (1u32 << self.arity())
    }

    fn negation_index(&self, index: u64) -> u64 {
        !index & (self.function_count() - 1)
    }

    fn conjunct(&self, function_index: u64, slot: u8) -> Result<Conjunct, AttackError> {
        let formula = self
            .repr
            .by_index(function_index)
            .ok_or_else(|| {
                AttackError::Internal(format!("no representative for {function_index}"))
            })?
            .clone();
        let presented = match self.mode {
            Mode::Plain => formula.clone(),
            Mode::Reduced(map) => {
                to_3cnf(&CnfFormula::from_formula(&formula)?, &map, slot)?.to_formula()
            }
        };
        Ok(Conjunct {
            function_index,
            formula,
            presented,
        })
    }

    /// Runs the machine on `(first, second)`.
    fn execute(&self, first: Conjunct, second: Conjunct) -> Result<Run, AttackError> {
        let input = BipartiteInput::new(
            encode_formula(&first.presented),
            encode_formula(&second.presented),
        );
        let space = self.convention.layout(&input)?;
        let result = self
            .machine
            .run(space, self.convention.initial_head(), self.step_cap);
        let decision = if result.halted() {
            self.convention
                .read_verdict(&result.final_state.space)
                .into()
        } else {
            Decision::Undecided
        };
        let path = match result.final_state.trace.as_slice() {
            [] => None,
            trace => Some(path_of(trace, self.machine).map_err(|e| {
                AttackError::Internal(format!("simulator produced a bad trace: {e}"))
            })?),
        };
        Ok(Run {
            first,
            second,
            input,
            result,
            decision,
            path,
        })
    }

    /// Runs the machine on `(φ_g, φ_¬h)`.
    pub fn run_pair(&self, g: u64, not_of: u64) -> Result<Run, AttackError> {
        let first = self.conjunct(g, 0)?;
        let second = self.conjunct(self.negation_index(not_of), 1)?;
        self.execute(first, second)
    }

    pub fn record(&self, function_index: u64) -> Result<RunRecord, AttackError> {
        Ok(RunRecord {
            function_index,
            table: TruthTable::from_index(self.arity(), function_index)?,
            run: self.run_pair(function_index, function_index)?,
        })
    }

    /// Decides the conjunction a run was given. In reduced mode the
    /// originals and the presented images are both decided, and must agree.
    pub fn oracle(&self, run: &Run) -> Result<SatResult, AttackError> {
        let original = sat_conj(&run.first.formula, &run.second.formula, self.arity())?;
        if let Mode::Reduced(_) = self.mode {
            let image = sat_sparse(&[&run.first.presented, &run.second.presented])?.is_some();
            if image != original.is_sat() {
                return Err(AttackError::Internal(format!(
                    "reduction changed satisfiability of {} & {}",
                    run.first.formula, run.second.formula
                )));
            }
        }
        Ok(original)
    }

    /// The family of runs on `(φ_f, φ_¬f)`, one per function, in index order.
    pub fn run_family(&self) -> Result<RunFamily, AttackError> {
        let records = (0..self.function_count())
            .map(|i| self.record(i))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RunFamily {
            arity: self.arity(),
            budget: self.budget(),
            records,
            expected_size: self.function_count() as u128,
        })
    }

    fn classify(&self, record: &RunRecord) -> Result<Option<AttackOutcome>, AttackError> {
        let run = &record.run;
        let outcome = match run.result.status {
            RunStatus::StepCapExceeded => Some(AttackOutcome::StepCapViolation {
                record: record.clone(),
                step_cap: self.step_cap,
            }),
            RunStatus::ApplicabilityViolation { .. } => Some(AttackOutcome::InapplicableRun {
                record: record.clone(),
            }),
            RunStatus::Halted if run.result.final_state.branches_executed > self.budget() => {
                Some(AttackOutcome::BudgetViolation {
                    record: record.clone(),
                    budget: self.budget(),
                })
            }
            RunStatus::Halted if run.decision == Decision::Accept => {
                let oracle = self.oracle(run)?;
                if oracle.is_sat() {
                    return Err(AttackError::Internal(format!(
                        "family conjunction for {} is satisfiable",
                        record.function_index
                    )));
                }
                Some(AttackOutcome::CorrectnessViolation {
                    record: record.clone(),
                    oracle,
                })
            }
            RunStatus::Halted => None,
        };
        Ok(outcome)
    }

    /// The first record, in function order, that fails to reject within
    /// budget. `None` means the family is clean.
    pub fn scan_violations(
        &self,
        family: &RunFamily,
    ) -> Result<Option<AttackOutcome>, AttackError> {
        for record in &family.records {
            if let Some(outcome) = self.classify(record)? {
                return Ok(Some(outcome));
            }
        }
        Ok(None)
    }

    /// Two records sharing a terminated path. Records are grouped by exact
    /// path; the group whose first member comes earliest wins, and its first
    /// two members are returned.
    pub fn find_collision(&self, family: &RunFamily) -> Result<(u64, u64), AttackError> {
        if self.scan_violations(family)?.is_some() {
            return Err(AttackError::FamilyNotClean);
        }
        let mut groups: IndexMap<&[u32], Vec<u64>> = IndexMap::new();
        for record in &family.records {
            let path = record
                .run
                .terminated_path()
                .ok_or(AttackError::FamilyNotClean)?;
            groups
                .entry(&path.addresses)
                .or_default()
                .push(record.function_index);
        }
        groups
            .values()
            .find(|members| members.len() >= 2)
            .map(|members| (members[0], members[1]))
            .ok_or(AttackError::PigeonholeFailed {
                runs: family.records.len(),
                distinct_paths: groups.len(),
            })
    }

    /// Crosses the inputs of two colliding records and returns the crossed
    /// run that wrongly rejects.
    pub fn cross_and_refute(
        &self,
        family: &RunFamily,
        g: u64,
        h: u64,
    ) -> Result<AttackOutcome, AttackError> {
        let find = |i: u64| family.records.iter().find(|r| r.function_index == i);
        let (rg, rh) = match (find(g), find(h)) {
            (Some(rg), Some(rh)) if g != h => (rg, rh),
            _ => return Err(AttackError::NotColliding { g, h }),
        };
        let shared = match (rg.run.terminated_path(), rh.run.terminated_path()) {
            (Some(p), Some(q))
                if p == q
                    && rg.run.decision == Decision::Reject
                    && rh.run.decision == Decision::Reject =>
            {
                p.clone()
            }
            _ => return Err(AttackError::NotColliding { g, h }),
        };

        let g_not_h = self.run_pair(g, h)?;
        let h_not_g = self.run_pair(h, g)?;
        for (run, pair) in [(&g_not_h, (g, h)), (&h_not_g, (h, g))] {
            if run.terminated_path() != Some(&shared) {
                return Err(AttackError::CrossingFailed { pair });
            }
        }

        let s = rg
            .table
            .distinguishing_assignment(&rh.table)?
            .ok_or_else(|| AttackError::Internal("colliding functions are identical".into()))?;
        // g(s) == ¬h(s): if both are true the first crossing is satisfied,
        // otherwise h(s) and ¬g(s) are both true.
        let crossed = if rg.table.value(&s) { g_not_h } else { h_not_g };
        if !(crossed.first.formula.eval(&s)? && crossed.second.formula.eval(&s)?) {
            return Err(AttackError::Internal(format!(
                "witness {s} does not satisfy the crossing"
            )));
        }
        if !self.oracle(&crossed)?.is_sat() {
            return Err(AttackError::Internal(
                "oracle disagrees with the witness".into(),
            ));
        }
        let machine_verdict = match crossed.decision {
            Decision::Reject => Verdict::Reject,
            other => {
                return Err(AttackError::Internal(format!(
                    "crossed run on the shared path decided {other:?}"
                )))
            }
        };
        Ok(AttackOutcome::CrossedCounterexample {
            g,
            h,
            shared_path: shared,
            crossed,
            witness: s,
            machine_verdict,
        })
    }

    /// Runs the full pipeline. Family runs stop at the first violation.
    pub fn attack(&self) -> Result<AttackOutcome, AttackError> {
        let mut records = Vec::with_capacity(self.function_count() as usize);
        for index in 0..self.function_count() {
            let record = self.record(index)?;
            if let Some(outcome) = self.classify(&record)? {
                self.verify(&outcome)?;
                return Ok(outcome);
            }
            records.push(record);
        }
        let family = RunFamily {
            arity: self.arity(),
            budget: self.budget(),
            records,
            expected_size: self.function_count() as u128,
        };
        let (g, h) = self.find_collision(&family)?;
        let outcome = self.cross_and_refute(&family, g, h)?;
        self.verify(&outcome)?;
        Ok(outcome)
    }

    /// Re-checks an outcome from scratch: the cited input is rebuilt from
    /// the representation, the machine is re-simulated, and the conjunction
    /// is re-decided from truth tables.
    pub fn verify(&self, outcome: &AttackOutcome) -> Result<(), AttackError> {
        let fail = |m: String| Err(AttackError::Verification(m));
        let cited = outcome.cited_run();
        let rebuilt = self.execute(
            self.conjunct(cited.first.function_index, 0)?,
            self.conjunct(cited.second.function_index, 1)?,
        )?;
        if &rebuilt != cited {
            return fail("re-simulation does not reproduce the cited run".into());
        }
        let satisfiable = self.satisfiable_by_tables(cited)?;
        let state = &cited.result.final_state;

        match outcome {
            AttackOutcome::CorrectnessViolation { record, oracle } => {
                if record.run.decision != Decision::Accept || satisfiable || oracle.is_sat() {
                    return fail(
                        "correctness violation does not accept an unsatisfiable input".into(),
                    );
                }
            }
            AttackOutcome::BudgetViolation { budget, .. } => {
                if !cited.result.halted() || state.branches_executed <= *budget {
                    return fail("budget violation stays within budget".into());
                }
            }
            AttackOutcome::StepCapViolation { .. } => {
                if cited.result.status != RunStatus::StepCapExceeded {
                    return fail("step cap violation halted".into());
                }
            }
            AttackOutcome::InapplicableRun { .. } => {
                if !matches!(
                    cited.result.status,
                    RunStatus::ApplicabilityViolation { .. }
                ) {
                    return fail("inapplicable run was applicable".into());
                }
            }
            AttackOutcome::CrossedCounterexample {
                g,
                h,
                shared_path,
                witness,
                machine_verdict,
                ..
            } => {
                let pair = (
                    cited.first.function_index,
                    self.negation_index(cited.second.function_index),
                );
                if pair != (*g, *h) && pair != (*h, *g) {
                    return fail("crossed run is not built from g and h".into());
                }
                if cited.terminated_path() != Some(shared_path) {
                    return fail("crossed run does not follow the shared path".into());
                }
                if !satisfiable
                    || !cited.first.formula.eval(witness)?
                    || !cited.second.formula.eval(witness)?
                {
                    return fail("crossed conjunction is not satisfied by the witness".into());
                }
                if cited.decision != Decision::from(*machine_verdict)
                    || *machine_verdict != Verdict::Reject
                {
                    return fail("crossed run does not reject".into());
                }
                for f in [*g, *h] {
                    let base = self.record(f)?;
                    if base.run.terminated_path() != Some(shared_path)
                        || base.run.decision != Decision::Reject
                    {
                        return fail(format!("family run {f} does not reject on the shared path"));
                    }
                }
            }
        }
        Ok(())
    }

    fn satisfiable_by_tables(&self, run: &Run) -> Result<bool, AttackError> {
        let n = self.arity();
        let a = truth_table(&run.first.formula, n)?;
        let b = truth_table(&run.second.formula, n)?;
        let sat = a.bits().iter().zip(b.bits()).any(|(x, y)| *x && *y);
        if let Mode::Reduced(_) = self.mode {
            let image = sat_sparse(&[&run.first.presented, &run.second.presented])?.is_some();
            if image != sat {
                return Err(AttackError::Verification(
                    "presented 3CNF conjunction disagrees with the originals".into(),
                ));
            }
        }
        Ok(sat)
    }
}

/// Result of running the four combinations of two bipartite inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrossingProbe {
    /// The crossing property held. `vacuous` is true when the two base runs
    /// did not halt on a common path.
    Holds { vacuous: bool },
    /// The base runs shared a terminated path but a crossed run did not
    /// follow it. This cannot happen on a correct simulator.
    CounterWitness {
        shared: Path,
        crossed: BipartiteInput,
        crossed_path: Option<Path>,
    },
}

/// Runs `(a1,b1)`, `(a2,b2)`, `(a1,b2)`, `(a2,b1)` and checks that whenever
/// the first two halt on the same path, the crossed two halt on it too.
pub fn probe_crossing(
    machine: &Program,
    convention: &Convention,
    base: [&BipartiteInput; 2],
    step_cap: u64,
) -> Result<CrossingProbe, AttackError> {
    let run = |input: &BipartiteInput| -> Result<Option<Path>, AttackError> {
        let result = machine.run(
            convention.layout(input)?,
            convention.initial_head(),
            step_cap,
        );
        if !result.halted() {
            return Ok(None);
        }
        path_of(&result.final_state.trace, machine)
            .map(Some)
            .map_err(|e| AttackError::Internal(e.to_string()))
    };
    let [one, two] = base;
    let (p1, p2) = (run(one)?, run(two)?);
    let shared = match (p1, p2) {
        (Some(p), Some(q)) if p == q => p,
        _ => return Ok(CrossingProbe::Holds { vacuous: true }),
    };
    for crossed in [
        BipartiteInput::new(one.first.clone(), two.second.clone()),
        BipartiteInput::new(two.first.clone(), one.second.clone()),
    ] {
        let path = run(&crossed)?;
        if path.as_ref() != Some(&shared) {
            return Ok(CrossingProbe::CounterWitness {
                shared,
                crossed,
                crossed_path: path,
            });
        }
    }
    Ok(CrossingProbe::Holds { vacuous: false })
}
