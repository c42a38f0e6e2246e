//! Boolean formulas, truth tables, full representations, and the
//! brute-force satisfiability oracle.
//!
//! Assignments are indexed in binary order with `x1` as the most significant
//! bit, so index 0 is all-false and index `2^n - 1` is all-true. A truth
//! table stores one bit per assignment index. A function's *index* packs its
//! table with `bits[i]` at bit position `i`; families and representations
//! are always walked in that order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Largest arity for exhaustive enumeration of assignments.
pub const MAX_ENUM_ARITY: u32 = 24;
/// Largest arity accepted by [`full_representation`].
pub const MAX_REPR_ARITY: u32 = 4;
/// Largest arity for which a function index fits in a `u64`.
pub const MAX_INDEXED_ARITY: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BooleanError {
    #[error("variable x{var} is outside x1..x{arity}")]
    VarOutOfRange { var: u32, arity: u32 },
    #[error("arity {arity} is outside the supported range {min}..={max}")]
    ArityOutOfRange { arity: u32, min: u32, max: u32 },
    #[error("truth table of arity {arity} needs {expected} bits, got {got}")]
    TableLength {
        arity: u32,
        expected: usize,
        got: usize,
    },
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(u32, u32),
    #[error("formula parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    /// Variable `x_k`, `k >= 1`.
    Var(u32),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(k: u32) -> Formula {
        Formula::Var(k)
    }

    pub fn literal(k: u32, positive: bool) -> Formula {
        if positive {
            Formula::Var(k)
        } else {
            Formula::Var(k).not()
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    /// Left-nested conjunction. `None` for an empty iterator.
    pub fn and_all<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    /// Left-nested disjunction. `None` for an empty iterator.
    pub fn or_all<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::or)
    }

    /// Highest variable index mentioned, 0 if none.
    pub fn max_var(&self) -> u32 {
        match self {
            Formula::Const(_) => 0,
            Formula::Var(k) => *k,
            Formula::Not(c) => c.max_var(),
            Formula::And(l, r) | Formula::Or(l, r) => l.max_var().max(r.max_var()),
        }
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool, BooleanError> {
        Ok(match self {
            Formula::Const(b) => *b,
            Formula::Var(k) => a.get(*k).ok_or(BooleanError::VarOutOfRange {
                var: *k,
                arity: a.arity(),
            })?,
            Formula::Not(c) => !c.eval(a)?,
            Formula::And(l, r) => l.eval(a)? && r.eval(a)?,
            Formula::Or(l, r) => l.eval(a)? || r.eval(a)?,
        })
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        match self {
            Formula::Const(true) => f.write_str("T"),
            Formula::Const(false) => f.write_str("F"),
            Formula::Var(k) => write!(f, "x{k}"),
            Formula::Not(c) => {
                f.write_str("!")?;
                c.fmt_prec(f, 2)
            }
            Formula::And(l, r) => paren(f, ctx > 1, |f| {
                l.fmt_prec(f, 1)?;
                f.write_str("&")?;
                r.fmt_prec(f, 2)
            }),
            Formula::Or(l, r) => paren(f, ctx > 0, |f| {
                l.fmt_prec(f, 0)?;
                f.write_str("|")?;
                r.fmt_prec(f, 1)
            }),
        }
    }
}

fn paren(
    f: &mut fmt::Formatter<'_>,
    wrap: bool,
    body: impl FnOnce(&mut fmt::Formatter<'_>) -> fmt::Result,
) -> fmt::Result {
    if wrap {
        f.write_str("(")?;
    }
    body(f)?;
    if wrap {
        f.write_str(")")?;
    }
    Ok(())
}

/// Compact text form: `!` binds tighter than `&`, which binds tighter than
/// `|`; both binary operators associate to the left. Parentheses appear only
/// where needed, so `parse(display(φ)) == φ`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for Formula {
    type Err = BooleanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let formula = p.or()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(formula)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> BooleanError {
        BooleanError::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<Formula, BooleanError> {
        let mut acc = self.and()?;
        while self.eat(b'|') {
            acc = acc.or(self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, BooleanError> {
        let mut acc = self.unary()?;
        while self.eat(b'&') {
            acc = acc.and(self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, BooleanError> {
        if self.eat(b'!') {
            return Ok(self.unary()?.not());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, BooleanError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'T') => {
                self.pos += 1;
                Ok(Formula::Const(true))
            }
            Some(b'F') => {
                self.pos += 1;
                Ok(Formula::Const(false))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.or()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match digits.parse::<u32>() {
                    Ok(k) if k >= 1 && !digits.starts_with('0') => Ok(Formula::Var(k)),
                    _ => {
                        self.pos = start;
                        Err(self.error("expected a variable index 1, 2, ..."))
                    }
                }
            }
            Some(_) => Err(self.error("expected `x<k>`, `T`, `F`, `!`, or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Values for `x1..xn`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    /// The `index`-th assignment of `arity` variables, `x1` most significant.
    pub fn from_index(arity: u32, index: u64) -> Self {
        Assignment {
            values: (1..=arity)
                .map(|k| (index >> (arity - k)) & 1 == 1)
                .collect(),
        }
    }

    pub fn index(&self) -> u64 {
        self.values.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn arity(&self) -> u32 {
        self.values.len() as u32
    }

    /// Value of `x_k`.
    pub fn get(&self, k: u32) -> Option<bool> {
        if k == 0 {
            return None;
        }
        self.values.get(k as usize - 1).copied()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "x{}={}", i + 1, if v { 'T' } else { 'F' })?;
        }
        Ok(())
    }
}

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.values.len()))?;
        for (i, v) in self.values.iter().enumerate() {
            map.serialize_entry(&format!("x{}", i + 1), v)?;
        }
        map.end()
    }
}

fn check_arity(arity: u32, min: u32, max: u32) -> Result<(), BooleanError> {
    if (min..=max).contains(&arity) {
        Ok(())
    } else {
        Err(BooleanError::ArityOutOfRange { arity, min, max })
    }
}

/// All assignments of `arity` variables in index order.
pub fn assignments(arity: u32) -> impl Iterator<Item = Assignment> {
    (0..1u64 << arity).map(move |i| Assignment::from_index(arity, i))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    arity: u32,
    bits: Vec<bool>,
}

impl TruthTable {
    pub fn new(arity: u32, bits: Vec<bool>) -> Result<Self, BooleanError> {
        check_arity(arity, 1, MAX_ENUM_ARITY)?;
        let expected = 1usize << arity;
        if bits.len() != expected {
            return Err(BooleanError::TableLength {
                arity,
                expected,
                got: bits.len(),
            });
        }
        Ok(TruthTable { arity, bits })
    }

    /// The table whose function index is `index`.
    pub fn from_index(arity: u32, index: u64) -> Result<Self, BooleanError> {
        check_arity(arity, 1, MAX_INDEXED_ARITY)?;
        let bits = (0..1usize << arity)
            .map(|i| (index >> i) & 1 == 1)
            .collect();
        Ok(TruthTable { arity, bits })
    }

    /// Function index, for arities up to [`MAX_INDEXED_ARITY`].
    pub fn index(&self) -> Option<u64> {
        (self.arity <= MAX_INDEXED_ARITY).then(|| {
            self.bits
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &b)| acc | (b as u64) << i)
        })
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn value(&self, a: &Assignment) -> bool {
        self.bits[a.index() as usize]
    }

    pub fn negate(&self) -> TruthTable {
        TruthTable {
            arity: self.arity,
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// Lowest-index assignment on which the two tables differ.
    pub fn distinguishing_assignment(
        &self,
        other: &TruthTable,
    ) -> Result<Option<Assignment>, BooleanError> {
        if self.arity != other.arity {
            return Err(BooleanError::ArityMismatch(self.arity, other.arity));
        }
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .position(|(a, b)| a != b)
            .map(|i| Assignment::from_index(self.arity, i as u64)))
    }
}

/// Tables print as a string of `T`/`F` in assignment order.
impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "T" } else { "F" })?;
        }
        Ok(())
    }
}

impl Serialize for TruthTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn truth_table(formula: &Formula, arity: u32) -> Result<TruthTable, BooleanError> {
    check_arity(arity, 1, MAX_ENUM_ARITY)?;
    let bits = assignments(arity)
        .map(|a| formula.eval(&a))
        .collect::<Result<Vec<_>, _>>()?;
    TruthTable::new(arity, bits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Style {
    #[default]
    MintermDnf,
    MaxtermCnf,
}

impl FromStr for Style {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "minterm-dnf" => Ok(Style::MintermDnf),
            "maxterm-cnf" => Ok(Style::MaxtermCnf),
            other => Err(format!(
                "unknown style `{other}` (minterm-dnf or maxterm-cnf)"
            )),
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::MintermDnf => "minterm-dnf",
            Style::MaxtermCnf => "maxterm-cnf",
        })
    }
}

/// Canonical minterm DNF or maxterm CNF for a table.
///
/// The constant-false table in DNF is `x1&!x1` and the constant-true table
/// in CNF is `x1|!x1`, so every representative mentions a variable.
pub fn formula_from_table(t: &TruthTable, style: Style) -> Formula {
    let n = t.arity();
    let rows = assignments(n).zip(t.bits());
    match style {
        Style::MintermDnf => {
            let minterms = rows.filter(|(_, &b)| b).map(|(a, _)| {
                Formula::and_all((1..=n).map(|k| Formula::literal(k, a.get(k).unwrap()))).unwrap()
            });
            Formula::or_all(minterms).unwrap_or_else(|| Formula::var(1).and(Formula::var(1).not()))
        }
        Style::MaxtermCnf => {
            let maxterms = rows.filter(|(_, &b)| !b).map(|(a, _)| {
                Formula::or_all((1..=n).map(|k| Formula::literal(k, !a.get(k).unwrap()))).unwrap()
            });
            Formula::and_all(maxterms).unwrap_or_else(|| Formula::var(1).or(Formula::var(1).not()))
        }
    }
}

/// Formulas keyed by the function they represent, in function index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaSet {
    arity: u32,
    members: BTreeMap<u64, Formula>,
}

impl FormulaSet {
    pub fn new(arity: u32) -> Result<Self, BooleanError> {
        check_arity(arity, 1, MAX_INDEXED_ARITY)?;
        Ok(FormulaSet {
            arity,
            members: BTreeMap::new(),
        })
    }

    /// Adds `formula` under the function it computes, replacing any earlier
    /// representative of that function.
    pub fn insert(&mut self, formula: Formula) -> Result<TruthTable, BooleanError> {
        let table = truth_table(&formula, self.arity)?;
        let index = table.index().expect("arity is indexable");
        self.members.insert(index, formula);
        Ok(table)
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of functions of this arity: `2^(2^n)`.
    pub fn function_count(&self) -> u128 {
        1u128 << (1u32 << self.arity)
    }

    pub fn is_full(&self) -> bool {
        self.members.len() as u128 == self.function_count()
    }

    pub fn get(&self, table: &TruthTable) -> Option<&Formula> {
        if table.arity() != self.arity {
            return None;
        }
        self.members.get(&table.index()?)
    }

    pub fn by_index(&self, index: u64) -> Option<&Formula> {
        self.members.get(&index)
    }

    /// `(table, formula)` in function index order.
    pub fn iter(&self) -> impl Iterator<Item = (TruthTable, &Formula)> + '_ {
        self.members
            .iter()
            .map(|(&i, f)| (TruthTable::from_index(self.arity, i).unwrap(), f))
    }
}

/// One canonical formula for each of the `2^(2^n)` functions of `n`
/// variables, `1 <= n <= 4`.
pub fn full_representation(arity: u32, style: Style) -> Result<FormulaSet, BooleanError> {
    check_arity(arity, 1, MAX_REPR_ARITY)?;
    let mut set = FormulaSet::new(arity)?;
    for index in 0..1u64 << (1u32 << arity) {
        let table = TruthTable::from_index(arity, index)?;
        let formula = formula_from_table(&table, style);
        let got = set.insert(formula)?;
        debug_assert_eq!(got, table);
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum SatResult {
    Sat { witness: Assignment },
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat { .. })
    }
}

/// Decides `f1 & f2` over the shared variables `x1..xn` by scanning all
/// `2^n` assignments. The witness is the lowest-index satisfying assignment.
pub fn sat_conj(f1: &Formula, f2: &Formula, arity: u32) -> Result<SatResult, BooleanError> {
    check_arity(arity, 1, MAX_ENUM_ARITY)?;
    for a in assignments(arity) {
        if f1.eval(&a)? && f2.eval(&a)? {
            return Ok(SatResult::Sat { witness: a });
        }
    }
    Ok(SatResult::Unsat)
}

impl Formula {
    /// Every variable index mentioned.
    pub fn vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::Const(_) => {}
            Formula::Var(k) => {
                out.insert(*k);
            }
            Formula::Not(c) => c.collect_vars(out),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Evaluates with values supplied by `value(k)`.
    pub fn eval_with(&self, value: &impl Fn(u32) -> bool) -> bool {
        match self {
            Formula::Const(b) => *b,
            Formula::Var(k) => value(*k),
            Formula::Not(c) => !c.eval_with(value),
            Formula::And(l, r) => l.eval_with(value) && r.eval_with(value),
            Formula::Or(l, r) => l.eval_with(value) || r.eval_with(value),
        }
    }
}

/// Decides the conjunction of `formulas` over exactly the variables they
/// mention, which need not be contiguous. Returns a satisfying valuation of
/// those variables, or `None`.
pub fn sat_sparse(formulas: &[&Formula]) -> Result<Option<BTreeMap<u32, bool>>, BooleanError> {
    let vars: Vec<u32> = formulas
        .iter()
        .flat_map(|f| f.vars())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let width = vars.len() as u32;
    check_arity(width, 0, MAX_ENUM_ARITY)?;
    for bits in 0..1u64 << width {
        let value = |k: u32| {
            let pos = vars.binary_search(&k).expect("variable was collected");
            (bits >> pos) & 1 == 1
        };
        if formulas.iter().all(|f| f.eval_with(&value)) {
            return Ok(Some(vars.iter().map(|&k| (k, value(k))).collect()));
        }
    }
    Ok(None)
}
