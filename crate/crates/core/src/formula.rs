//! CNF data model with tagged, id-addressed clauses and DIMACS CNF/WCNF I/O.
//!
//! Clauses keep their original literals separate from the blocking variables
//! attached by the MaxSAT algorithms. The clause handed to the SAT engine is
//! the concatenation of both (see [`Clause::working_literals`]), while
//! [`evaluate`] only ever looks at the original literals.

use std::fmt;
use std::io::{BufRead, Write};
use std::ops::Not;

use crate::error::{FormulaError, ParseError};

/// A propositional variable, 1-based like DIMACS.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Panics on index 0.
    pub fn new(index: u32) -> Var {
        assert!(index >= 1, "variable indices start at 1");
        Var(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn positive(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn negative(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A literal: a variable with a polarity. `true` polarity is the positive literal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    var: Var,
    positive: bool,
}

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit { var, positive }
    }

    /// Builds a literal from a non-zero DIMACS integer.
    pub fn from_dimacs(value: i64) -> Option<Lit> {
        if value == 0 || value.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Lit::new(Var(value.unsigned_abs() as u32), value > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var.0 as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    /// Truth value of the literal under `model`.
    pub fn eval(self, model: &Model) -> Option<bool> {
        model.value(self.var).map(|v| v == self.positive)
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Stable clause identifier, unique within a [`Formula`] and never reused.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClauseId(u32);

impl ClauseId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClauseTag {
    /// Counted by the MaxSAT objective; may receive blocking variables.
    Soft,
    /// Must be satisfied; never blocked.
    Hard,
    /// Emitted by a cardinality encoding; never blocked, never counted.
    Auxiliary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    id: ClauseId,
    literals: Vec<Lit>,
    tag: ClauseTag,
    blockers: Vec<Var>,
}

impl Clause {
    pub fn id(&self) -> ClauseId {
        self.id
    }

    /// The original literals, without blockers.
    pub fn literals(&self) -> &[Lit] {
        &self.literals
    }

    pub fn tag(&self) -> ClauseTag {
        self.tag
    }

    pub fn blockers(&self) -> &[Var] {
        &self.blockers
    }

    pub fn is_soft(&self) -> bool {
        self.tag == ClauseTag::Soft
    }

    /// Original literals followed by the positive literal of every blocker.
    pub fn working_literals(&self) -> impl Iterator<Item = Lit> + '_ {
        self.literals
            .iter()
            .copied()
            .chain(self.blockers.iter().map(|b| b.positive()))
    }

    pub fn working_len(&self) -> usize {
        self.literals.len() + self.blockers.len()
    }

    /// Satisfied by one of the original literals (blockers ignored).
    pub fn satisfied_by(&self, model: &Model) -> bool {
        self.literals.iter().any(|&l| l.eval(model) == Some(true))
    }
}

/// Hands out dense variable indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarPool {
    allocated: u32,
}

impl VarPool {
    pub fn new() -> VarPool {
        VarPool::default()
    }

    pub fn with_vars(count: u32) -> VarPool {
        VarPool { allocated: count }
    }

    pub fn fresh(&mut self) -> Var {
        self.allocated += 1;
        Var(self.allocated)
    }

    /// Grows the pool so that `var` is allocated.
    pub fn reserve(&mut self, var: Var) {
        self.allocated = self.allocated.max(var.0);
    }

    pub fn contains(&self, var: Var) -> bool {
        var.0 <= self.allocated
    }

    pub fn len(&self) -> u32 {
        self.allocated
    }

    pub fn is_empty(&self) -> bool {
        self.allocated == 0
    }
}

/// Approximate heap footprint of one clause stored in a [`Formula`] and mirrored
/// in the SAT engine, excluding literal storage. Used for memory-budget accounting.
pub const CLAUSE_OVERHEAD_BYTES: usize = 160;
/// Bytes charged per literal (formula copy, engine copy, watch entries).
pub const LITERAL_BYTES: usize = 16;

/// An id-indexed multiset of tagged clauses over a variable pool.
#[derive(Clone, Debug, Default)]
pub struct Formula {
    slots: Vec<Option<Clause>>,
    live: usize,
    pool: VarPool,
    num_original: usize,
    warnings: Vec<String>,
}

impl Formula {
    pub fn new() -> Formula {
        Formula::default()
    }

    pub fn with_vars(count: u32) -> Formula {
        Formula {
            pool: VarPool::with_vars(count),
            ..Formula::default()
        }
    }

    /// Adds a clause, growing the pool to cover its variables. Soft and hard
    /// clauses count towards `num_original`.
    pub fn add_clause(&mut self, literals: Vec<Lit>, tag: ClauseTag) -> ClauseId {
        for l in &literals {
            self.pool.reserve(l.var());
        }
        let id = ClauseId(self.slots.len() as u32);
        self.slots.push(Some(Clause {
            id,
            literals,
            tag,
            blockers: Vec::new(),
        }));
        self.live += 1;
        if tag != ClauseTag::Auxiliary {
            self.num_original += 1;
        }
        id
    }

    pub fn add_soft(&mut self, literals: Vec<Lit>) -> ClauseId {
        self.add_clause(literals, ClauseTag::Soft)
    }

    pub fn add_hard(&mut self, literals: Vec<Lit>) -> ClauseId {
        self.add_clause(literals, ClauseTag::Hard)
    }

    /// Removes a clause from the working set. Its id is retired, not reused.
    /// `num_original` is unaffected: it describes the input instance.
    pub fn remove(&mut self, id: ClauseId) -> Option<Clause> {
        let removed = self.slots.get_mut(id.index()).and_then(Option::take);
        if removed.is_some() {
            self.live -= 1;
        }
        removed
    }

    /// Re-inserts a clause previously obtained from [`Formula::remove`] under its old id.
    pub fn restore(&mut self, clause: Clause) -> Result<(), FormulaError> {
        let slot = self
            .slots
            .get_mut(clause.id.index())
            .ok_or(FormulaError::UnknownClause(clause.id))?;
        if slot.is_some() {
            return Err(FormulaError::DuplicateClause(clause.id));
        }
        *slot = Some(clause);
        self.live += 1;
        Ok(())
    }

    pub fn get(&self, id: ClauseId) -> Option<&Clause> {
        self.slots.get(id.index()).and_then(Option::as_ref)
    }

    pub fn contains(&self, id: ClauseId) -> bool {
        self.get(id).is_some()
    }

    /// Appends a blocking variable to a soft clause.
    pub fn add_blocker(&mut self, id: ClauseId, blocker: Var) -> Result<(), FormulaError> {
        self.pool.reserve(blocker);
        let clause = self
            .slots
            .get_mut(id.index())
            .and_then(Option::as_mut)
            .ok_or(FormulaError::UnknownClause(id))?;
        if clause.tag != ClauseTag::Soft {
            return Err(FormulaError::NotBlockable(id));
        }
        clause.blockers.push(blocker);
        Ok(())
    }

    /// Live clauses in id order.
    pub fn clauses(&self) -> impl Iterator<Item = &Clause> + '_ {
        self.slots.iter().filter_map(Option::as_ref)
    }

    pub fn ids(&self) -> impl Iterator<Item = ClauseId> + '_ {
        self.clauses().map(Clause::id)
    }

    pub fn soft_clauses(&self) -> impl Iterator<Item = &Clause> + '_ {
        self.clauses().filter(|c| c.tag == ClauseTag::Soft)
    }

    pub fn hard_clauses(&self) -> impl Iterator<Item = &Clause> + '_ {
        self.clauses().filter(|c| c.tag == ClauseTag::Hard)
    }

    /// Number of live clauses, auxiliary included.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Number of soft and hard clauses ever added (the instance size `m`).
    pub fn num_original(&self) -> usize {
        self.num_original
    }

    pub fn num_soft(&self) -> usize {
        self.soft_clauses().count()
    }

    pub fn num_hard(&self) -> usize {
        self.hard_clauses().count()
    }

    pub fn num_vars(&self) -> u32 {
        self.pool.len()
    }

    pub fn pool(&self) -> &VarPool {
        &self.pool
    }

    pub fn pool_mut(&mut self) -> &mut VarPool {
        &mut self.pool
    }

    pub fn fresh_var(&mut self) -> Var {
        self.pool.fresh()
    }

    /// Diagnostics recorded while parsing.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Total literal occurrences over live clauses, blockers included.
    pub fn num_literals(&self) -> usize {
        self.clauses().map(Clause::working_len).sum()
    }

    /// Accounted memory of the clause database (formula plus engine mirror).
    pub fn estimated_bytes(&self) -> usize {
        self.live * CLAUSE_OVERHEAD_BYTES + self.num_literals() * LITERAL_BYTES
    }
}

/// A total assignment over variables `1..=len`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    /// `values[i]` is the value of variable `i + 1`.
    pub fn new(values: Vec<bool>) -> Model {
        Model { values }
    }

    pub fn all_false(num_vars: u32) -> Model {
        Model {
            values: vec![false; num_vars as usize],
        }
    }

    pub fn value(&self, var: Var) -> Option<bool> {
        self.values.get(var.0 as usize - 1).copied()
    }

    pub fn set(&mut self, var: Var, value: bool) {
        let i = var.0 as usize - 1;
        if i >= self.values.len() {
            self.values.resize(i + 1, false);
        }
        self.values[i] = value;
    }

    pub fn len(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// Keeps only variables `1..=num_vars`.
    pub fn restricted(&self, num_vars: u32) -> Model {
        let mut values = self.values.clone();
        values.truncate(num_vars as usize);
        Model { values }
    }

    /// Model as signed DIMACS literals.
    pub fn literals(&self) -> impl Iterator<Item = Lit> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| Lit::new(Var(i as u32 + 1), v))
    }
}

/// Clause counts of a model over the original (soft and hard) clauses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Evaluation {
    pub satisfied: usize,
    pub falsified: usize,
    pub soft_falsified: usize,
    pub hard_falsified: usize,
}

impl Evaluation {
    pub fn soft_satisfied(&self, formula: &Formula) -> usize {
        formula.num_soft() - self.soft_falsified
    }
}

/// Counts satisfied and falsified original clauses. Auxiliary clauses and
/// blockers are ignored.
pub fn evaluate(formula: &Formula, model: &Model) -> Result<Evaluation, FormulaError> {
    if model.len() < formula.num_vars() {
        return Err(FormulaError::PartialModel {
            model_vars: model.len(),
            formula_vars: formula.num_vars(),
        });
    }
    let mut eval = Evaluation::default();
    for clause in formula.clauses() {
        if clause.tag == ClauseTag::Auxiliary {
            continue;
        }
        if clause.satisfied_by(model) {
            eval.satisfied += 1;
        } else {
            eval.falsified += 1;
            match clause.tag {
                ClauseTag::Soft => eval.soft_falsified += 1,
                ClauseTag::Hard => eval.hard_falsified += 1,
                ClauseTag::Auxiliary => unreachable!(),
            }
        }
    }
    Ok(eval)
}

/// Checks every live clause, blockers and auxiliary clauses included.
pub fn satisfies_working(formula: &Formula, model: &Model) -> bool {
    formula
        .clauses()
        .all(|c| c.working_literals().any(|l| l.eval(model) == Some(true)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Header {
    Cnf { vars: u64, clauses: u64 },
    Wcnf { vars: u64, clauses: u64, top: Option<u64> },
}

/// Parses DIMACS CNF (`p cnf n m`) or WCNF (`p wcnf n m [top]`).
///
/// CNF clauses are soft. In WCNF, weight `top` marks a hard clause and weight
/// 1 a soft clause; any other weight is rejected. A `%` line (SATLIB style)
/// ends the input.
pub fn parse_dimacs<R: BufRead>(reader: R) -> Result<Formula, ParseError> {
    let mut header: Option<Header> = None;
    let mut formula = Formula::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut pending_weight: Option<u64> = None;
    let mut in_clause = false;
    let mut clause_line = 0;
    let mut max_declared: u64 = 0;
    let mut warned_overflow = false;

    for (line_no, line) in reader.lines().enumerate() {
        let line_no = line_no + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::DuplicateHeader { line: line_no });
            }
            let h = parse_header(trimmed, line_no)?;
            max_declared = match h {
                Header::Cnf { vars, .. } | Header::Wcnf { vars, .. } => vars,
            };
            if max_declared > u32::MAX as u64 {
                return Err(ParseError::MalformedHeader {
                    line: line_no,
                    reason: "variable count out of range".into(),
                });
            }
            formula.pool.reserve_count(max_declared as u32);
            header = Some(h);
            continue;
        }
        let h = header.ok_or(ParseError::MissingHeader { line: line_no })?;
        let weighted = matches!(h, Header::Wcnf { .. });
        for token in trimmed.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| ParseError::InvalidToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if weighted && !in_clause {
                if value <= 0 {
                    return Err(ParseError::InvalidToken {
                        line: line_no,
                        token: token.to_string(),
                    });
                }
                pending_weight = Some(value as u64);
                in_clause = true;
                clause_line = line_no;
                continue;
            }
            if !in_clause {
                in_clause = true;
                clause_line = line_no;
            }
            if value == 0 {
                let tag = clause_tag(h, pending_weight, clause_line)?;
                formula.add_clause(std::mem::take(&mut current), tag);
                pending_weight = None;
                in_clause = false;
                continue;
            }
            let lit = Lit::from_dimacs(value).ok_or_else(|| ParseError::InvalidToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if lit.var().0 as u64 > max_declared && !warned_overflow {
                warned_overflow = true;
                formula.warnings.push(format!(
                    "line {line_no}: variable {} exceeds declared count {max_declared}",
                    lit.var().0
                ));
            }
            current.push(lit);
        }
    }

    let h = header.ok_or(ParseError::MissingHeader { line: 0 })?;
    if in_clause {
        if weighted_header(h) && current.is_empty() && pending_weight.is_some() {
            return Err(ParseError::UnterminatedClause { line: clause_line });
        }
        formula
            .warnings
            .push(format!("line {clause_line}: last clause not terminated by 0"));
        let tag = clause_tag(h, pending_weight, clause_line)?;
        formula.add_clause(current, tag);
    }
    let (declared_vars, declared_clauses) = match h {
        Header::Cnf { vars, clauses } | Header::Wcnf { vars, clauses, .. } => (vars, clauses),
    };
    if declared_clauses != formula.num_original as u64 {
        formula.warnings.push(format!(
            "header declares {declared_clauses} clauses, found {}",
            formula.num_original
        ));
    }
    if (formula.num_vars() as u64) > declared_vars {
        formula.warnings.push(format!(
            "header declares {declared_vars} variables, found {}",
            formula.num_vars()
        ));
    }
    for w in &formula.warnings {
        log::warn!("{w}");
    }
    Ok(formula)
}

impl VarPool {
    fn reserve_count(&mut self, count: u32) {
        self.allocated = self.allocated.max(count);
    }
}

fn weighted_header(h: Header) -> bool {
    matches!(h, Header::Wcnf { .. })
}

fn clause_tag(h: Header, weight: Option<u64>, line: usize) -> Result<ClauseTag, ParseError> {
    match h {
        Header::Cnf { .. } => Ok(ClauseTag::Soft),
        Header::Wcnf { top, .. } => {
            let w = weight.ok_or(ParseError::UnterminatedClause { line })?;
            if top == Some(w) {
                Ok(ClauseTag::Hard)
            } else if w == 1 {
                Ok(ClauseTag::Soft)
            } else {
                Err(ParseError::UnsupportedWeight { line, weight: w })
            }
        }
    }
}

fn parse_header(line: &str, line_no: usize) -> Result<Header, ParseError> {
    let malformed = |reason: &str| ParseError::MalformedHeader {
        line: line_no,
        reason: reason.to_string(),
    };
    let mut fields = line.split_whitespace();
    if fields.next() != Some("p") {
        return Err(malformed("expected `p`"));
    }
    let kind = fields.next().ok_or_else(|| malformed("missing format"))?;
    let mut number = |what: &str| -> Result<u64, ParseError> {
        fields
            .next()
            .ok_or_else(|| malformed(&format!("missing {what}")))?
            .parse::<u64>()
            .map_err(|_| malformed(&format!("invalid {what}")))
    };
    let header = match kind {
        "cnf" => Header::Cnf {
            vars: number("variable count")?,
            clauses: number("clause count")?,
        },
        "wcnf" => {
            let vars = number("variable count")?;
            let clauses = number("clause count")?;
            let top = match fields.next() {
                None => None,
                Some(t) => Some(t.parse::<u64>().map_err(|_| malformed("invalid top weight"))?),
            };
            Header::Wcnf { vars, clauses, top }
        }
        other => return Err(malformed(&format!("unknown format `{other}`"))),
    };
    if fields.next().is_some() {
        return Err(malformed("trailing fields"));
    }
    Ok(header)
}

/// Parses DIMACS from an in-memory string.
pub fn parse_dimacs_str(text: &str) -> Result<Formula, ParseError> {
    parse_dimacs(text.as_bytes())
}

/// Writes the soft and hard clauses (original literals only).
///
/// Soft-only formulas are written as `p cnf`; otherwise `p wcnf` with
/// `top = #soft + 1`, hard clauses carrying weight `top`.
pub fn write_dimacs<W: Write>(formula: &Formula, mut out: W) -> std::io::Result<()> {
    let originals: Vec<&Clause> = formula
        .clauses()
        .filter(|c| c.tag != ClauseTag::Auxiliary)
        .collect();
    let num_soft = originals.iter().filter(|c| c.is_soft()).count();
    let partial = originals.len() > num_soft;
    let top = num_soft as u64 + 1;
    if partial {
        writeln!(out, "p wcnf {} {} {}", formula.num_vars(), originals.len(), top)?;
    } else {
        writeln!(out, "p cnf {} {}", formula.num_vars(), originals.len())?;
    }
    let mut line = String::new();
    for clause in originals {
        line.clear();
        if partial {
            let w = if clause.is_soft() { 1 } else { top };
            line.push_str(&w.to_string());
            line.push(' ');
        }
        for l in &clause.literals {
            line.push_str(&l.to_dimacs().to_string());
            line.push(' ');
        }
        line.push('0');
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn write_dimacs_string(formula: &Formula) -> String {
    let mut buf = Vec::new();
    write_dimacs(formula, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("DIMACS output is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const MULTIBLOCK: &str = "c x1=1 y1=2 x2=3 y2=4 z1=5 z2=6
p cnf 6 12
1 0
-1 -2 0
2 0
-1 -5 0
-2 -5 0
3 0
-3 -4 0
4 0
-3 -5 0
-4 -5 0
5 6 0
5 -6 0
";

    #[test]
    fn minimal_cnf() {
        let f = parse_dimacs_str("p cnf 1 1\n1 0\n").unwrap();
        assert_eq!(f.num_vars(), 1);
        assert_eq!(f.num_original(), 1);
        let c = f.clauses().next().unwrap();
        assert_eq!(c.tag(), ClauseTag::Soft);
        assert_eq!(c.literals(), &[Var::new(1).positive()]);
        assert!(f.warnings().is_empty());
    }

    #[test]
    fn multiblock_instance_shape() {
        let f = parse_dimacs_str(MULTIBLOCK).unwrap();
        assert_eq!(f.num_vars(), 6);
        assert_eq!(f.num_original(), 12);
        assert_eq!(f.num_soft(), 12);
    }

    #[test]
    fn wcnf_hard_and_soft() {
        let f = parse_dimacs_str("p wcnf 2 2 3\n3 1 0\n1 -1 2 0\n").unwrap();
        assert_eq!(f.num_hard(), 1);
        assert_eq!(f.num_soft(), 1);
        let soft = f.soft_clauses().next().unwrap();
        assert_eq!(soft.literals().len(), 2);
    }

    #[test]
    fn wcnf_rejects_real_weights() {
        let err = parse_dimacs_str("p wcnf 2 2 10\n10 1 0\n4 -1 2 0\n").unwrap_err();
        assert!(matches!(err, ParseError::UnsupportedWeight { weight: 4, .. }));
    }

    #[test]
    fn malformed_headers() {
        for text in ["p cnf x 1\n1 0\n", "p dnf 1 1\n1 0\n", "p cnf 1\n", "p cnf 1 1 7\n"] {
            assert!(
                matches!(parse_dimacs_str(text), Err(ParseError::MalformedHeader { .. })),
                "{text:?}"
            );
        }
        assert!(matches!(
            parse_dimacs_str("1 2 0\n"),
            Err(ParseError::MissingHeader { .. })
        ));
        assert!(matches!(
            parse_dimacs_str("p cnf 1 1\n1 a 0\n"),
            Err(ParseError::InvalidToken { .. })
        ));
    }

    #[test]
    fn header_mismatch_is_reconciled() {
        let f = parse_dimacs_str("p cnf 1 1\n1 3 0\n-2 0\n").unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.num_original(), 2);
        assert_eq!(f.warnings().len(), 3);
    }

    #[test]
    fn clauses_across_lines_and_empty_clause() {
        let f = parse_dimacs_str("p cnf 3 3\n1 2\n 3 0 -1 0\n0\n%\n0\n").unwrap();
        let lens: Vec<usize> = f.clauses().map(|c| c.literals().len()).collect();
        assert_eq!(lens, vec![3, 1, 0]);
    }

    #[test]
    fn unterminated_last_clause() {
        let f = parse_dimacs_str("p cnf 2 1\n1 -2").unwrap();
        assert_eq!(f.num_original(), 1);
        assert!(!f.warnings().is_empty());
    }

    #[test]
    fn write_empty_and_single() {
        assert_eq!(write_dimacs_string(&Formula::new()), "p cnf 0 0\n");
        let f = parse_dimacs_str("p cnf 2 1\n1 -2 0\n").unwrap();
        assert_eq!(write_dimacs_string(&f), "p cnf 2 1\n1 -2 0\n");
    }

    #[test]
    fn write_partial_round_trip() {
        let f = parse_dimacs_str("p wcnf 2 2 3\n3 1 0\n1 -1 2 0\n").unwrap();
        let text = write_dimacs_string(&f);
        assert_eq!(text, "p wcnf 2 2 2\n2 1 0\n1 -1 2 0\n");
        let g = parse_dimacs_str(&text).unwrap();
        assert_eq!(g.num_hard(), 1);
        assert_eq!(g.num_soft(), 1);
    }

    #[test]
    fn evaluate_examples() {
        let f = parse_dimacs_str("p cnf 1 1\n1 0\n").unwrap();
        let e = evaluate(&f, &Model::new(vec![true])).unwrap();
        assert_eq!((e.satisfied, e.falsified), (1, 0));

        // x1=1 y1=0 x2=1 y2=0 z1=0 z2=0 falsifies (y1), (y2) and (z1 v z2).
        let f = parse_dimacs_str(MULTIBLOCK).unwrap();
        let m = Model::new(vec![true, false, true, false, false, false]);
        let e = evaluate(&f, &m).unwrap();
        assert_eq!((e.satisfied, e.falsified), (9, 3));
    }

    #[test]
    fn evaluate_rejects_partial_model() {
        let f = parse_dimacs_str("p cnf 2 1\n1 2 0\n").unwrap();
        assert!(matches!(
            evaluate(&f, &Model::new(vec![true])),
            Err(FormulaError::PartialModel { .. })
        ));
    }

    #[test]
    fn blockers_are_ignored_by_evaluate() {
        let mut f = Formula::new();
        let id = f.add_soft(vec![Var::new(1).positive()]);
        let aux = f.add_clause(vec![Var::new(1).negative()], ClauseTag::Auxiliary);
        let b = f.fresh_var();
        f.add_blocker(id, b).unwrap();
        assert!(matches!(f.add_blocker(aux, b), Err(FormulaError::NotBlockable(_))));
        let m = Model::new(vec![false, true]);
        assert!(satisfies_working(&f, &m));
        let e = evaluate(&f, &m).unwrap();
        assert_eq!((e.satisfied, e.falsified), (0, 1));
        assert_eq!(f.num_original(), 1);
    }

    #[test]
    fn ids_stay_unique_after_removal() {
        let mut f = Formula::new();
        let a = f.add_soft(vec![Var::new(1).positive()]);
        let b = f.add_soft(vec![Var::new(1).negative()]);
        let removed = f.remove(a).unwrap();
        let c = f.add_soft(vec![Var::new(2).positive()]);
        assert_ne!(a, c);
        assert_ne!(b, c);
        assert!(f.restore(removed).is_ok());
        assert_eq!(f.ids().collect::<Vec<_>>(), vec![a, b, c]);
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn literal_negation_is_involution() {
        let l = Lit::from_dimacs(-7).unwrap();
        assert_eq!(!!l, l);
        assert_ne!(!l, l);
        assert_eq!((!l).to_dimacs(), 7);
        assert!(Lit::from_dimacs(0).is_none());
    }
}
