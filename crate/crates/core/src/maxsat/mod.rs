//! Unsatisfiability-based MaxSAT.
//!
//! * [`solve_msu1`]: Fu & Malik's procedure. Each core gets one fresh
//!   blocking variable per soft clause and an Equals-1 constraint over them
//!   (pairwise encoding).
//! * [`solve_msu2`]: msu1 with a linear BDD AtMost-1 encoding, AtMost instead
//!   of Equals, and an AtMost-1 constraint over the blockers of every clause
//!   that received more than one.
//! * [`solve_msu3`]: collects disjoint cores first, then raises a lower bound
//!   `λ` on the number of true blockers, keeping at most one blocker per clause.
//! * [`solve_linear`]: blocks every soft clause up front and tightens an
//!   AtMost bound on the blockers until UNSAT.
//! * [`brute_force`]: exhaustive enumeration, the reference oracle.
//!
//! Hard clauses (partial MaxSAT) take part in core extraction but never
//! receive blockers. Optimum and cost count soft clauses only.

mod brute;
mod fu_malik;
mod linear;
mod msu3;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

pub use brute::{brute_force, BRUTE_FORCE_MAX_VARS};
pub use fu_malik::{solve_msu1, solve_msu2};
pub use linear::solve_linear;
pub use msu3::solve_msu3;

use crate::card::{self, CardConstraint, Relation, Strategy};
use crate::error::{MaxSatError, SatError};
use crate::formula::{
    evaluate, ClauseId, ClauseTag, Formula, Lit, Model, Var, CLAUSE_OVERHEAD_BYTES, LITERAL_BYTES,
};
use crate::sat::{self, SolveResult, SolverConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Msu1,
    Msu2,
    Msu3,
    Linear,
    Brute,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Msu1,
        Algorithm::Msu2,
        Algorithm::Msu3,
        Algorithm::Linear,
        Algorithm::Brute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Msu1 => "msu1",
            Algorithm::Msu2 => "msu2",
            Algorithm::Msu3 => "msu3",
            Algorithm::Linear => "linear",
            Algorithm::Brute => "brute",
        }
    }

    /// Encoding used when the configuration does not override it.
    pub fn default_strategy(self) -> Strategy {
        match self {
            Algorithm::Msu1 => Strategy::Pairwise,
            _ => Strategy::Bdd,
        }
    }

    /// Cardinality mode used when the configuration does not override it.
    pub fn default_card_mode(self) -> CardMode {
        match self {
            Algorithm::Msu1 => CardMode::Equals,
            _ => CardMode::AtMost,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

/// Whether core constraints are `Σ b = k` or only `Σ b ≤ k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CardMode {
    Equals,
    AtMost,
}

impl CardMode {
    fn relation(self) -> Relation {
        match self {
            CardMode::Equals => Relation::Equals,
            CardMode::AtMost => Relation::AtMost,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaxSatConfig {
    /// Overrides the algorithm's default encoding.
    pub encoding: Option<Strategy>,
    /// Overrides the algorithm's default cardinality mode.
    pub card_mode: Option<CardMode>,
    pub sat: SolverConfig,
    pub timeout: Option<Duration>,
    /// Total conflicts allowed across all SAT calls; exceeding it is a timeout.
    pub conflict_limit: Option<u64>,
    /// Cap on the accounted clause-database size, in bytes.
    pub mem_limit_bytes: Option<usize>,
    /// Check the algorithm invariants on every run and fail on violation.
    pub check_invariants: bool,
}

impl Default for MaxSatConfig {
    fn default() -> Self {
        MaxSatConfig {
            encoding: None,
            card_mode: None,
            sat: SolverConfig::default(),
            timeout: None,
            conflict_limit: None,
            mem_limit_bytes: None,
            check_invariants: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MaxSatStats {
    /// SAT calls made by the core-guided loop (one per iteration).
    pub iterations: usize,
    pub cores_found: usize,
    pub total_blockers: usize,
    /// Auxiliary clauses emitted over the whole run.
    pub encoded_clauses: usize,
    pub sat_calls: usize,
    /// Conflicts summed over all SAT calls.
    pub conflicts: u64,
    /// Per-clause AtMost-1 constraints emitted (msu2).
    pub clause_constraints: usize,
    pub max_blockers_per_clause: usize,
    /// Final lower bound `λ` (msu3) or bound of the last SAT call.
    pub lower_bound: usize,
    /// Largest accounted clause-database size seen before a SAT call.
    pub peak_bytes: usize,
    pub wall_time: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxSatResult {
    /// Satisfied soft clauses.
    pub optimum: usize,
    /// Falsified soft clauses.
    pub cost: usize,
    /// Witness over the input formula's variables.
    pub model: Model,
    pub stats: MaxSatStats,
}

/// Working state of a core-guided run.
#[derive(Clone, Debug, Default)]
pub struct AlgorithmState {
    /// Working formula; blockers are attached to its soft clauses.
    pub working: Formula,
    /// Every blocking variable, in creation order.
    pub all_blockers: Vec<Var>,
    /// Owner clause of each blocking variable.
    pub blocker_owner: BTreeMap<Var, ClauseId>,
    /// Disjoint cores collected by msu3's first phase.
    pub disjoint_cores: Vec<Vec<ClauseId>>,
    pub lower_bound: usize,
    pub iteration: usize,
}

/// Dispatches to the requested algorithm.
pub fn solve(
    formula: &Formula,
    algorithm: Algorithm,
    config: &MaxSatConfig,
) -> Result<MaxSatResult, MaxSatError> {
    match algorithm {
        Algorithm::Msu1 => solve_msu1(formula, config),
        Algorithm::Msu2 => solve_msu2(formula, config),
        Algorithm::Msu3 => solve_msu3(formula, config),
        Algorithm::Linear => solve_linear(formula, config),
        Algorithm::Brute => brute_force(formula),
    }
}

// lower estimate of an encoded clause's width, used before materializing
const PREDICTED_CLAUSE_WIDTH: usize = 2;

/// Shared machinery of the SAT-based algorithms.
pub(crate) struct Run<'a> {
    original: &'a Formula,
    config: &'a MaxSatConfig,
    pub state: AlgorithmState,
    pub stats: MaxSatStats,
    start: Instant,
    deadline: Option<Instant>,
    strategy: Strategy,
    mode: CardMode,
}

impl<'a> Run<'a> {
    pub fn new(original: &'a Formula, config: &'a MaxSatConfig, algorithm: Algorithm) -> Self {
        let start = Instant::now();
        Run {
            original,
            config,
            state: AlgorithmState {
                working: original.clone(),
                ..AlgorithmState::default()
            },
            stats: MaxSatStats::default(),
            start,
            deadline: config.timeout.map(|t| start + t),
            strategy: config.encoding.unwrap_or(algorithm.default_strategy()),
            mode: config.card_mode.unwrap_or(algorithm.default_card_mode()),
        }
    }

    pub fn mode(&self) -> CardMode {
        self.mode
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn num_soft(&self) -> usize {
        self.original.num_soft()
    }

    fn check_memory(&self, needed: usize) -> Result<(), MaxSatError> {
        match self.config.mem_limit_bytes {
            Some(limit) if needed > limit => Err(MaxSatError::MemoryBudget { needed, limit }),
            _ => Ok(()),
        }
    }

    /// Solves the working formula, tracking all soft and hard clauses.
    pub fn sat_call(&mut self) -> Result<SolveResult, MaxSatError> {
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(MaxSatError::Timeout);
        }
        let bytes = self.state.working.estimated_bytes();
        self.stats.peak_bytes = self.stats.peak_bytes.max(bytes);
        self.check_memory(bytes)?;
        let tracked: Vec<ClauseId> = self
            .state
            .working
            .clauses()
            .filter(|c| c.tag() != ClauseTag::Auxiliary)
            .map(|c| c.id())
            .collect();
        let mut sat_config = self.config.sat.clone();
        sat_config.deadline = match (sat_config.deadline, self.deadline) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        if let Some(limit) = self.config.conflict_limit {
            let remaining = limit.saturating_sub(self.stats.conflicts);
            if remaining == 0 {
                return Err(MaxSatError::Timeout);
            }
            sat_config.conflict_budget = Some(sat_config.conflict_budget.map_or(remaining, |b| b.min(remaining)));
        }
        self.stats.sat_calls += 1;
        self.state.iteration += 1;
        match sat::solve_with_stats(&self.state.working, &tracked, &sat_config) {
            Ok((result, engine)) => {
                self.stats.conflicts += engine.conflicts;
                if let SolveResult::Unsat(_) = result {
                    self.stats.cores_found += 1;
                }
                Ok(result)
            }
            Err(SatError::Indeterminate)
                if self.config.conflict_limit.is_some()
                    || self.deadline.is_some_and(|d| Instant::now() >= d) =>
            {
                if let Some(limit) = self.config.conflict_limit {
                    self.stats.conflicts = self.stats.conflicts.max(limit);
                }
                Err(MaxSatError::Timeout)
            }
            Err(e) => Err(e.into()),
        }
    }

    /// Soft clauses of a core, or `HardClausesUnsat` if there are none.
    pub fn soft_part(&self, core: &[ClauseId]) -> Result<Vec<ClauseId>, MaxSatError> {
        let soft: Vec<ClauseId> = core
            .iter()
            .copied()
            .filter(|&id| self.state.working.get(id).is_some_and(|c| c.is_soft()))
            .collect();
        if soft.is_empty() {
            return Err(MaxSatError::HardClausesUnsat);
        }
        Ok(soft)
    }

    pub fn add_blocker(&mut self, id: ClauseId) -> Result<Var, MaxSatError> {
        let b = self.state.working.fresh_var();
        self.state.working.add_blocker(id, b)?;
        self.state.all_blockers.push(b);
        self.state.blocker_owner.insert(b, id);
        self.stats.total_blockers += 1;
        let count = self.state.working.get(id).map_or(0, |c| c.blockers().len());
        self.stats.max_blockers_per_clause = self.stats.max_blockers_per_clause.max(count);
        Ok(b)
    }

    /// Encodes `Σ lits ⋈ bound` into the working formula as auxiliary clauses.
    pub fn add_constraint(
        &mut self,
        lits: Vec<Lit>,
        relation: Relation,
        bound: usize,
        strategy: Strategy,
    ) -> Result<Vec<ClauseId>, MaxSatError> {
        if lits.is_empty() {
            // Σ over nothing is 0
            return if relation.holds(0, bound) {
                Ok(Vec::new())
            } else {
                Ok(vec![self
                    .state
                    .working
                    .add_clause(Vec::new(), ClauseTag::Auxiliary)])
            };
        }
        let size = card::encoding_size(relation, lits.len(), bound, strategy)?;
        let predicted = size.clauses as usize * (CLAUSE_OVERHEAD_BYTES + PREDICTED_CLAUSE_WIDTH * LITERAL_BYTES)
            + lits.len() * LITERAL_BYTES;
        self.check_memory(self.state.working.estimated_bytes() + predicted)?;
        let constraint = CardConstraint::new(lits, relation, bound)?;
        let encoded = card::encode(&constraint, self.state.working.pool_mut(), strategy)?;
        self.stats.encoded_clauses += encoded.len();
        Ok(encoded.add_to(&mut self.state.working))
    }

    /// Core constraint over freshly added blockers, in the run's mode.
    pub fn add_core_constraint(&mut self, blockers: &[Var], bound: usize) -> Result<Vec<ClauseId>, MaxSatError> {
        let lits = blockers.iter().map(|b| b.positive()).collect();
        self.add_constraint(lits, self.mode.relation(), bound, self.strategy)
    }

    pub fn remove_clauses(&mut self, ids: &[ClauseId]) {
        for &id in ids {
            self.state.working.remove(id);
        }
    }

    pub fn ensure(&self, holds: bool, what: impl FnOnce() -> String) -> Result<(), MaxSatError> {
        if self.config.check_invariants && !holds {
            return Err(MaxSatError::InvariantViolation(what()));
        }
        Ok(())
    }

    /// Number of blocking variables set true by `model`.
    pub fn true_blockers(&self, model: &Model) -> usize {
        self.state
            .all_blockers
            .iter()
            .filter(|&&b| model.value(b) == Some(true))
            .count()
    }

    /// At most one true blocker per clause.
    pub fn check_one_true_blocker_per_clause(&self, model: &Model) -> Result<(), MaxSatError> {
        let mut per_clause: BTreeMap<ClauseId, usize> = BTreeMap::new();
        for (&b, &id) in &self.state.blocker_owner {
            if model.value(b) == Some(true) {
                *per_clause.entry(id).or_default() += 1;
            }
        }
        match per_clause.iter().find(|(_, &n)| n > 1) {
            Some((id, n)) => self.ensure(false, || format!("clause {id} has {n} true blockers")),
            None => Ok(()),
        }
    }

    /// Verifies the witness against the input formula and packages the result.
    /// `claimed_cost` is what the algorithm derived from its blockers.
    pub fn finish(mut self, model: &Model, claimed_cost: usize) -> Result<MaxSatResult, MaxSatError> {
        let model = model.restricted(self.original.num_vars());
        let eval = evaluate(self.original, &model)?;
        if eval.hard_falsified > 0 {
            return Err(MaxSatError::InvariantViolation(format!(
                "witness falsifies {} hard clauses",
                eval.hard_falsified
            )));
        }
        if eval.soft_falsified != claimed_cost {
            return Err(MaxSatError::InvariantViolation(format!(
                "witness falsifies {} soft clauses, algorithm claims {}",
                eval.soft_falsified, claimed_cost
            )));
        }
        self.stats.iterations = self.state.iteration;
        self.stats.lower_bound = self.state.lower_bound;
        self.stats.wall_time = self.start.elapsed();
        let num_soft = self.num_soft();
        Ok(MaxSatResult {
            optimum: num_soft - eval.soft_falsified,
            cost: eval.soft_falsified,
            model,
            stats: self.stats,
        })
    }
}
