//! SAT solving of a [`Formula`] with unsatisfiable-core extraction.
//!
//! Every tracked clause `ω` is loaded as `ω ∨ ¬s` for a fresh selector `s`
//! and the search runs under the assumptions `s = true`. On UNSAT the failed
//! assumptions name the core. Selectors live only inside the engine.

mod engine;
mod heap;

use std::collections::BTreeSet;
use std::time::Instant;

pub use engine::{Answer, ELit, Engine, EngineStats};

use crate::error::SatError;
use crate::formula::{ClauseId, Formula, Lit, Model};

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Conflicts before the first restart.
    pub restart_first: u64,
    /// Geometric growth of the restart interval.
    pub restart_inc: f64,
    pub var_decay: f64,
    pub clause_decay: f64,
    /// Probability of a random decision; draws come from a generator seeded with `seed`.
    pub random_var_freq: f64,
    pub seed: u64,
    pub learnt_size_factor: f64,
    pub learnt_size_inc: f64,
    pub min_learnts: usize,
    /// Conflicts allowed per solve call before giving up.
    pub conflict_budget: Option<u64>,
    pub deadline: Option<Instant>,
    /// Shrink every core to a deletion-minimal one before returning it.
    pub core_minimize: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            restart_first: 100,
            restart_inc: 1.5,
            var_decay: 0.95,
            clause_decay: 0.999,
            random_var_freq: 0.0,
            seed: 0,
            learnt_size_factor: 1.0 / 3.0,
            learnt_size_inc: 1.1,
            min_learnts: 2000,
            conflict_budget: None,
            deadline: None,
            core_minimize: false,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> SolverConfig {
        SolverConfig {
            seed,
            ..SolverConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Sat(Model),
    /// Tracked clause ids, ascending, whose union with all untracked clauses
    /// is unsatisfiable.
    Unsat(Vec<ClauseId>),
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            SolveResult::Sat(m) => Some(m),
            SolveResult::Unsat(_) => None,
        }
    }

    pub fn core(&self) -> Option<&[ClauseId]> {
        match self {
            SolveResult::Sat(_) => None,
            SolveResult::Unsat(c) => Some(c),
        }
    }
}

fn to_engine(l: Lit) -> ELit {
    ELit::new(l.var().index() - 1, l.is_positive())
}

fn tracked_set(formula: &Formula, tracked: &[ClauseId]) -> Result<BTreeSet<ClauseId>, SatError> {
    let mut set = BTreeSet::new();
    for &id in tracked {
        if !formula.contains(id) {
            return Err(SatError::UnknownTracked(id));
        }
        set.insert(id);
    }
    Ok(set)
}

/// Loads the selected clauses into a fresh engine and solves once.
fn run(
    formula: &Formula,
    tracked: &BTreeSet<ClauseId>,
    include: &dyn Fn(ClauseId) -> bool,
    config: &SolverConfig,
) -> Result<(SolveResult, EngineStats), SatError> {
    let mut engine = Engine::new(config.clone());
    let num_vars = formula.num_vars();
    engine.ensure_vars(num_vars);
    let mut selectors: Vec<(ELit, ClauseId)> = Vec::with_capacity(tracked.len());
    let mut lits: Vec<ELit> = Vec::new();
    for clause in formula.clauses() {
        let id = clause.id();
        if !include(id) {
            continue;
        }
        lits.clear();
        lits.extend(clause.working_literals().map(to_engine));
        if tracked.contains(&id) {
            let s = ELit::new(engine.new_var(), true);
            lits.push(!s);
            selectors.push((s, id));
        }
        engine.add_clause(&lits);
    }
    let assumptions: Vec<ELit> = selectors.iter().map(|&(s, _)| s).collect();
    let answer = engine.solve(&assumptions, config.deadline);
    let result = match answer {
        Answer::Sat => {
            let values = (0..num_vars).map(|v| engine.model_value(v)).collect();
            SolveResult::Sat(Model::new(values))
        }
        Answer::Unsat(failed) => {
            let failed: BTreeSet<ELit> = failed.into_iter().collect();
            let core = selectors
                .iter()
                .filter(|(s, _)| failed.contains(s))
                .map(|&(_, id)| id)
                .collect();
            SolveResult::Unsat(core)
        }
        Answer::Unknown => return Err(SatError::Indeterminate),
    };
    Ok((result, engine.stats))
}

/// Decides `formula`. On UNSAT the core is drawn from `tracked`.
pub fn solve(
    formula: &Formula,
    tracked: &[ClauseId],
    config: &SolverConfig,
) -> Result<SolveResult, SatError> {
    solve_with_stats(formula, tracked, config).map(|(r, _)| r)
}

/// Like [`solve`], also returning search statistics (summed over the
/// re-solves when `core_minimize` is set).
pub fn solve_with_stats(
    formula: &Formula,
    tracked: &[ClauseId],
    config: &SolverConfig,
) -> Result<(SolveResult, EngineStats), SatError> {
    let set = tracked_set(formula, tracked)?;
    let (result, mut stats) = run(formula, &set, &|_| true, config)?;
    match result {
        SolveResult::Unsat(core) if config.core_minimize => {
            let (core, extra) = shrink(formula, &set, core, config)?;
            stats.conflicts += extra.conflicts;
            stats.decisions += extra.decisions;
            stats.propagations += extra.propagations;
            Ok((SolveResult::Unsat(core), stats))
        }
        other => Ok((other, stats)),
    }
}

/// Reduces a core to a deletion-minimal one: dropping any single returned
/// clause makes it satisfiable together with the untracked clauses.
pub fn minimize_core(
    formula: &Formula,
    tracked: &[ClauseId],
    core: &[ClauseId],
    config: &SolverConfig,
) -> Result<Vec<ClauseId>, SatError> {
    let set = tracked_set(formula, tracked)?;
    if let Some(&stray) = core.iter().find(|id| !set.contains(id)) {
        return Err(SatError::UnknownTracked(stray));
    }
    let core: Vec<ClauseId> = core.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    shrink(formula, &set, core, config).map(|(c, _)| c)
}

fn shrink(
    formula: &Formula,
    tracked: &BTreeSet<ClauseId>,
    core: Vec<ClauseId>,
    config: &SolverConfig,
) -> Result<(Vec<ClauseId>, EngineStats), SatError> {
    let mut total = EngineStats::default();
    let mut add = |s: EngineStats| {
        total.conflicts += s.conflicts;
        total.decisions += s.decisions;
        total.propagations += s.propagations;
    };
    let mut current: BTreeSet<ClauseId> = core.into_iter().collect();
    let (check, stats) = solve_subset(formula, tracked, &current, config)?;
    add(stats);
    match check {
        SolveResult::Sat(_) => return Err(SatError::InvalidCore),
        SolveResult::Unsat(refined) => current = refined.into_iter().collect(),
    }
    let candidates: Vec<ClauseId> = current.iter().copied().collect();
    for id in candidates {
        if !current.contains(&id) {
            continue;
        }
        current.remove(&id);
        let (result, stats) = solve_subset(formula, tracked, &current, config)?;
        add(stats);
        match result {
            SolveResult::Sat(_) => {
                current.insert(id);
            }
            SolveResult::Unsat(refined) => current = refined.into_iter().collect(),
        }
    }
    Ok((current.into_iter().collect(), total))
}

/// Solves `subset ∪ untracked`, tracking `subset`.
fn solve_subset(
    formula: &Formula,
    tracked: &BTreeSet<ClauseId>,
    subset: &BTreeSet<ClauseId>,
    config: &SolverConfig,
) -> Result<(SolveResult, EngineStats), SatError> {
    run(
        formula,
        subset,
        &|id| !tracked.contains(&id) || subset.contains(&id),
        config,
    )
}
