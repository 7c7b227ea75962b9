use std::collections::BTreeMap;

use super::{Algorithm, CardMode, MaxSatConfig, MaxSatResult, Run};
use crate::card::Relation;
use crate::error::MaxSatError;
use crate::formula::{ClauseId, Formula};
use crate::sat::SolveResult;

/// msu1: Fu & Malik with pairwise Equals-1 core constraints.
pub fn solve_msu1(formula: &Formula, config: &MaxSatConfig) -> Result<MaxSatResult, MaxSatError> {
    run(formula, config, Algorithm::Msu1, false)
}

/// msu2: msu1 with BDD AtMost-1 core constraints and per-clause AtMost-1
/// constraints over the blockers of each clause.
pub fn solve_msu2(formula: &Formula, config: &MaxSatConfig) -> Result<MaxSatResult, MaxSatError> {
    run(formula, config, Algorithm::Msu2, true)
}

/// Largest number of iterations the loop may take on `formula`.
pub(super) fn iteration_bound(formula: &Formula) -> usize {
    let plain = formula.num_hard() == 0 && formula.soft_clauses().all(|c| !c.literals().is_empty());
    if plain {
        // a random assignment satisfies half the non-empty clauses on average
        formula.num_soft() / 2 + 1
    } else {
        formula.num_soft() + 1
    }
}

fn run(
    formula: &Formula,
    config: &MaxSatConfig,
    algorithm: Algorithm,
    clause_constraints: bool,
) -> Result<MaxSatResult, MaxSatError> {
    let mut run = Run::new(formula, config, algorithm);
    let bound = iteration_bound(formula);
    let mut per_clause: BTreeMap<ClauseId, Vec<ClauseId>> = BTreeMap::new();
    loop {
        let j = run.state.iteration + 1;
        run.ensure(j <= bound, || format!("iteration {j} exceeds bound {bound}"))?;
        match run.sat_call()? {
            SolveResult::Sat(model) => {
                let nu = run.true_blockers(&model);
                match run.mode() {
                    CardMode::Equals => run.ensure(nu == j - 1, || {
                        format!("{nu} true blockers at iteration {j}, expected {}", j - 1)
                    })?,
                    CardMode::AtMost => run.ensure(nu < j, || {
                        format!("{nu} true blockers at iteration {j}, expected at most {}", j - 1)
                    })?,
                }
                run.check_one_true_blocker_per_clause(&model)?;
                run.state.lower_bound = j - 1;
                return run.finish(&model, nu);
            }
            SolveResult::Unsat(core) => {
                let soft = run.soft_part(&core)?;
                let mut fresh = Vec::with_capacity(soft.len());
                for &id in &soft {
                    fresh.push(run.add_blocker(id)?);
                }
                run.add_core_constraint(&fresh, 1)?;
                if clause_constraints {
                    for &id in &soft {
                        let blockers = run.state.working.get(id).map(|c| c.blockers().to_vec()).unwrap_or_default();
                        if blockers.len() < 2 {
                            continue;
                        }
                        if let Some(old) = per_clause.remove(&id) {
                            run.remove_clauses(&old);
                        }
                        let lits = blockers.iter().map(|b| b.positive()).collect();
                        let ids = run.add_constraint(lits, Relation::AtMost, 1, run.strategy())?;
                        run.stats.clause_constraints += 1;
                        per_clause.insert(id, ids);
                    }
                }
            }
        }
    }
}
