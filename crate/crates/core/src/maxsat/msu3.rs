use super::{Algorithm, MaxSatConfig, MaxSatResult, Run};
use crate::error::MaxSatError;
use crate::formula::{ClauseId, Formula, Var};
use crate::sat::SolveResult;

/// msu3: disjoint cores first, then a single cardinality constraint over all
/// blockers whose bound `λ` grows by one per core.
pub fn solve_msu3(formula: &Formula, config: &MaxSatConfig) -> Result<MaxSatResult, MaxSatError> {
    let mut run = Run::new(formula, config, Algorithm::Msu3);
    let num_soft = run.num_soft();

    // phase 1: remove the soft part of each core until the rest is satisfiable
    let mut removed = Vec::new();
    loop {
        match run.sat_call()? {
            SolveResult::Sat(_) => break,
            SolveResult::Unsat(core) => {
                let soft = run.soft_part(&core)?;
                for &id in &soft {
                    removed.extend(run.state.working.remove(id));
                }
                run.state.disjoint_cores.push(soft);
            }
        }
    }
    for clause in removed {
        run.state.working.restore(clause)?;
    }
    let core_clauses: Vec<ClauseId> = run.state.disjoint_cores.iter().flatten().copied().collect();
    let mut blockers: Vec<Var> = Vec::with_capacity(core_clauses.len());
    for id in core_clauses {
        blockers.push(run.add_blocker(id)?);
    }
    run.state.lower_bound = run.state.disjoint_cores.len();

    // phase 2
    let mut constraint = run.add_core_constraint(&blockers, run.state.lower_bound)?;
    loop {
        let lambda = run.state.lower_bound;
        match run.sat_call()? {
            SolveResult::Sat(model) => {
                run.ensure(run.stats.total_blockers <= num_soft, || {
                    format!("{} blockers for {num_soft} soft clauses", run.stats.total_blockers)
                })?;
                run.ensure(run.stats.max_blockers_per_clause <= 1, || {
                    "clause with more than one blocker".to_string()
                })?;
                let nu = run.true_blockers(&model);
                run.ensure(nu <= lambda, || format!("{nu} true blockers exceed λ = {lambda}"))?;
                return run.finish(&model, lambda);
            }
            SolveResult::Unsat(core) => {
                let soft = run.soft_part(&core)?;
                run.state.lower_bound += 1;
                let mut grew = false;
                for id in soft {
                    if run.state.working.get(id).is_some_and(|c| c.blockers().is_empty()) {
                        blockers.push(run.add_blocker(id)?);
                        grew = true;
                    }
                }
                run.ensure(grew || run.state.lower_bound <= blockers.len(), || {
                    format!("λ = {} exceeds {} blockers", run.state.lower_bound, blockers.len())
                })?;
                run.remove_clauses(&constraint);
                constraint = run.add_core_constraint(&blockers, run.state.lower_bound)?;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_util::{cnf, multiblock};
    use super::*;
    use crate::card::Strategy;
    use crate::maxsat::CardMode;

    #[test]
    fn two_contradictions_give_two_disjoint_cores() {
        let f = cnf("p cnf 2 4\n1 0\n-1 0\n2 0\n-2 0\n");
        let r = solve_msu3(&f, &MaxSatConfig::default()).unwrap();
        assert_eq!(r.optimum, 2);
        assert_eq!(r.stats.lower_bound, 2);
        assert_eq!(r.stats.cores_found, 2);
        assert_eq!(r.stats.total_blockers, 4);
    }

    #[test]
    fn example_formula() {
        let r = solve_msu3(&multiblock(), &MaxSatConfig::default()).unwrap();
        assert_eq!(r.optimum, 9);
        assert!(r.stats.total_blockers <= 12);
        assert!(r.stats.max_blockers_per_clause <= 1);
    }

    #[test]
    fn equals_mode_and_pairwise_fallback() {
        for (encoding, mode) in [(Strategy::Bdd, CardMode::Equals), (Strategy::Auto, CardMode::AtMost)] {
            let config = MaxSatConfig {
                encoding: Some(encoding),
                card_mode: Some(mode),
                ..MaxSatConfig::default()
            };
            assert_eq!(solve_msu3(&multiblock(), &config).unwrap().optimum, 9);
        }
    }

    #[test]
    fn satisfiable_input_skips_encoding() {
        let f = cnf("p cnf 2 2\n1 2 0\n-1 0\n");
        let r = solve_msu3(&f, &MaxSatConfig::default()).unwrap();
        assert_eq!((r.optimum, r.stats.encoded_clauses, r.stats.total_blockers), (2, 0, 0));
    }

    #[test]
    fn hard_clauses_are_kept_between_cores() {
        let f = cnf("p wcnf 2 4 9\n9 -1 2 0\n1 1 0\n1 -2 0\n1 2 0\n");
        let r = solve_msu3(&f, &MaxSatConfig::default()).unwrap();
        assert_eq!(r.cost, 1);
    }

    #[test]
    fn hard_conflict_is_reported() {
        let f = cnf("p wcnf 1 2 9\n9 1 0\n9 -1 0\n");
        assert!(matches!(
            solve_msu3(&f, &MaxSatConfig::default()),
            Err(MaxSatError::HardClausesUnsat)
        ));
    }
}
