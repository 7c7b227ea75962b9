use super::{Algorithm, MaxSatConfig, MaxSatResult, Run};
use crate::card::Relation;
use crate::error::MaxSatError;
use crate::formula::{evaluate, Formula, Var};
use crate::sat::SolveResult;

/// Upper-bound search: block every soft clause, then require strictly fewer
/// true blockers than the best cost so far until the solver says UNSAT.
pub fn solve_linear(formula: &Formula, config: &MaxSatConfig) -> Result<MaxSatResult, MaxSatError> {
    let mut run = Run::new(formula, config, Algorithm::Linear);
    let soft: Vec<_> = formula.soft_clauses().map(|c| c.id()).collect();
    let mut blockers: Vec<Var> = Vec::with_capacity(soft.len());
    for id in soft {
        blockers.push(run.add_blocker(id)?);
    }
    let mut best = match run.sat_call()? {
        SolveResult::Sat(model) => model,
        SolveResult::Unsat(_) => return Err(MaxSatError::HardClausesUnsat),
    };
    let mut constraint = Vec::new();
    loop {
        let cost = evaluate(formula, &best.restricted(formula.num_vars()))?.soft_falsified;
        if cost == 0 {
            return run.finish(&best, 0);
        }
        run.state.lower_bound = cost;
        run.remove_clauses(&constraint);
        let lits = blockers.iter().map(|b| b.positive()).collect();
        constraint = run.add_constraint(lits, Relation::AtMost, cost - 1, run.strategy())?;
        match run.sat_call()? {
            SolveResult::Sat(model) => {
                let nu = run.true_blockers(&model);
                run.ensure(nu < cost, || format!("{nu} true blockers under bound {}", cost - 1))?;
                best = model;
            }
            SolveResult::Unsat(_) => return run.finish(&best, cost),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_util::{cnf, multiblock};
    use super::*;

    #[test]
    fn small_examples() {
        let config = MaxSatConfig::default();
        assert_eq!(solve_linear(&cnf("p cnf 2 2\n1 0\n2 0\n"), &config).unwrap().optimum, 2);
        let r = solve_linear(&cnf("p cnf 1 2\n1 0\n-1 0\n"), &config).unwrap();
        assert_eq!((r.optimum, r.cost), (1, 1));
        assert_eq!(solve_linear(&multiblock(), &config).unwrap().optimum, 9);
    }

    #[test]
    fn hard_conflict_is_reported() {
        let f = cnf("p wcnf 1 3 9\n9 1 0\n9 -1 0\n1 1 0\n");
        assert!(matches!(
            solve_linear(&f, &MaxSatConfig::default()),
            Err(MaxSatError::HardClausesUnsat)
        ));
    }
}
