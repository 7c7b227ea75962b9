use std::time::Instant;

use super::{MaxSatResult, MaxSatStats};
use crate::error::MaxSatError;
use crate::formula::{Formula, Model};

/// Largest variable count accepted by [`brute_force`].
pub const BRUTE_FORCE_MAX_VARS: u32 = 24;

/// Exhaustive search over all assignments. Among optimal assignments the
/// lexicographically smallest one is returned (x1 most significant, false
/// before true).
pub fn brute_force(formula: &Formula) -> Result<MaxSatResult, MaxSatError> {
    let start = Instant::now();
    let n = formula.num_vars();
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(MaxSatError::TooManyVariables {
            vars: n,
            limit: BRUTE_FORCE_MAX_VARS,
        });
    }
    // bit (n - v) of an assignment holds the value of variable v
    let mask = |c: &crate::formula::Clause| {
        let (mut pos, mut neg) = (0u32, 0u32);
        for lit in c.literals() {
            let bit = 1u32 << (n - lit.var().index());
            if lit.is_positive() {
                pos |= bit;
            } else {
                neg |= bit;
            }
        }
        (pos, neg)
    };
    let hard: Vec<(u32, u32)> = formula.hard_clauses().map(mask).collect();
    let soft: Vec<(u32, u32)> = formula.soft_clauses().map(mask).collect();
    let sat = |a: u32, &(pos, neg): &(u32, u32)| a & pos != 0 || !a & neg != 0;

    let mut best: Option<(usize, u32)> = None;
    for a in 0..(1u64 << n) {
        let a = a as u32;
        if !hard.iter().all(|c| sat(a, c)) {
            continue;
        }
        let cost = soft.iter().filter(|c| !sat(a, c)).count();
        if best.is_none_or(|(b, _)| cost < b) {
            best = Some((cost, a));
            if cost == 0 {
                break;
            }
        }
    }
    let (cost, a) = best.ok_or(MaxSatError::HardClausesUnsat)?;
    let model = Model::new((1..=n).map(|v| a >> (n - v) & 1 == 1).collect());
    Ok(MaxSatResult {
        optimum: formula.num_soft() - cost,
        cost,
        model,
        stats: MaxSatStats {
            wall_time: start.elapsed(),
            ..MaxSatStats::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::super::test_util::{cnf, multiblock};
    use super::*;
    use crate::formula::{evaluate, Var};

    #[test]
    fn example_formula() {
        let r = brute_force(&multiblock()).unwrap();
        assert_eq!(r.optimum, 9);
        // z1 false in the lexicographically smallest optimum
        assert_eq!(r.model.value(Var::new(5)), Some(false));
        assert_eq!(evaluate(&multiblock(), &r.model).unwrap().soft_falsified, 3);
    }

    #[test]
    fn ties_break_to_smallest_assignment() {
        let r = brute_force(&cnf("p cnf 2 2\n1 2 0\n-1 -2 0\n")).unwrap();
        assert_eq!(r.model.values(), &[false, true]);
    }

    #[test]
    fn respects_hard_clauses() {
        let r = brute_force(&cnf("p wcnf 1 2 9\n9 -1 0\n1 1 0\n")).unwrap();
        assert_eq!((r.optimum, r.cost), (0, 1));
        assert!(matches!(
            brute_force(&cnf("p wcnf 1 2 9\n9 -1 0\n9 1 0\n")),
            Err(MaxSatError::HardClausesUnsat)
        ));
    }

    #[test]
    fn rejects_large_inputs() {
        let f = cnf("p cnf 25 1\n25 0\n");
        assert!(matches!(brute_force(&f), Err(MaxSatError::TooManyVariables { .. })));
    }
}
