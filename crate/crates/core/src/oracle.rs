//! Reference procedures that share no code with the CDCL engine, used to
//! cross-check it.

use crate::formula::Lit;

/// Plain DPLL with unit propagation over a clause list.
pub fn dpll_satisfiable(clauses: &[Vec<Lit>]) -> bool {
    let num_vars = clauses
        .iter()
        .flatten()
        .map(|l| l.var().index() as usize)
        .max()
        .unwrap_or(0);
    let mut assignment = vec![None; num_vars + 1];
    dpll(clauses, &mut assignment)
}

fn value(assignment: &[Option<bool>], l: Lit) -> Option<bool> {
    assignment[l.var().index() as usize].map(|v| v == l.is_positive())
}

fn dpll(clauses: &[Vec<Lit>], assignment: &mut Vec<Option<bool>>) -> bool {
    loop {
        let mut changed = false;
        for clause in clauses {
            let mut unassigned = None;
            let mut open = 0;
            let mut satisfied = false;
            for &l in clause {
                match value(assignment, l) {
                    Some(true) => {
                        satisfied = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        open += 1;
                        unassigned = Some(l);
                    }
                }
            }
            if satisfied {
                continue;
            }
            match (open, unassigned) {
                (0, _) => return false,
                (1, Some(l)) => {
                    assignment[l.var().index() as usize] = Some(l.is_positive());
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let branch = clauses.iter().find_map(|c| {
        if c.iter().any(|&l| value(assignment, l) == Some(true)) {
            None
        } else {
            c.iter().copied().find(|&l| value(assignment, l).is_none())
        }
    });
    let Some(l) = branch else { return true };
    for polarity in [l.is_positive(), !l.is_positive()] {
        let mut trial = assignment.clone();
        trial[l.var().index() as usize] = Some(polarity);
        if dpll(clauses, &mut trial) {
            *assignment = trial;
            return true;
        }
    }
    false
}
