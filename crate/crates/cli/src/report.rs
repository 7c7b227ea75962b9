use std::fmt::Write;

use coremax::maxsat::{solve, Algorithm, MaxSatConfig};
use coremax::{evaluate, Formula, MaxSatError};

use crate::exit;

/// Output of one `solve` invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Solves `formula` and renders the result in evaluation format: `c`
/// comments, `o <cost>`, an `s` status line and a `v` model line.
pub fn solve_report(formula: &Formula, algorithm: Algorithm, config: &MaxSatConfig, stats: bool) -> Report {
    let mut out = String::new();
    let mut err = String::new();
    let _ = writeln!(out, "c coremax {algorithm}");
    let _ = writeln!(
        out,
        "c vars {} soft {} hard {}",
        formula.num_vars(),
        formula.num_soft(),
        formula.num_hard()
    );
    for warning in formula.warnings() {
        let _ = writeln!(out, "c warning: {warning}");
    }
    let code = match solve(formula, algorithm, config) {
        Ok(result) => match evaluate(formula, &result.model) {
            Ok(eval) if eval.hard_falsified == 0 && eval.soft_falsified == result.cost => {
                if stats {
                    let s = &result.stats;
                    let _ = writeln!(out, "c iterations {}", s.iterations);
                    let _ = writeln!(out, "c cores {}", s.cores_found);
                    let _ = writeln!(out, "c blockers {}", s.total_blockers);
                    let _ = writeln!(out, "c max_blockers_per_clause {}", s.max_blockers_per_clause);
                    let _ = writeln!(out, "c encoded_clauses {}", s.encoded_clauses);
                    let _ = writeln!(out, "c sat_calls {}", s.sat_calls);
                    let _ = writeln!(out, "c conflicts {}", s.conflicts);
                    let _ = writeln!(err, "c wall_time {:.3}", s.wall_time.as_secs_f64());
                }
                let _ = writeln!(out, "c satisfied {}", result.optimum);
                let _ = writeln!(out, "o {}", result.cost);
                let _ = writeln!(out, "s OPTIMUM FOUND");
                let lits: Vec<String> = result.model.literals().map(|l| l.to_dimacs().to_string()).collect();
                let _ = writeln!(out, "v {}", lits.join(" ").trim_end());
                exit::OPTIMUM
            }
            _ => {
                let _ = writeln!(err, "error: witness model failed verification");
                let _ = writeln!(out, "s UNKNOWN");
                exit::ERROR
            }
        },
        Err(MaxSatError::HardClausesUnsat) => {
            let _ = writeln!(out, "s UNSATISFIABLE");
            exit::HARD_UNSAT
        }
        Err(MaxSatError::Timeout) => {
            let _ = writeln!(out, "c timeout");
            let _ = writeln!(out, "s UNKNOWN");
            exit::TIMEOUT
        }
        Err(e @ MaxSatError::MemoryBudget { .. }) => {
            let _ = writeln!(out, "c memout");
            let _ = writeln!(err, "error: {e}");
            let _ = writeln!(out, "s UNKNOWN");
            exit::ERROR
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let _ = writeln!(out, "s UNKNOWN");
            exit::ERROR
        }
    };
    Report { stdout: out, stderr: err, code }
}
