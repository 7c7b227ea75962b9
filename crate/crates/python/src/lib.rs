//! Python bindings for the coremax MaxSAT solver.

use std::collections::BTreeMap;
use std::time::Duration;

use coremax::card::{encoding_size as card_encoding_size, Relation, Strategy};
use coremax::formula::write_dimacs_string;
use coremax::maxsat::{self, Algorithm, CardMode, MaxSatConfig};
use coremax::{evaluate, parse_dimacs_str, ClauseId, Lit, MaxSatError, Model, SolveResult, SolverConfig};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(coremax_py, CoremaxError, PyException);
create_exception!(coremax_py, HardClausesUnsat, CoremaxError);
create_exception!(coremax_py, SolveTimeout, CoremaxError);
create_exception!(coremax_py, MemoryBudgetExceeded, CoremaxError);

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn maxsat_error(e: MaxSatError) -> PyErr {
    match e {
        MaxSatError::HardClausesUnsat => HardClausesUnsat::new_err(e.to_string()),
        MaxSatError::Timeout => SolveTimeout::new_err(e.to_string()),
        MaxSatError::MemoryBudget { .. } => MemoryBudgetExceeded::new_err(e.to_string()),
        other => CoremaxError::new_err(other.to_string()),
    }
}

fn lits(clause: Vec<i64>) -> PyResult<Vec<Lit>> {
    clause
        .into_iter()
        .map(|d| Lit::from_dimacs(d).ok_or_else(|| value_error(format!("invalid literal {d}"))))
        .collect()
}

/// A CNF formula whose clauses are soft (may be falsified at unit cost) or hard.
#[pyclass(name = "Formula")]
#[derive(Default)]
struct PyFormula {
    inner: coremax::Formula,
}

#[pymethods]
impl PyFormula {
    #[new]
    fn new() -> Self {
        PyFormula::default()
    }

    /// Parses DIMACS `p cnf` or unweighted `p wcnf` text.
    #[staticmethod]
    fn from_dimacs(text: &str) -> PyResult<Self> {
        parse_dimacs_str(text).map(|inner| PyFormula { inner }).map_err(value_error)
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| value_error(format!("{path}: {e}")))?;
        Self::from_dimacs(&text)
    }

    fn add_soft(&mut self, clause: Vec<i64>) -> PyResult<usize> {
        Ok(self.inner.add_soft(lits(clause)?).index())
    }

    fn add_hard(&mut self, clause: Vec<i64>) -> PyResult<usize> {
        Ok(self.inner.add_hard(lits(clause)?).index())
    }

    #[getter]
    fn num_vars(&self) -> u32 {
        self.inner.num_vars()
    }

    #[getter]
    fn num_soft(&self) -> usize {
        self.inner.num_soft()
    }

    #[getter]
    fn num_hard(&self) -> usize {
        self.inner.num_hard()
    }

    fn to_dimacs(&self) -> String {
        write_dimacs_string(&self.inner)
    }

    /// Returns `(soft_satisfied, soft_falsified, hard_falsified)` under a
    /// total assignment given as booleans for variables 1..n.
    fn evaluate(&self, model: Vec<bool>) -> PyResult<(usize, usize, usize)> {
        let e = evaluate(&self.inner, &Model::new(model)).map_err(value_error)?;
        Ok((e.soft_satisfied(&self.inner), e.soft_falsified, e.hard_falsified))
    }

    fn __len__(&self) -> usize {
        self.inner.num_original()
    }

    fn __repr__(&self) -> String {
        format!(
            "Formula(vars={}, soft={}, hard={})",
            self.inner.num_vars(),
            self.inner.num_soft(),
            self.inner.num_hard()
        )
    }
}

#[pyclass(name = "Result", get_all)]
struct PySolveResult {
    /// Satisfied soft clauses.
    optimum: usize,
    /// Falsified soft clauses.
    cost: usize,
    /// Model as DIMACS literals over the formula's variables.
    model: Vec<i64>,
    stats: BTreeMap<String, f64>,
}

#[pymethods]
impl PySolveResult {
    fn __repr__(&self) -> String {
        format!("Result(optimum={}, cost={})", self.optimum, self.cost)
    }
}

fn parse_choice<T: Copy>(name: &str, value: &str, choices: &[(&str, T)]) -> PyResult<T> {
    choices
        .iter()
        .find(|(n, _)| *n == value)
        .map(|&(_, v)| v)
        .ok_or_else(|| value_error(format!("unknown {name} `{value}`")))
}

const STRATEGIES: [(&str, Strategy); 3] =
    [("pairwise", Strategy::Pairwise), ("bdd", Strategy::Bdd), ("auto", Strategy::Auto)];

/// Solves `formula` with one of `msu1`, `msu2`, `msu3`, `linear`, `brute`.
#[pyfunction]
#[pyo3(signature = (formula, algo="msu3", encoding=None, card=None, seed=0, timeout=None, mem_mb=None))]
#[allow(clippy::too_many_arguments)]
fn solve(
    py: Python<'_>,
    formula: &PyFormula,
    algo: &str,
    encoding: Option<&str>,
    card: Option<&str>,
    seed: u64,
    timeout: Option<f64>,
    mem_mb: Option<usize>,
) -> PyResult<PySolveResult> {
    let algorithm: Algorithm = algo.parse().map_err(value_error)?;
    let config = MaxSatConfig {
        encoding: encoding.map(|e| parse_choice("encoding", e, &STRATEGIES)).transpose()?,
        card_mode: card
            .map(|c| parse_choice("card", c, &[("equals", CardMode::Equals), ("atmost", CardMode::AtMost)]))
            .transpose()?,
        sat: SolverConfig::with_seed(seed),
        timeout: timeout.map(Duration::from_secs_f64),
        mem_limit_bytes: mem_mb.map(|mb| mb << 20),
        ..MaxSatConfig::default()
    };
    let inner = &formula.inner;
    let result = py.detach(|| maxsat::solve(inner, algorithm, &config)).map_err(maxsat_error)?;
    let s = &result.stats;
    let stats = [
        ("iterations", s.iterations as f64),
        ("cores", s.cores_found as f64),
        ("blockers", s.total_blockers as f64),
        ("max_blockers_per_clause", s.max_blockers_per_clause as f64),
        ("encoded_clauses", s.encoded_clauses as f64),
        ("sat_calls", s.sat_calls as f64),
        ("conflicts", s.conflicts as f64),
        ("wall_time", s.wall_time.as_secs_f64()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    Ok(PySolveResult {
        optimum: result.optimum,
        cost: result.cost,
        model: result.model.literals().map(Lit::to_dimacs).collect(),
        stats,
    })
}

/// Decides all clauses of `formula`. Returns `(True, model)` or
/// `(False, core)` with 0-based clause indices.
#[pyfunction]
#[pyo3(signature = (formula, minimize=false, seed=0))]
fn sat(py: Python<'_>, formula: &PyFormula, minimize: bool, seed: u64) -> PyResult<(bool, Vec<i64>)> {
    let inner = &formula.inner;
    let config = SolverConfig::with_seed(seed);
    let tracked: Vec<ClauseId> = inner.ids().collect();
    let result = py.detach(|| coremax::solve(inner, &tracked, &config)).map_err(value_error)?;
    match result {
        SolveResult::Sat(model) => Ok((true, model.literals().map(Lit::to_dimacs).collect())),
        SolveResult::Unsat(mut core) => {
            if minimize {
                core = py
                    .detach(|| coremax::minimize_core(inner, &tracked, &core, &config))
                    .map_err(value_error)?;
            }
            Ok((false, core.iter().map(|id| id.index() as i64).collect()))
        }
    }
}

/// `(clauses, fresh_vars)` of encoding `Σ x ⋈ k` over `r` literals.
#[pyfunction]
#[pyo3(signature = (relation, r, k, strategy="bdd"))]
fn encoding_size(relation: &str, r: usize, k: usize, strategy: &str) -> PyResult<(u64, u64)> {
    let relation = parse_choice(
        "relation",
        relation,
        &[("atmost", Relation::AtMost), ("atleast", Relation::AtLeast), ("equals", Relation::Equals)],
    )?;
    let strategy = parse_choice("strategy", strategy, &STRATEGIES)?;
    let size = card_encoding_size(relation, r, k, strategy).map_err(value_error)?;
    Ok((size.clauses, size.fresh_vars))
}

#[pymodule]
fn coremax_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFormula>()?;
    m.add_class::<PySolveResult>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(sat, m)?)?;
    m.add_function(wrap_pyfunction!(encoding_size, m)?)?;
    m.add("CoremaxError", m.py().get_type::<CoremaxError>())?;
    m.add("HardClausesUnsat", m.py().get_type::<HardClausesUnsat>())?;
    m.add("SolveTimeout", m.py().get_type::<SolveTimeout>())?;
    m.add("MemoryBudgetExceeded", m.py().get_type::<MemoryBudgetExceeded>())?;
    Ok(())
}
