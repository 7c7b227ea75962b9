//! Core-guided MaxSAT solving.
//!
//! The crate provides a CNF data model with DIMACS I/O ([`formula`]), a CDCL
//! SAT engine that reports unsatisfiable cores ([`sat`]), CNF encodings of
//! cardinality constraints ([`card`]) and the MaxSAT procedures built on top
//! of them ([`maxsat`]).

pub mod card;
pub mod error;
pub mod formula;
pub mod maxsat;
pub mod oracle;
pub mod sat;

pub use error::{EncodeError, FormulaError, MaxSatError, ParseError, SatError};
pub use card::{CardConstraint, EncodedConstraint, Relation, Strategy};
pub use formula::{
    evaluate, parse_dimacs, parse_dimacs_str, write_dimacs, Clause, ClauseId, ClauseTag,
    Evaluation, Formula, Lit, Model, Var, VarPool,
};
pub use maxsat::{
    brute_force, solve_linear, solve_msu1, solve_msu2, solve_msu3, Algorithm, CardMode,
    MaxSatConfig, MaxSatResult, MaxSatStats,
};
pub use sat::{minimize_core, solve, SolveResult, SolverConfig};
