//! Finite predicate structures: individuals, explicit predicate domains,
//! assignments, the valuation, definability and comprehension.

mod assignment;
mod eval;
mod saturate;
mod structure;
mod table;

use thiserror::Error;

use crate::syntax::{IndVar, PredVar};

pub use assignment::{Assignment, AssignmentDoc};
pub use eval::{
    assignments, att, att_table, check_comprehension, check_comprehension_all, evaluate, Compiled,
    Comprehension, DefinedPredicate, Env, ParameterPolicy,
};
pub use saturate::{saturate, Saturation, SaturationCaps};
pub use structure::{PredicateStructure, StructureDoc, DEFAULT_MAX_INDIVIDUALS};
pub use table::{row_count, Table, TableError, MAX_ROWS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a structure needs at least one individual")]
    NoIndividuals,
    #[error("individual labels must be distinct")]
    DuplicateLabel,
    #[error("arity 0 is not a predicate arity")]
    ZeroArity,
    #[error("domain J{0} is empty")]
    EmptyDomain(u32),
    #[error("domain J{0} listed twice")]
    DuplicateDomain(u32),
    #[error("a table in J{arity} is not over {expected_universe} individuals")]
    TableShape { arity: u32, expected_universe: u32 },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("cap exceeded: {what} (cap {cap})")]
    CapExceeded { what: String, cap: usize },
    #[error("malformed structure document: {0}")]
    Json(String),
    #[error("bad assignment: {0}")]
    BadAssignment(String),
    #[error("value of {0} is not in its domain")]
    OutsideDomain(PredVar),
    #[error("the structure has no domain of arity {0}")]
    ArityUnavailable(u32),
    #[error("{0} does not occur only free in the formula")]
    NotFreeOnly(IndVar),
    #[error("{0} listed twice among the distinguished variables")]
    RepeatedVariable(IndVar),
    #[error("{0} is a free individual parameter, which this check does not admit")]
    IndividualParameter(IndVar),
    #[error("formula is not well formed: {0}")]
    IllFormed(String),
    #[error("{0}")]
    BadArgument(String),
}
