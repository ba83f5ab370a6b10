//! The basic Fraenkel model: predicates on an infinite set of atoms with a
//! finite support, handled through equality types. Predicate quantifiers
//! are stratified by support size.

mod atom;
mod choice;
mod eval;
mod order;
mod predicate;
mod sweep;
mod truncate;
mod types;

use thiserror::Error;

use crate::model::ModelError;
use crate::schemas::BuildError;
use crate::syntax::Var;

pub use atom::{numbered_atoms, Atom, AtomSupply};
pub use choice::{check_choice_instance_sigma0, ChoiceOutcome, ChoiceReport};
pub use eval::{
    symbolic_evaluate, symbolic_evaluate_with, Binding, BindingDoc, BindingValue, EvalCaps,
    SymbolicValue,
};
pub use order::{is_linear_order, OrderAxiom, OrderFailure, OrderVerdict};
pub use predicate::{all_types, FinitePermutation, PredicateDoc, SymbolicPredicate, MAX_ARITY};
pub use sweep::{
    wellorder_counterexample_sweep, wellorder_counterexample_sweep_with, SweepLevel, SweepReport,
    DEFAULT_SWEEP_CAP,
};
pub use truncate::{truncate, truncation_evaluate, truncation_size, Truncation};
pub use types::{classify, type_count, EqualityType, Pos};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FraenkelError {
    #[error("bad atom name {0:?}: expected [a-z][a-z0-9]*")]
    AtomName(String),
    #[error("atom name {0:?} is reserved for fresh classes")]
    ReservedAtom(String),
    #[error("bad equality type {0:?}")]
    TypeString(String),
    #[error("arity 0 is not a predicate arity")]
    ZeroArity,
    #[error("arity {0} exceeds the supported maximum")]
    ArityTooLarge(u32),
    #[error("type {ty} does not have arity {arity}")]
    TypeArity { ty: String, arity: u32 },
    #[error("atom {0} is not in the support")]
    NotInSupport(Atom),
    #[error("bad permutation: {0}")]
    Permutation(String),
    #[error("bad binding: {0}")]
    Binding(String),
    #[error("{0} has no value")]
    Unbound(Var),
    #[error("value of {0} has the wrong sort or arity")]
    SortMismatch(Var),
    #[error("formula is not well formed: {0}")]
    IllFormed(String),
    #[error("cap exceeded: {what} (cap {cap})")]
    CapExceeded { what: String, cap: u64 },
    #[error("a predicate of arity {arity} over {support} support atoms has {types} types, too many to enumerate")]
    TooManyTypes {
        arity: u32,
        support: usize,
        types: usize,
    },
    #[error("expected a binary predicate")]
    NotBinary,
    #[error("bad instance: {0}")]
    Instance(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Build(#[from] BuildError),
}
