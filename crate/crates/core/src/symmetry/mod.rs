//! Permutations of the individuals, finite permutation groups, normal
//! filters, permutation models and the symmetry checks on them.

mod checks;
mod filter;
mod group;
mod model;
mod perm;

use thiserror::Error;

use crate::model::ModelError;

pub use checks::{
    check_equivariance, check_stabilizer_bound, EquivarianceReport, HkChoice, ParameterBound,
    StabilizerReport,
};
pub use filter::{Filter, FilterDoc, FilterKind, FilterSpec, GroupDoc};
pub use group::{Group, DEFAULT_MAX_ORDER};
pub use model::{
    act_on_assignment, act_on_predicate, build_permutation_model, is_closed_under, materialize,
    symmetry_subgroup, PermutationModel, MAX_ENUMERATED,
};
pub use perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("not a bijection: {0}")]
    NotBijection(String),
    #[error("bad cycle notation {0}")]
    CycleSyntax(String),
    #[error("permutation of degree {got} where {expected} was expected")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("group order exceeds the cap of {0}")]
    OrderCap(usize),
    #[error("a filter generator is not a subgroup of G")]
    NotSubgroup,
    #[error("malformed group or filter: {0}")]
    Doc(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
