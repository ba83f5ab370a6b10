use std::collections::BTreeMap;

use crate::syntax::{IndVar, PredVar, Var};

use super::structure::PredicateStructure;
use super::table::Table;
use super::ModelError;

/// Values for finitely many variables. Every other individual variable
/// denotes the first individual and every other predicate variable the
/// least table of its domain, so the assignment is total.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    ind: BTreeMap<IndVar, usize>,
    pred: BTreeMap<PredVar, Table>,
}

/// Serialised form: variable token to individual label or table bitstring.
pub type AssignmentDoc = BTreeMap<String, String>;

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_ind(&mut self, x: IndVar, v: usize) {
        self.ind.insert(x, v);
    }

    pub fn set_pred(&mut self, a: PredVar, t: Table) {
        assert_eq!(a.arity, t.arity(), "table arity must match {a}");
        self.pred.insert(a, t);
    }

    /// `f<x/v>`: a copy differing at most at `x`.
    pub fn with_ind(&self, x: IndVar, v: usize) -> Self {
        let mut f = self.clone();
        f.set_ind(x, v);
        f
    }

    pub fn with_pred(&self, a: PredVar, t: Table) -> Self {
        let mut f = self.clone();
        f.set_pred(a, t);
        f
    }

    pub fn ind(&self, x: IndVar) -> usize {
        self.ind.get(&x).copied().unwrap_or(0)
    }

    pub fn explicit_ind(&self, x: IndVar) -> Option<usize> {
        self.ind.get(&x).copied()
    }

    pub fn explicit_pred(&self, a: PredVar) -> Option<&Table> {
        self.pred.get(&a)
    }

    /// Value of `a`, falling back to the least table of `J_n`.
    pub fn pred<'a>(&'a self, s: &'a PredicateStructure, a: PredVar) -> Option<&'a Table> {
        self.pred
            .get(&a)
            .or_else(|| s.domain(a.arity).and_then(|d| d.first()))
    }

    pub fn ind_entries(&self) -> impl Iterator<Item = (IndVar, usize)> + '_ {
        self.ind.iter().map(|(k, v)| (*k, *v))
    }

    pub fn pred_entries(&self) -> impl Iterator<Item = (PredVar, &Table)> + '_ {
        self.pred.iter().map(|(k, v)| (*k, v))
    }

    /// Keeps only the listed variables.
    pub fn restricted(&self, keep: impl Fn(Var) -> bool) -> Self {
        Assignment {
            ind: self
                .ind
                .iter()
                .filter(|(k, _)| keep(Var::Ind(**k)))
                .map(|(k, v)| (*k, *v))
                .collect(),
            pred: self
                .pred
                .iter()
                .filter(|(k, _)| keep(Var::Pred(**k)))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Individuals in range and tables over the right universe.
    pub fn check_shape(&self, s: &PredicateStructure) -> Result<(), ModelError> {
        for (x, v) in &self.ind {
            if *v >= s.size() {
                return Err(ModelError::BadAssignment(format!(
                    "{x} denotes individual #{v}, but there are only {}",
                    s.size()
                )));
            }
        }
        for (a, t) in &self.pred {
            if t.universe() as usize != s.size() {
                return Err(ModelError::BadAssignment(format!(
                    "{a} denotes a table over {} individuals",
                    t.universe()
                )));
            }
        }
        Ok(())
    }

    /// Every explicitly assigned table lies in its domain.
    pub fn check_membership(&self, s: &PredicateStructure) -> Result<(), ModelError> {
        self.check_shape(s)?;
        for (a, t) in &self.pred {
            if !s.contains(t) {
                return Err(ModelError::OutsideDomain(*a));
            }
        }
        Ok(())
    }

    pub fn to_doc(&self, s: &PredicateStructure) -> AssignmentDoc {
        let mut doc = AssignmentDoc::new();
        for (x, v) in &self.ind {
            let label = s
                .individuals()
                .get(*v)
                .cloned()
                .unwrap_or_else(|| format!("#{v}"));
            doc.insert(x.to_string(), label);
        }
        for (a, t) in &self.pred {
            doc.insert(a.to_string(), t.to_bitstring());
        }
        doc
    }

    pub fn from_doc(s: &PredicateStructure, doc: &AssignmentDoc) -> Result<Self, ModelError> {
        let mut f = Assignment::new();
        for (k, v) in doc {
            let var: Var = k.parse().map_err(ModelError::BadAssignment)?;
            match var {
                Var::Ind(x) => {
                    let i = s.label_index(v).ok_or_else(|| {
                        ModelError::BadAssignment(format!("unknown individual {v:?} for {x}"))
                    })?;
                    f.set_ind(x, i);
                }
                Var::Pred(a) => {
                    let t = Table::from_bitstring(a.arity, s.size() as u32, v)?;
                    f.set_pred(a, t);
                }
            }
        }
        Ok(f)
    }
}
