use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::schemas::{build, SchemaId};
use crate::syntax::{print, Connective, Formula, Quantifier, Var};

use super::atom::{numbered_atoms, Atom};
use super::eval::{symbolic_evaluate_with, Binding, Env, EvalCaps, Evaluator};
use super::predicate::{Kernel, SymbolicPredicate, MAX_ARITY};
use super::types::patterns;
use super::FraenkelError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum ChoiceOutcome {
    /// The antecedent `∀x ∃D H` fails, so the instance holds trivially.
    Vacuous,
    /// A choice predicate `S` satisfying the consequent.
    Witness {
        predicate: SymbolicPredicate,
        support_size: usize,
        minimal_support: Vec<Atom>,
    },
    /// No witness among the supports searched.
    Inconclusive {
        searched: u64,
        skipped_support_sizes: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceReport {
    pub n: u32,
    pub m: u32,
    pub h: String,
    pub stratum: usize,
    pub antecedent: bool,
    pub outcome: ChoiceOutcome,
    pub enumerated: u64,
}

impl ChoiceReport {
    /// Whether the instance is verified: vacuous or witnessed.
    pub fn verified(&self) -> bool {
        !matches!(self.outcome, ChoiceOutcome::Inconclusive { .. })
    }

    pub fn has_witness(&self) -> bool {
        matches!(self.outcome, ChoiceOutcome::Witness { .. })
    }
}

/// Checks `∀x ∃D H → ∃S ∀x H(x, λy. S x y)` in the basic Fraenkel model at
/// stratum `strat`. Witnesses are searched with supports `p1..pj`,
/// `j <= strat`; a support size whose predicates have more than
/// `caps.max_types` types is skipped.
pub fn check_choice_instance_sigma0(
    n: u32,
    m: u32,
    h: &Formula,
    strat: usize,
    caps: EvalCaps,
) -> Result<ChoiceReport, FraenkelError> {
    if (n + m) as usize > MAX_ARITY {
        return Err(FraenkelError::ArityTooLarge(n + m));
    }
    let full = build(&SchemaId::choice(n, m, h.clone()))?;
    let Formula::Bin(Connective::Implies, antecedent, consequent) = &full else {
        unreachable!("choice builds an implication")
    };
    let Formula::Quant(Quantifier::Ex, Var::Pred(s), body) = consequent.as_ref() else {
        unreachable!("the consequent quantifies S")
    };
    let mut report = ChoiceReport {
        n,
        m,
        h: print(h),
        stratum: strat,
        antecedent: false,
        outcome: ChoiceOutcome::Vacuous,
        enumerated: 0,
    };
    let ante = symbolic_evaluate_with(antecedent, &Binding::new(), strat, caps)?;
    report.enumerated += ante.enumerated;
    report.antecedent = ante.value;
    if !ante.value {
        return Ok(report);
    }
    let arity = (n + m) as usize;
    let mut ev = Evaluator::new(strat, caps);
    let mut searched = 0u64;
    let mut skipped = Vec::new();
    for j in 0..=strat {
        let pats = patterns(arity, j);
        if pats.len() > caps.max_types || pats.len() >= 64 {
            skipped.push(j);
            continue;
        }
        for mask in 0u64..1 << pats.len() {
            searched += 1;
            let k = Kernel::from_mask(arity, (0..j).collect(), &pats, mask);
            let mut env = Env::default();
            env.pred.insert(*s, Rc::new(k.clone()));
            if ev.eval(body, &mut env, j)? {
                let names = numbered_atoms(j);
                let predicate = SymbolicPredicate::from_kernel(&k, &names);
                report.enumerated += ev.enumerated + searched;
                report.outcome = ChoiceOutcome::Witness {
                    minimal_support: predicate.minimal_support(),
                    predicate,
                    support_size: j,
                };
                return Ok(report);
            }
        }
    }
    report.enumerated += ev.enumerated + searched;
    report.outcome = ChoiceOutcome::Inconclusive {
        searched,
        skipped_support_sizes: skipped,
    };
    Ok(report)
}
