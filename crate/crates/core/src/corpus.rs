//! Seeded random well-formed formulas with a depth bound.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{x, Connective, Formula, IndVar, PredVar, Quantifier, Var};

#[derive(Clone, Debug)]
pub struct CorpusOptions {
    pub max_depth: usize,
    /// Individual variables that may occur.
    pub ind_pool: Vec<IndVar>,
    /// Predicate variables that may occur.
    pub pred_pool: Vec<PredVar>,
    /// Restricts which individual variables may occur free; `None` allows
    /// the whole pool.
    pub free_inds: Option<Vec<IndVar>>,
    pub free_preds: Option<Vec<PredVar>>,
    pub predicate_quantifiers: bool,
    pub predicate_equality: bool,
    /// Never quantify a variable that is allowed free, so those variables
    /// occur only free.
    pub keep_free_unbound: bool,
    /// Probability of stopping early at a leaf when depth remains.
    pub leaf_bias: f64,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions {
            max_depth: 4,
            ind_pool: (1..=4).map(x).collect(),
            pred_pool: vec![
                PredVar::new(0, 1),
                PredVar::new(1, 1),
                PredVar::new(0, 2),
                PredVar::new(1, 2),
            ],
            free_inds: None,
            free_preds: None,
            predicate_quantifiers: true,
            predicate_equality: true,
            keep_free_unbound: false,
            leaf_bias: 0.25,
        }
    }
}

impl CorpusOptions {
    /// Formulas in which only `xs` occur free among individuals, each of
    /// them only free, with predicate variables of the given arities.
    pub fn with_free_tuple(max_depth: usize, xs: &[IndVar], arities: &[u32]) -> Self {
        let top = xs.iter().map(|v| v.0).max().unwrap_or(0);
        let mut ind_pool = xs.to_vec();
        ind_pool.extend((top + 1..=top + 3).map(x));
        CorpusOptions {
            max_depth,
            ind_pool,
            pred_pool: arities
                .iter()
                .flat_map(|&n| [PredVar::new(0, n), PredVar::new(1, n)])
                .collect(),
            free_inds: Some(xs.to_vec()),
            keep_free_unbound: true,
            ..CorpusOptions::default()
        }
    }
}

/// Deterministic formula generator.
pub struct FormulaGen {
    opts: CorpusOptions,
    rng: ChaCha8Rng,
}

impl FormulaGen {
    pub fn new(opts: CorpusOptions, seed: u64) -> Self {
        assert!(!opts.ind_pool.is_empty(), "the individual pool is empty");
        FormulaGen {
            opts,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn formula(&mut self) -> Formula {
        let depth = self.opts.max_depth;
        self.gen(depth, &mut Vec::new())
    }

    pub fn take(&mut self, count: usize) -> Vec<Formula> {
        (0..count).map(|_| self.formula()).collect()
    }

    fn free_ind_ok(&self, v: IndVar) -> bool {
        self.opts.free_inds.as_ref().is_none_or(|s| s.contains(&v))
    }

    fn free_pred_ok(&self, a: PredVar) -> bool {
        self.opts.free_preds.as_ref().is_none_or(|s| s.contains(&a))
    }

    fn inds_in_scope(&self, bound: &[Var]) -> Vec<IndVar> {
        self.opts
            .ind_pool
            .iter()
            .copied()
            .filter(|v| bound.contains(&Var::Ind(*v)) || self.free_ind_ok(*v))
            .collect()
    }

    fn preds_in_scope(&self, bound: &[Var]) -> Vec<PredVar> {
        self.opts
            .pred_pool
            .iter()
            .copied()
            .filter(|a| bound.contains(&Var::Pred(*a)) || self.free_pred_ok(*a))
            .collect()
    }

    fn binders(&self, bound: &[Var]) -> Vec<Var> {
        let keep = self.opts.keep_free_unbound;
        let mut out: Vec<Var> = self
            .opts
            .ind_pool
            .iter()
            .filter(|v| !(keep && self.free_ind_ok(**v)))
            .map(|v| Var::Ind(*v))
            .collect();
        if self.opts.predicate_quantifiers {
            out.extend(
                self.opts
                    .pred_pool
                    .iter()
                    .filter(|a| !(keep && self.free_pred_ok(**a)))
                    .map(|a| Var::Pred(*a)),
            );
        }
        out.retain(|v| !bound.contains(v));
        out
    }

    fn gen(&mut self, depth: usize, bound: &mut Vec<Var>) -> Formula {
        if depth == 0 || self.rng.gen_bool(self.opts.leaf_bias) {
            if let Some(f) = self.leaf(bound) {
                return f;
            }
        }
        assert!(depth > 0, "the corpus options admit no atomic formula here");
        let binders = self.binders(bound);
        let roll = self.rng.gen_range(0..20);
        match roll {
            0..=3 => Formula::not(self.gen(depth - 1, bound)),
            4..=12 => {
                let c = *[
                    Connective::And,
                    Connective::Or,
                    Connective::Implies,
                    Connective::Iff,
                ]
                .choose(&mut self.rng)
                .unwrap();
                let l = self.gen(depth - 1, bound);
                let r = self.gen(depth - 1, bound);
                Formula::bin(c, l, r)
            }
            _ if !binders.is_empty() => {
                let v = *binders.choose(&mut self.rng).unwrap();
                let q = if self.rng.gen_bool(0.5) {
                    Quantifier::All
                } else {
                    Quantifier::Ex
                };
                bound.push(v);
                let body = self.gen(depth - 1, bound);
                bound.pop();
                Formula::Quant(q, v, Box::new(body))
            }
            _ => Formula::not(self.gen(depth - 1, bound)),
        }
    }

    fn leaf(&mut self, bound: &[Var]) -> Option<Formula> {
        let inds = self.inds_in_scope(bound);
        let preds = self.preds_in_scope(bound);
        let mut kinds = Vec::new();
        if !inds.is_empty() {
            kinds.push(0);
            if !preds.is_empty() {
                kinds.extend([1, 1, 1]);
            }
        }
        if self.opts.predicate_equality && !preds.is_empty() {
            kinds.push(2);
        }
        let kind = *kinds.choose(&mut self.rng)?;
        Some(match kind {
            0 => Formula::EqInd(*inds.choose(&mut self.rng)?, *inds.choose(&mut self.rng)?),
            1 => {
                let a = *preds.choose(&mut self.rng)?;
                let args = (0..a.arity)
                    .map(|_| *inds.choose(&mut self.rng).unwrap())
                    .collect::<Vec<_>>();
                Formula::Atom(a, args)
            }
            _ => {
                let a = *preds.choose(&mut self.rng)?;
                let same: Vec<PredVar> = preds
                    .iter()
                    .copied()
                    .filter(|b| b.arity == a.arity)
                    .collect();
                Formula::EqPred(a, *same.choose(&mut self.rng)?)
            }
        })
    }
}

/// `count` formulas from a fresh generator.
pub fn corpus(opts: &CorpusOptions, seed: u64, count: usize) -> Vec<Formula> {
    FormulaGen::new(opts.clone(), seed).take(count)
}
