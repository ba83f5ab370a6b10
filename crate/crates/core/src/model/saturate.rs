//! Depth-bounded definability closure.
//!
//! Formulas are handled semantically: over a fixed pool of variables
//! (`maxArity + 1` individual variables and one predicate variable per
//! listed arity) a formula denotes the set of pool assignments satisfying
//! it. Meanings of depth `d` are built from those of depth `< d` with the
//! connectives and quantifiers, deduplicated, and every meaning is sliced
//! into the tables it defines for each tuple of distinguished variables
//! and each parameter choice. Adding those tables changes the ranges of
//! the quantifiers, so rounds repeat until the domains stop growing.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::par;

use super::eval::ParameterPolicy;
use super::structure::PredicateStructure;
use super::table::Table;
use super::ModelError;

/// Candidate meanings materialised at once before deduplication.
const CANDIDATE_BATCH: usize = 1 << 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationCaps {
    /// Largest permitted `|J_n|`.
    pub max_tables: usize,
    /// Largest permitted number of pool assignments.
    pub max_space: usize,
    /// Largest permitted number of distinct meanings per round.
    pub max_meanings: usize,
}

impl Default for SaturationCaps {
    fn default() -> Self {
        SaturationCaps {
            max_tables: 4096,
            max_space: 1 << 14,
            max_meanings: 20_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Saturation {
    pub structure: PredicateStructure,
    pub depth: usize,
    pub rounds: usize,
    /// Tables added per arity.
    pub added: BTreeMap<u32, usize>,
    pub policy: ParameterPolicy,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
}

/// Mixed-radix space of pool assignments; dimension `d` has stride
/// `strides[d]`.
struct Space {
    radices: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
    n_ind: usize,
    /// arity of each predicate dimension, in order after the individuals
    pred_arities: Vec<u32>,
}

impl Space {
    fn digit(&self, idx: usize, d: usize) -> usize {
        idx / self.strides[d] % self.radices[d]
    }

    fn words(&self) -> usize {
        self.size.div_ceil(64)
    }

    fn mask_tail(&self, b: &mut Bits) {
        let rem = self.size % 64;
        if rem != 0 {
            let last = b.0.len() - 1;
            b.0[last] &= (1u64 << rem) - 1;
        }
    }

    fn bits_where(&self, f: impl Fn(usize) -> bool) -> Bits {
        let mut b = Bits(vec![0; self.words()]);
        for i in 0..self.size {
            if f(i) {
                b.set(i);
            }
        }
        b
    }

    fn quantify(&self, m: &Bits, d: usize, exists: bool) -> Bits {
        let (st, r) = (self.strides[d], self.radices[d]);
        let mut out = Bits(vec![0; self.words()]);
        for i in 0..self.size {
            if self.digit(i, d) != 0 {
                continue;
            }
            let v = if exists {
                (0..r).any(|j| m.get(i + j * st))
            } else {
                (0..r).all(|j| m.get(i + j * st))
            };
            if v {
                for j in 0..r {
                    out.set(i + j * st);
                }
            }
        }
        out
    }
}

/// Closes `s` under definability by formulas of depth `<= depth`, lower
/// depths first, so the result for `d` contains the result for `d - 1`.
/// A standard structure is returned unchanged.
pub fn saturate(
    s: &PredicateStructure,
    depth: usize,
    policy: ParameterPolicy,
    caps: SaturationCaps,
) -> Result<Saturation, ModelError> {
    if depth == 0 {
        return Err(ModelError::BadArgument(
            "depth bound must be at least 1".into(),
        ));
    }
    let mut cur = s.clone();
    let mut rounds = 0;
    'depths: for d in 1..=depth {
        loop {
            // nothing can be added to a standard structure
            if cur.is_standard() {
                break 'depths;
            }
            rounds += 1;
            let found = definable_tables(&cur, d, policy, caps)?;
            let mut grew = false;
            for (n, tables) in found {
                grew |= cur.extend(n, tables) > 0;
                let len = cur.domain(n).map_or(0, <[Table]>::len);
                if len > caps.max_tables {
                    return Err(ModelError::CapExceeded {
                        what: format!("|J{n}| during saturation"),
                        cap: caps.max_tables,
                    });
                }
            }
            // a round is a function of the domains alone, so a round that
            // adds nothing is followed by another that adds nothing
            if !grew {
                break;
            }
        }
    }
    let added = cur
        .domains()
        .iter()
        .map(|(n, d)| (*n, d.len() - s.domain(*n).map_or(0, <[Table]>::len)))
        .collect();
    Ok(Saturation {
        structure: cur,
        depth,
        rounds,
        added,
        policy,
    })
}

fn definable_tables(
    s: &PredicateStructure,
    depth: usize,
    policy: ParameterPolicy,
    caps: SaturationCaps,
) -> Result<BTreeMap<u32, BTreeSet<Table>>, ModelError> {
    let k = s.size();
    let arities: Vec<u32> = s.domains().keys().copied().collect();
    let n_ind = s.max_arity() as usize + 1;
    let mut radices = vec![k; n_ind];
    radices.extend(arities.iter().map(|n| s.domain(*n).unwrap().len()));
    let mut strides = Vec::with_capacity(radices.len());
    let mut size: usize = 1;
    for r in &radices {
        strides.push(size);
        size = size
            .checked_mul(*r)
            .filter(|&z| z <= caps.max_space)
            .ok_or_else(|| ModelError::CapExceeded {
                what: "pool assignment space during saturation".into(),
                cap: caps.max_space,
            })?;
    }
    let space = Space {
        radices,
        strides,
        size,
        n_ind,
        pred_arities: arities.clone(),
    };

    let mut seen: HashSet<Bits> = HashSet::new();
    let mut all: Vec<Bits> = Vec::new();
    let push = |b: Bits, seen: &mut HashSet<Bits>, all: &mut Vec<Bits>, level: &mut Vec<Bits>| {
        if seen.insert(b.clone()) {
            all.push(b.clone());
            level.push(b);
        }
    };

    // depth 0: equalities and atoms over the pool
    let mut level = Vec::new();
    push(space.bits_where(|_| true), &mut seen, &mut all, &mut level);
    for i in 0..n_ind {
        for j in i + 1..n_ind {
            let b = space.bits_where(|a| space.digit(a, i) == space.digit(a, j));
            push(b, &mut seen, &mut all, &mut level);
        }
    }
    for (pi, &n) in arities.iter().enumerate() {
        let dom = s.domain(n).unwrap();
        let pd = n_ind + pi;
        for code in 0..n_ind.pow(n) {
            let mut args = vec![0usize; n as usize];
            let mut c = code;
            for a in args.iter_mut().rev() {
                *a = c % n_ind;
                c /= n_ind;
            }
            let b = space.bits_where(|a| {
                let t = &dom[space.digit(a, pd)];
                let row = args.iter().fold(0, |acc, &d| acc * k + space.digit(a, d));
                t.row(row)
            });
            push(b, &mut seen, &mut all, &mut level);
        }
    }

    for _ in 1..=depth {
        let prev_all = all.len();
        let mut next = Vec::new();
        // bounded batches keep the undeduplicated candidates small
        let per_meaning = 5 * prev_all + 2 * space.radices.len() + 1;
        let batch = (CANDIDATE_BATCH / per_meaning).max(1);
        for chunk in level.chunks(batch) {
            let candidates: Vec<Vec<Bits>> = par::map_slice(chunk, |m| {
                let mut out = Vec::new();
                let mut neg = Bits(m.0.iter().map(|w| !w).collect());
                space.mask_tail(&mut neg);
                out.push(neg);
                for d in 0..space.radices.len() {
                    out.push(space.quantify(m, d, true));
                    out.push(space.quantify(m, d, false));
                }
                for other in &all[..prev_all] {
                    let and = Bits(m.0.iter().zip(&other.0).map(|(a, b)| a & b).collect());
                    let or = Bits(m.0.iter().zip(&other.0).map(|(a, b)| a | b).collect());
                    let mut imp1 = Bits(m.0.iter().zip(&other.0).map(|(a, b)| !a | b).collect());
                    let mut imp2 = Bits(m.0.iter().zip(&other.0).map(|(a, b)| a | !b).collect());
                    let mut iff = Bits(m.0.iter().zip(&other.0).map(|(a, b)| !(a ^ b)).collect());
                    space.mask_tail(&mut imp1);
                    space.mask_tail(&mut imp2);
                    space.mask_tail(&mut iff);
                    out.extend([and, or, imp1, imp2, iff]);
                }
                out
            });
            for b in candidates.into_iter().flatten() {
                push(b, &mut seen, &mut all, &mut next);
                if all.len() > caps.max_meanings {
                    return Err(ModelError::CapExceeded {
                        what: "distinct meanings during saturation".into(),
                        cap: caps.max_meanings,
                    });
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }

    let slices = par::map_slice(&all, |m| slice_meaning(s, &space, m, policy));
    let mut out: BTreeMap<u32, BTreeSet<Table>> = BTreeMap::new();
    for per in slices {
        for (n, t) in per {
            out.entry(n).or_default().insert(t);
        }
    }
    Ok(out)
}

/// Every table a meaning defines: for each arity `n` of the structure and
/// each ordered tuple of `n` distinct pool individuals, one table per
/// parameter choice.
fn slice_meaning(
    s: &PredicateStructure,
    space: &Space,
    m: &Bits,
    policy: ParameterPolicy,
) -> Vec<(u32, Table)> {
    let k = s.size();
    let mut out = Vec::new();
    for &n in &space.pred_arities {
        if n as usize > space.n_ind {
            continue;
        }
        for xs in distinct_tuples(space.n_ind, n as usize) {
            let others: Vec<usize> = (0..space.radices.len())
                .filter(|d| !xs.contains(d))
                .collect();
            let other_inds: Vec<usize> = others
                .iter()
                .copied()
                .filter(|&d| d < space.n_ind)
                .collect();
            if policy == ParameterPolicy::PredicatesOnly {
                // the meaning must not depend on the other individuals
                let independent = (0..space.size).all(|i| {
                    let j = other_inds
                        .iter()
                        .fold(i, |acc, &d| acc - space.digit(i, d) * space.strides[d]);
                    m.get(i) == m.get(j)
                });
                if !independent {
                    continue;
                }
            }
            // parameter points: indices with every distinguished digit zero
            for base in 0..space.size {
                if xs.iter().any(|&d| space.digit(base, d) != 0) {
                    continue;
                }
                if policy == ParameterPolicy::PredicatesOnly
                    && other_inds.iter().any(|&d| space.digit(base, d) != 0)
                {
                    continue;
                }
                let t = Table::from_fn(n, k as u32, |tuple| {
                    let idx = base
                        + xs.iter()
                            .zip(tuple)
                            .map(|(&d, &v)| v * space.strides[d])
                            .sum::<usize>();
                    m.get(idx)
                })
                .expect("table within limits");
                out.push((n, t));
            }
        }
    }
    out
}

fn distinct_tuples(pool: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(pool: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for d in 0..pool {
            if !cur.contains(&d) {
                cur.push(d);
                go(pool, n, cur, out);
                cur.pop();
            }
        }
    }
    go(pool, n, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_is_a_fixpoint() {
        let s = PredicateStructure::standard(PredicateStructure::numbered(2), 2, 1 << 16).unwrap();
        let r = saturate(&s, 3, ParameterPolicy::Full, SaturationCaps::default()).unwrap();
        assert_eq!(r.structure, s);
        assert_eq!(r.rounds, 0);
    }

    #[test]
    fn single_individual_gains_the_empty_table() {
        let s = PredicateStructure::new(vec!["a".into()], [(1, vec![Table::full(1, 1).unwrap()])])
            .unwrap();
        for d in 1..=3 {
            let r = saturate(&s, d, ParameterPolicy::Full, SaturationCaps::default()).unwrap();
            let bits: Vec<String> = r
                .structure
                .domain(1)
                .unwrap()
                .iter()
                .map(Table::to_bitstring)
                .collect();
            assert_eq!(bits, ["0", "1"]);
        }
    }

    #[test]
    fn individual_parameters_reach_every_unary_table() {
        let s = PredicateStructure::new(
            PredicateStructure::numbered(3),
            [(1, vec![Table::full(1, 3).unwrap()])],
        )
        .unwrap();
        let full = saturate(&s, 2, ParameterPolicy::Full, SaturationCaps::default()).unwrap();
        assert_eq!(full.structure.domain(1).unwrap().len(), 8);
        let inv = saturate(
            &s,
            2,
            ParameterPolicy::PredicatesOnly,
            SaturationCaps::default(),
        )
        .unwrap();
        assert_eq!(inv.structure.domain(1).unwrap().len(), 2);
    }

    #[test]
    fn zero_depth_rejected() {
        let s = PredicateStructure::standard(PredicateStructure::numbered(1), 1, 4).unwrap();
        assert!(saturate(&s, 0, ParameterPolicy::Full, SaturationCaps::default()).is_err());
    }
}
