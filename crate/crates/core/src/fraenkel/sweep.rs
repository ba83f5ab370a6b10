use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::par;
use crate::schemas::OrderKind;

use super::atom::numbered_atoms;
use super::order::{first_failure, fresh_first_universe, OrderAxiom};
use super::predicate::{for_each_tuple, Kernel, SymbolicPredicate};
use super::types::patterns;
use super::FraenkelError;

/// Default cap on the predicates enumerated for one support size.
pub const DEFAULT_SWEEP_CAP: u64 = 1 << 24;

const CHUNK: u64 = 1 << 12;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepLevel {
    pub support_size: usize,
    pub types: usize,
    /// Type subsets enumerated, i.e. `2^types`.
    pub predicates: u64,
    /// Predicates whose least support is the whole of `p1..pk`.
    pub canonical: u64,
    pub linear_orders: u64,
    /// First failing axiom, counted per predicate.
    pub failures: BTreeMap<OrderAxiom, u64>,
    /// Failures confirmed by swapping two fresh atoms `a`, `b`: the swap
    /// fixes the predicate while `T(a, b) = T(b, a)`.
    pub swap_witnesses: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub max_support: usize,
    pub order: OrderKind,
    pub levels: Vec<SweepLevel>,
    pub total_predicates: u64,
    pub total_linear_orders: u64,
    pub linear_orders: Vec<SymbolicPredicate>,
    pub all_failures_witnessed: bool,
    pub parallel: bool,
}

/// Enumerates every binary predicate with support `p1..pk`, `k <= max_support`,
/// and checks the linear order axioms on each.
pub fn wellorder_counterexample_sweep(
    max_support: usize,
    kind: OrderKind,
) -> Result<SweepReport, FraenkelError> {
    wellorder_counterexample_sweep_with(max_support, kind, DEFAULT_SWEEP_CAP)
}

pub fn wellorder_counterexample_sweep_with(
    max_support: usize,
    kind: OrderKind,
    cap: u64,
) -> Result<SweepReport, FraenkelError> {
    let mut levels = Vec::new();
    let mut orders = Vec::new();
    for s in 0..=max_support {
        let pats = patterns(2, s);
        if pats.len() >= 63 || 1u64 << pats.len() > cap {
            return Err(FraenkelError::CapExceeded {
                what: format!("binary predicates over {s} support atoms"),
                cap,
            });
        }
        let count = 1u64 << pats.len();
        let chunks = count.div_ceil(CHUNK);
        let parts = par::map_range(chunks as usize, |c| {
            let lo = c as u64 * CHUNK;
            sweep_range(s, &pats, lo..count.min(lo + CHUNK), kind)
        });
        let mut level = SweepLevel {
            support_size: s,
            types: pats.len(),
            ..SweepLevel::default()
        };
        let names = numbered_atoms(s);
        for (part, found) in parts {
            level.predicates += part.predicates;
            level.canonical += part.canonical;
            level.linear_orders += part.linear_orders;
            level.swap_witnesses += part.swap_witnesses;
            for (a, n) in part.failures {
                *level.failures.entry(a).or_default() += n;
            }
            orders.extend(
                found
                    .iter()
                    .map(|k| SymbolicPredicate::from_kernel(k, &names)),
            );
        }
        levels.push(level);
    }
    let failures: u64 = levels.iter().flat_map(|l| l.failures.values()).sum();
    let witnessed: u64 = levels.iter().map(|l| l.swap_witnesses).sum();
    Ok(SweepReport {
        max_support,
        order: kind,
        total_predicates: levels.iter().map(|l| l.predicates).sum(),
        total_linear_orders: levels.iter().map(|l| l.linear_orders).sum(),
        levels,
        linear_orders: orders,
        all_failures_witnessed: failures == witnessed,
        parallel: par::is_parallel(),
    })
}

fn sweep_range(
    s: usize,
    pats: &[Vec<usize>],
    masks: std::ops::Range<u64>,
    kind: OrderKind,
) -> (SweepLevel, Vec<Kernel>) {
    let universe = fresh_first_universe(s);
    let (a, b) = (s, s + 1);
    let mut level = SweepLevel::default();
    let mut found = Vec::new();
    for mask in masks {
        let k = Kernel::from_mask(2, (0..s).collect(), pats, mask);
        level.predicates += 1;
        if k.minimal_support().support.len() == s {
            level.canonical += 1;
        }
        match first_failure(&k, &universe, kind) {
            None => {
                level.linear_orders += 1;
                found.push(k);
            }
            Some((axiom, _)) => {
                *level.failures.entry(axiom).or_default() += 1;
                if swap_witness(&k, &universe, a, b) {
                    level.swap_witnesses += 1;
                }
            }
        }
    }
    (level, found)
}

/// `(a b)` fixes `k` on the test universe and `T(a, b) = T(b, a)`; then
/// either both hold, breaking antisymmetry, or neither does, breaking
/// totality.
fn swap_witness(k: &Kernel, universe: &[usize], a: usize, b: usize) -> bool {
    let swap = |v: usize| {
        if v == a {
            b
        } else if v == b {
            a
        } else {
            v
        }
    };
    let mut tuple = [0; 2];
    let invariant = for_each_tuple(universe, &mut tuple, 0, &mut |t| {
        k.denotes(t) == k.denotes(&[swap(t[0]), swap(t[1])])
    });
    invariant && k.denotes(&[a, b]) == k.denotes(&[b, a])
}
