mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::atom;
use henkin::corpus::{corpus, CorpusOptions};
use henkin::fraenkel::{
    classify, symbolic_evaluate, truncate, type_count, wellorder_counterexample_sweep, Atom,
    FinitePermutation, SymbolicPredicate,
};
use henkin::schemas::OrderKind;

fn pool() -> Vec<Atom> {
    ["p1", "p2", "p3"].map(atom).into()
}

/// Atoms outside every support drawn from the pool.
fn outside() -> Vec<Atom> {
    ["q1", "q2", "q3"].map(atom).into()
}

fn universe() -> Vec<Atom> {
    let mut u = pool();
    u.extend(outside());
    u
}

/// A random permutation of `atoms` as a product of disjoint cycles.
fn random_perm(r: &mut ChaCha8Rng, atoms: &[Atom]) -> FinitePermutation {
    let mut moved: Vec<Atom> = atoms.iter().filter(|_| r.gen_bool(0.6)).cloned().collect();
    moved.shuffle(r);
    let mut cycles = Vec::new();
    while moved.len() >= 2 {
        let len = r.gen_range(2..=moved.len());
        cycles.push(moved.drain(..len).collect());
    }
    FinitePermutation::from_cycles(cycles).unwrap()
}

fn tuples(atoms: &[Atom], n: usize) -> Vec<Vec<Atom>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                atoms.iter().map(move |a| {
                    let mut t = t.clone();
                    t.push(a.clone());
                    t
                })
            })
            .collect();
    }
    out
}

proptest! {
    #[test]
    fn permutations_fixing_the_support_fix_the_predicate(seed in any::<u64>(), arity in 1u32..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_symbolic(&mut r, arity, &pool());
        let free: Vec<Atom> = universe()
            .into_iter()
            .filter(|a| !p.support().contains(a))
            .collect();
        let pi = random_perm(&mut r, &free);
        prop_assert!(pi.fixes_all(p.support()));
        prop_assert_eq!(p.apply_permutation(&pi), p);
    }

    #[test]
    fn the_action_moves_denotations(seed in any::<u64>(), arity in 1u32..=2) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_symbolic(&mut r, arity, &pool());
        let pi = random_perm(&mut r, &universe());
        let q = p.apply_permutation(&pi);
        for t in tuples(&universe(), arity as usize) {
            let moved: Vec<Atom> = t.iter().map(|a| pi.apply(a)).collect();
            prop_assert_eq!(q.denotes(&moved), p.denotes(&t));
        }
        let back = q.apply_permutation(&pi.inverse());
        prop_assert!(back.same_denotation(&p));
    }

    #[test]
    fn types_are_orbits_of_the_support_stabilizer(seed in any::<u64>(), arity in 1usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let support: Vec<Atom> = pool().into_iter().filter(|_| r.gen_bool(0.5)).collect();
        let free: Vec<Atom> = universe()
            .into_iter()
            .filter(|a| !support.contains(a))
            .collect();
        let pi = random_perm(&mut r, &free);
        let all = universe();
        let t: Vec<Atom> = (0..arity).map(|_| all.choose(&mut r).unwrap().clone()).collect();
        let moved: Vec<Atom> = t.iter().map(|a| pi.apply(a)).collect();
        prop_assert_eq!(classify(&moved, &support), classify(&t, &support));
        let p = common::random_symbolic(&mut r, arity as u32, &support);
        prop_assert_eq!(p.denotes(&moved), p.denotes(&t));
    }

    #[test]
    fn canonical_forms_keep_denotations(seed in any::<u64>(), arity in 1u32..=2) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_symbolic(&mut r, arity, &pool());
        let c = p.canonical();
        prop_assert!(c.same_denotation(&p));
        prop_assert!(c.support().iter().all(|a| p.support().contains(a)));
        prop_assert_eq!(c.canonical(), c.clone());
        let w = p.widen(outside());
        prop_assert!(w.same_denotation(&p));
        prop_assert_eq!(w.canonical(), c);
    }

    #[test]
    fn unary_predicates_are_finite_or_cofinite(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_symbolic(&mut r, 1, &pool());
        let (cofinite, listed) = p.finite_or_cofinite().unwrap();
        for a in universe() {
            let inside = listed.contains(&a);
            prop_assert_eq!(p.denotes(&[a]), inside != cofinite);
        }
    }

    #[test]
    fn every_finite_or_cofinite_set_is_reachable(mask in 0u8..8, cofinite in any::<bool>()) {
        let chosen: Vec<Atom> = pool()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, a)| a)
            .collect();
        let p = SymbolicPredicate::from_types(1, chosen.clone(), |t| {
            let named = t.atoms().next().is_some();
            named != cofinite
        });
        for a in universe() {
            prop_assert_eq!(p.denotes(std::slice::from_ref(&a)), chosen.contains(&a) != cofinite);
        }
        prop_assert_eq!(p.finite_or_cofinite().unwrap(), (cofinite, chosen));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evaluation_is_equivariant(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let opts = CorpusOptions {
            max_depth: 3,
            ..CorpusOptions::default()
        };
        for f in corpus(&opts, seed, 3) {
            let b = common::random_binding(&mut r, &f, &pool());
            let pi = random_perm(&mut r, &universe());
            let strat = r.gen_range(0..=1);
            let v = symbolic_evaluate(&f, &b, strat).unwrap();
            let w = symbolic_evaluate(&f, &b.apply_permutation(&pi), strat).unwrap();
            prop_assert_eq!(v.value, w.value);
            prop_assert_eq!(v.stratified, w.stratified);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn truncations_agree_with_the_naive_oracle(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let opts = CorpusOptions {
            max_depth: 3,
            pred_pool: vec![henkin::syntax::pv(0, 1), henkin::syntax::pv(1, 1)],
            ..CorpusOptions::default()
        };
        let pool = [atom("p"), atom("q")];
        for f in corpus(&opts, seed, 3) {
            let b = common::random_binding(&mut r, &f, &pool);
            let strat = r.gen_range(0..=2);
            let v = symbolic_evaluate(&f, &b, strat).unwrap();
            let t = truncate(&f, &b, strat, 1 << 20).unwrap();
            prop_assert_eq!(common::naive_eval(&t.structure, &t.assignment, &f), v.value);
        }
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

#[test]
fn sweep_levels_partition_by_least_support() {
    let report = wellorder_counterexample_sweep(3, OrderKind::Strict).unwrap();
    for lvl in &report.levels {
        let s = lvl.support_size;
        assert_eq!(lvl.types, type_count(2, s));
        assert_eq!(lvl.predicates, 1u64 << lvl.types);
        // each predicate over s atoms has exactly one least support
        let by_least: u64 = report.levels[..=s]
            .iter()
            .map(|l| binomial(s, l.support_size) * l.canonical)
            .sum();
        assert_eq!(by_least, lvl.predicates, "support size {s}");
    }
    assert_eq!(report.total_linear_orders, 0);
}
