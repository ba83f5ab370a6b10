use proptest::prelude::*;

use henkin::corpus::{corpus, CorpusOptions};
use henkin::schemas::{build, SchemaId};
use henkin::syntax::{derivation, normalize_rename, parse, print, pv, x, Formula, Var};

fn deep() -> CorpusOptions {
    CorpusOptions {
        max_depth: 6,
        ..CorpusOptions::default()
    }
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        for f in corpus(&deep(), seed, 8) {
            prop_assert_eq!(parse(&print(&f)).unwrap(), f);
        }
    }

    #[test]
    fn accepted_formulas_have_matching_derivations(seed in any::<u64>()) {
        for f in corpus(&deep(), seed, 8) {
            let d = derivation(&f).unwrap();
            prop_assert!(d.conclusion_matches(&f));
        }
    }

    #[test]
    fn renaming_fixes_well_formed_input(seed in any::<u64>()) {
        for f in corpus(&CorpusOptions::default(), seed, 8) {
            prop_assert_eq!(normalize_rename(&f), f);
        }
    }

    #[test]
    fn free_variables_survive_printing(seed in any::<u64>()) {
        for f in corpus(&CorpusOptions::default(), seed, 8) {
            prop_assert_eq!(parse(&print(&f)).unwrap().free_vars(), f.free_vars());
        }
    }

    #[test]
    fn instances_stay_within_the_signature(seed in any::<u64>()) {
        let mut opts = CorpusOptions::with_free_tuple(3, &[x(1)], &[1]);
        opts.free_preds = Some(vec![pv(1, 1)]);
        for h in corpus(&opts, seed, 4) {
            for id in [SchemaId::choice(1, 1, h.clone()), SchemaId::choice_h(1, 1, h.clone())] {
                let f = build(&id).unwrap();
                prop_assert!(f.free_vars().is_empty(), "{}", print(&f));
                derivation(&f).unwrap();
            }
            let c = build(&SchemaId::comprehension(1, h.clone())).unwrap();
            let allowed = [Var::Pred(pv(1, 1))];
            prop_assert!(c.free_vars().iter().all(|v| allowed.contains(v)));
        }
    }
}

#[test]
fn documented_examples() {
    assert_eq!(parse("x1 = x1").unwrap(), Formula::EqInd(x(1), x(1)));
    assert_eq!(
        parse("A1^2 x1 x2").unwrap(),
        Formula::Atom(pv(1, 2), vec![x(1), x(2)])
    );
    assert!(parse("all x1 . ex x1 . A0^1 x1").is_err());
    assert_eq!(print(&Formula::EqInd(x(1), x(2))), "x1 = x2");
    assert_eq!(
        print(&Formula::not(Formula::Atom(pv(0, 1), vec![x(0)]))),
        "~(A0^1 x0)"
    );
    assert_eq!(
        print(&Formula::exists(
            pv(0, 1),
            Formula::Atom(pv(0, 1), vec![x(0)])
        )),
        "ex A0^1 . A0^1 x0"
    );
    let f = parse("ex A0^1 . A0^1 x3").unwrap();
    assert_eq!(
        f.free_vars().into_iter().collect::<Vec<_>>(),
        [Var::Ind(x(3))]
    );
}
