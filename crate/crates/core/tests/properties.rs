mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use tlg_core::fol::{
    is_fol_proofnet, prove_fol_sequent, switching_oracle, FolOptions, Unifier,
    DEFAULT_SWITCHING_CAP,
};
use tlg_core::formula::{parse_foll, parse_lambek, parse_mm};
use tlg_core::grammar::associativity;
use tlg_core::mm::{prove_mm_sequent, MmOptions};
use tlg_core::nd::{check_fo_nd, sequentialize_structure};
use tlg_core::translate::translate;
use tlg_core::{FoTerm, MillFormula, Mode, Sequent};

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lambek_roundtrip(seed: u64, size in 0usize..8) {
        let f = common::lambek(&mut rng(seed), size, &["a", "b", "np"], true);
        prop_assert_eq!(parse_lambek(&f.to_string()).unwrap(), f.clone());
        let m = f.with_mode(&Mode::new("a"));
        prop_assert_eq!(parse_mm(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn fo_roundtrip(seed: u64, depth in 0usize..4) {
        let s = common::fo_sequent(&mut rng(seed), depth);
        for f in s.antecedent.iter().chain([&s.succedent]) {
            let back = parse_foll(&f.to_string()).unwrap();
            prop_assert!(back.alpha_eq(f), "{} reparsed as {}", f, back);
        }
    }

    #[test]
    fn translation_forgets_to_the_same_formula(seed: u64, size in 0usize..8) {
        let f = common::lambek(&mut rng(seed), size, &["a", "b"], true);
        let t = translate(&f, &FoTerm::var("x"), &FoTerm::var("y"));
        prop_assert_eq!(MillFormula::from(&t), MillFormula::from(&f));
        prop_assert_eq!(t.free_vars().len(), 2);
    }

    #[test]
    fn contraction_agrees_with_switching(seed: u64, depth in 1usize..4) {
        let mut r = rng(seed);
        let s = common::fo_sequent(&mut r, depth);
        if let Some(ps) = common::random_complete(&mut r, &s) {
            if let Ok(c) = switching_oracle(&ps, DEFAULT_SWITCHING_CAP) {
                prop_assert_eq!(is_fol_proofnet(&ps), c.is_none());
            }
        }
    }

    #[test]
    fn nets_sequentialize_to_checked_proofs(seed: u64, depth in 1usize..4) {
        let mut r = rng(seed);
        let s = common::fo_sequent(&mut r, depth);
        if let Some(ps) = common::random_complete(&mut r, &s) {
            if is_fol_proofnet(&ps) {
                let nd = sequentialize_structure(&ps).unwrap();
                prop_assert_eq!(check_fo_nd(&nd, &s), Ok(()));
            }
        }
    }

    #[test]
    fn greedy_search_finds_the_same_nets(seed: u64, depth in 1usize..3) {
        let s = common::fo_sequent(&mut rng(seed), depth);
        let greedy = prove_fol_sequent(&s, &FolOptions { greedy: true, max_proofs: None });
        let naive = prove_fol_sequent(&s, &FolOptions { greedy: false, max_proofs: None });
        prop_assert_eq!(greedy.len(), naive.len());
    }

    #[test]
    fn filter_keeps_every_net(seed: u64, sizes in prop::collection::vec(0usize..3, 2..4)) {
        let mut r = rng(seed);
        let a = Mode::new("a");
        let mut fs: Vec<_> = sizes
            .iter()
            .map(|&n| common::lambek(&mut r, n, &["a", "b"], false).with_mode(&a))
            .collect();
        let succedent = fs.pop().unwrap();
        let s = Sequent { antecedent: fs, succedent };
        let rules = associativity(&a);
        let on = prove_mm_sequent(&s, &rules, &MmOptions { filter: true, ..MmOptions::default() });
        let off = prove_mm_sequent(&s, &rules, &MmOptions { filter: false, ..MmOptions::default() });
        prop_assume!(!on.budget_exhausted && !off.budget_exhausted);
        let key = |p: &tlg_core::mm::MmProof| p.matching.clone();
        let mut on: Vec<_> = on.proofs.iter().map(key).collect();
        let mut off: Vec<_> = off.proofs.iter().map(key).collect();
        on.sort();
        off.sort();
        prop_assert_eq!(on, off);
    }

    #[test]
    fn unifiers_stay_idempotent(pairs in prop::collection::vec((0u32..7, 0u32..7), 1..8)) {
        let term = |k: u32| if k < 4 { FoTerm::var(format!("_{k}")) } else { FoTerm::Const(k - 4) };
        let flexible = |v: &str| v.starts_with('_');
        let mut u = Unifier::new();
        let mut unified = Vec::new();
        for (a, b) in pairs {
            let mut next = u.clone();
            if next.unify_terms(&term(a), &term(b), &flexible).is_ok() {
                u = next;
                unified.push((a, b));
            }
            prop_assert!(u.is_idempotent());
        }
        for (a, b) in unified {
            prop_assert_eq!(u.resolve(&term(a)), u.resolve(&term(b)));
        }
    }
}
