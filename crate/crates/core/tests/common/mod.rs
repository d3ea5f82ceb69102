//! Random generators shared by the property and acceptance tests.
#![allow(dead_code)]

use std::ops::ControlFlow;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use tlg_core::fol::{unfold_fol, FoStructure};
use tlg_core::{FoFormula, FoSequent, FoTerm, LambekFormula, Polarity};

/// Random Lambek formula with exactly `connectives` binary connectives.
pub fn lambek(rng: &mut StdRng, connectives: usize, atoms: &[&str], products: bool) -> LambekFormula {
    if connectives == 0 {
        return LambekFormula::atom(*atoms.choose(rng).unwrap());
    }
    let left = rng.gen_range(0..connectives);
    let a = lambek(rng, left, atoms, products);
    let b = lambek(rng, connectives - 1 - left, atoms, products);
    match rng.gen_range(0..if products { 3 } else { 2 }) {
        0 => LambekFormula::over((), a, b),
        1 => LambekFormula::under((), a, b),
        _ => LambekFormula::prod((), a, b),
    }
}

fn fo_formula(rng: &mut StdRng, depth: usize, scope: &mut Vec<String>, next: &mut usize) -> FoFormula {
    if depth == 0 || rng.gen_bool(0.25) {
        let pred = ["p", "q"].choose(rng).unwrap();
        let arg = if !scope.is_empty() && rng.gen_bool(0.7) {
            FoTerm::var(scope.choose(rng).unwrap().clone())
        } else {
            FoTerm::Const(rng.gen_range(0..2))
        };
        return FoFormula::atom(*pred, vec![arg]);
    }
    match rng.gen_range(0..4) {
        0 => {
            let a = fo_formula(rng, depth - 1, scope, next);
            FoFormula::implies(a, fo_formula(rng, depth - 1, scope, next))
        }
        1 => {
            let a = fo_formula(rng, depth - 1, scope, next);
            FoFormula::tensor(a, fo_formula(rng, depth - 1, scope, next))
        }
        k => {
            let x = format!("x{next}");
            *next += 1;
            scope.push(x.clone());
            let body = fo_formula(rng, depth - 1, scope, next);
            scope.pop();
            if k == 2 {
                FoFormula::forall(x, body)
            } else {
                FoFormula::exists(x, body)
            }
        }
    }
}

/// Random MILL1 sequent over unary predicates `p`, `q` and positions 0, 1.
pub fn fo_sequent(rng: &mut StdRng, depth: usize) -> FoSequent {
    let mut next = 0;
    let n = rng.gen_range(1..=3);
    let antecedent = (0..n)
        .map(|_| fo_formula(rng, depth, &mut Vec::new(), &mut next))
        .collect();
    let succedent = fo_formula(rng, depth, &mut Vec::new(), &mut next);
    FoSequent {
        antecedent,
        succedent,
    }
}

pub fn par_links(ps: &FoStructure) -> usize {
    ps.links
        .iter()
        .filter(|l| l.rule.kind() == tlg_core::fol::FoLinkKind::Par)
        .count()
}

/// A random complete structure for the sequent: atoms are linked in random
/// order to random unifiable partners, backtracking on dead ends.
pub fn random_complete(rng: &mut StdRng, sequent: &FoSequent) -> Option<FoStructure> {
    fn go(rng: &mut StdRng, ps: &FoStructure, budget: &mut usize) -> ControlFlow<FoStructure> {
        if *budget == 0 {
            return ControlFlow::Continue(());
        }
        *budget -= 1;
        let negs = ps.unlinked(Polarity::Negative);
        let Some(&n) = negs.choose(rng) else {
            return if ps.unlinked(Polarity::Positive).is_empty() {
                ControlFlow::Break(ps.clone())
            } else {
                ControlFlow::Continue(())
            };
        };
        let mut poss = ps.unlinked(Polarity::Positive);
        poss.shuffle(rng);
        for p in poss {
            let mut next = ps.clone();
            if next.add_axiom(n, p).is_ok() {
                go(rng, &next, budget)?;
            }
        }
        ControlFlow::Continue(())
    }
    let ps = unfold_fol(sequent);
    if ps.unlinked(Polarity::Negative).len() != ps.unlinked(Polarity::Positive).len() {
        return None;
    }
    let mut budget = 200;
    match go(rng, &ps, &mut budget) {
        ControlFlow::Break(mut done) => {
            done.ground();
            Some(done)
        }
        ControlFlow::Continue(()) => None,
    }
}
