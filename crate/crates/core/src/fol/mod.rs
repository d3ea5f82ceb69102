//! First-order linear logic (MILL1) proof nets: polarized unfolding, axiom
//! links under unification, and the contraction criterion.

mod graph;
mod structure;
mod switching;
mod unify;

use std::ops::ControlFlow;

use crate::formula::{FoFormula, FoSequent, FoTerm, LambekFormula, Polarity};
use crate::grammar::{Grammar, LexFormula};
use crate::mm::{combinations, entries_per_word, ProofSearch, ProveError};
use crate::translate::{translate_with, PositionedEntry};

pub use graph::{CEdge, CStep, ContractionGraph};
pub use structure::{unfold_fol, FoLink, FoLinkError, FoLinkKind, FoOcc, FoRule, FoStructure, OccId};
pub use switching::{
    is_net_by_switching, switching_oracle, Counterexample, OracleError, DEFAULT_SWITCHING_CAP,
};
pub use unify::{Unifier, UnifyError};

/// Builds the contraction graph of a structure and contracts it fully.
pub fn to_contraction_graph(ps: &FoStructure) -> ContractionGraph {
    ContractionGraph::from_structure(ps)
}

/// Contracts to normal form, returning the steps taken.
pub fn contract_fol(g: &mut ContractionGraph) -> Vec<CStep> {
    g.contract()
}

/// Contraction criterion: a complete structure is a net iff its graph
/// contracts to a single vertex.
pub fn is_fol_proofnet(ps: &FoStructure) -> bool {
    let mut g = ContractionGraph::from_structure(ps);
    g.contract();
    g.is_single_vertex()
}

/// A partial proof structure together with its maximally contracted graph.
#[derive(Debug, Clone)]
pub struct FolState {
    pub ps: FoStructure,
    pub graph: ContractionGraph,
}

impl FolState {
    pub fn new(sequent: &FoSequent) -> Self {
        let ps = unfold_fol(sequent);
        let mut graph = ContractionGraph::from_structure(&ps);
        graph.contract();
        FolState { ps, graph }
    }

    /// False when some cycle or scope violation already rules out every
    /// completion.
    pub fn viable(&self) -> bool {
        !self.graph.has_loop() && self.graph.scope_violation().is_none()
    }

    /// Adds an axiom link and contracts, rejecting links that unify badly or
    /// that no completion could survive.
    pub fn link(&self, neg: OccId, pos: OccId) -> Result<FolState, FoLinkError> {
        let mut next = self.clone();
        next.ps.add_axiom(neg, pos)?;
        next.graph.refresh(&next.ps);
        next.graph.add_solid(neg, pos);
        next.graph.contract();
        if next.graph.has_loop() {
            return Err(FoLinkError::Scope("(cycle)".into()));
        }
        if let Some(x) = next.graph.scope_violation() {
            return Err(FoLinkError::Scope(x));
        }
        Ok(next)
    }

    /// For each unlinked atom, the partners it can still be linked to, each
    /// with the resulting state.
    pub fn options(&self) -> Vec<(OccId, Vec<(OccId, FolState)>)> {
        let negs = self.ps.unlinked(Polarity::Negative);
        let poss = self.ps.unlinked(Polarity::Positive);
        let mut by_neg: Vec<(OccId, Vec<(OccId, FolState)>)> =
            negs.iter().map(|&n| (n, Vec::new())).collect();
        let mut by_pos: Vec<(OccId, Vec<(OccId, FolState)>)> =
            poss.iter().map(|&p| (p, Vec::new())).collect();
        for (i, &n) in negs.iter().enumerate() {
            for (j, &p) in poss.iter().enumerate() {
                if let Ok(s) = self.link(n, p) {
                    by_neg[i].1.push((p, s.clone()));
                    by_pos[j].1.push((n, s));
                }
            }
        }
        let mut all = by_neg;
        all.extend(by_pos);
        all.sort_by_key(|(o, _)| *o);
        all
    }
}

/// Unifying `neg` with `pos` under the current unifier; fails on a clash or
/// when the link would trap an eigenvariable outside its scope.
pub fn axiom_link(state: &FolState, neg: OccId, pos: OccId) -> Result<Unifier, FoLinkError> {
    state.link(neg, pos).map(|s| s.ps.unifier)
}

/// A MILL1 proof net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FolProof {
    pub combination: usize,
    pub entries: Vec<usize>,
    pub sequent: FoSequent,
    pub matching: Vec<(OccId, OccId)>,
    /// Complete structure with every metavariable bound or grounded.
    pub structure: FoStructure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FolOptions {
    pub max_proofs: Option<usize>,
    /// Prune with the contracted partial graph and pick the most constrained
    /// atom first. Disabling gives plain enumerate-then-check.
    pub greedy: bool,
}

impl Default for FolOptions {
    fn default() -> Self {
        FolOptions {
            max_proofs: None,
            greedy: true,
        }
    }
}

/// Every proof net of the sequent, one per axiom matching.
pub fn prove_fol_sequent(sequent: &FoSequent, opts: &FolOptions) -> Vec<FolProof> {
    let mut out = Vec::new();
    prove_into(sequent, opts, 0, &[], &mut out);
    out
}

fn prove_into(
    sequent: &FoSequent,
    opts: &FolOptions,
    combination: usize,
    entries: &[usize],
    out: &mut Vec<FolProof>,
) {
    let full = |out: &Vec<FolProof>| opts.max_proofs.is_some_and(|m| out.len() >= m);
    if full(out) {
        return;
    }
    let mut record = |ps: &FoStructure| {
        let mut done = ps.clone();
        done.ground();
        if is_fol_proofnet(&done) {
            out.push(FolProof {
                combination,
                entries: entries.to_vec(),
                sequent: sequent.clone(),
                matching: done.matching(),
                structure: done,
            });
        }
        if full(out) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    };
    if opts.greedy {
        let start = FolState::new(sequent);
        if start.viable() {
            let _ = search(&start, &mut record);
        }
    } else {
        let _ = for_each_complete(&unfold_fol(sequent), &mut record);
    }
}

fn search(
    state: &FolState,
    record: &mut impl FnMut(&FoStructure) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if state.ps.is_complete() {
        return record(&state.ps);
    }
    let options = state.options();
    let Some((_, best)) = options.into_iter().min_by_key(|(o, c)| (c.len(), *o)) else {
        return ControlFlow::Continue(());
    };
    for (_, next) in best {
        search(&next, record)?;
    }
    ControlFlow::Continue(())
}

/// Enumerates every complete, unifiable matching (no pruning).
pub fn for_each_complete(
    ps: &FoStructure,
    visit: &mut impl FnMut(&FoStructure) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let negs = ps.unlinked(Polarity::Negative);
    let Some(&n) = negs.first() else {
        return if ps.unlinked(Polarity::Positive).is_empty() {
            visit(ps)
        } else {
            ControlFlow::Continue(())
        };
    };
    for p in ps.unlinked(Polarity::Positive) {
        let mut next = ps.clone();
        if next.add_axiom(n, p).is_ok() {
            for_each_complete(&next, visit)?;
        }
    }
    ControlFlow::Continue(())
}

/// All complete structures of a sequent, nets or not.
pub fn complete_structures(sequent: &FoSequent) -> Vec<FoStructure> {
    let mut out = Vec::new();
    let _ = for_each_complete(&unfold_fol(sequent), &mut |ps| {
        out.push(ps.clone());
        ControlFlow::<()>::Continue(())
    });
    out
}

/// The first-order sequent for a choice of lexical entries.
pub fn sentence_sequent(
    formulas: &[LexFormula],
    goal: &LexFormula,
) -> Result<FoSequent, ProveError> {
    let n = formulas.len() as u32;
    let mut fresh = crate::formula::Fresh::new();
    let mut antecedent = Vec::new();
    for (i, f) in formulas.iter().enumerate() {
        antecedent.push(place(&PositionedEntry::at_word(f.clone(), i), &mut fresh));
    }
    let succedent = place(
        &PositionedEntry {
            formula: goal.clone(),
            left: 0,
            right: n,
        },
        &mut fresh,
    );
    Ok(FoSequent {
        antecedent,
        succedent,
    })
}

fn place(e: &PositionedEntry, fresh: &mut crate::formula::Fresh) -> FoFormula {
    match e.formula.at_position(e.left, e.right) {
        LexFormula::FirstOrder(f) => f,
        other => {
            let l: LambekFormula = other.to_lambek().expect("categorial formula");
            translate_with(&l, &FoTerm::Const(e.left), &FoTerm::Const(e.right), fresh)
        }
    }
}

/// Parses `words` with the first-order engine: categorial entries are
/// translated, first-order entries placed at their word's span.
pub fn prove_fol(
    g: &Grammar,
    words: &[&str],
    goal: Option<&LexFormula>,
    opts: &FolOptions,
) -> Result<ProofSearch<FolProof>, ProveError> {
    let per_word = entries_per_word(g, words)?;
    let goals: Vec<LexFormula> = match goal {
        Some(f) => vec![f.clone()],
        None => g.goals.clone(),
    };
    let sizes: Vec<usize> = per_word.iter().map(Vec::len).collect();
    let mut out = ProofSearch::default();
    for (k, combo) in combinations(&sizes).into_iter().enumerate() {
        let formulas: Vec<LexFormula> = combo
            .iter()
            .zip(&per_word)
            .map(|(&i, es)| es[i].1.clone())
            .collect();
        let entries: Vec<usize> = combo.iter().zip(&per_word).map(|(&i, es)| es[i].0).collect();
        for goal in &goals {
            let sequent = sentence_sequent(&formulas, goal)?;
            prove_into(&sequent, opts, k, &entries, &mut out.proofs);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_fo_sequent;

    fn seq(s: &str) -> FoSequent {
        parse_fo_sequent(s).unwrap()
    }

    const STUCK: &str = "a -o exists x.b(x) |- exists y.(a -o b(y))";

    #[test]
    fn identity() {
        let ps = complete_structures(&seq("a |- a"));
        assert_eq!(ps.len(), 1);
        assert!(is_fol_proofnet(&ps[0]));
        assert_eq!(switching_oracle(&ps[0], DEFAULT_SWITCHING_CAP), Ok(None));
        assert_eq!(prove_fol_sequent(&seq("a |- a"), &FolOptions::default()).len(), 1);
    }

    #[test]
    fn stuck_after_five_solid_contractions() {
        let all = complete_structures(&seq(STUCK));
        assert_eq!(all.len(), 1);
        let ps = &all[0];
        let mut g = to_contraction_graph(ps);
        assert_eq!(g.vertices.len(), 8);
        let trace = contract_fol(&mut g);
        assert_eq!(trace.iter().map(CStep::letter).collect::<String>(), "ccccc");
        assert_eq!(g.vertices.len(), 3);
        assert!(!is_fol_proofnet(ps));
        let cx = switching_oracle(ps, DEFAULT_SWITCHING_CAP).unwrap().unwrap();
        assert!(cx.cyclic);
        assert!(prove_fol_sequent(&seq(STUCK), &FolOptions::default()).is_empty());
    }

    #[test]
    fn scope_violation_on_link() {
        let state = FolState::new(&seq(STUCK));
        let a_neg = state
            .ps
            .unlinked(Polarity::Negative)
            .into_iter()
            .find(|&o| state.ps.formula(o).to_string() == "a")
            .unwrap();
        let a_pos = state
            .ps
            .unlinked(Polarity::Positive)
            .into_iter()
            .find(|&o| state.ps.formula(o).to_string() == "a")
            .unwrap();
        let after_a = state.link(a_neg, a_pos).unwrap();
        let b_neg = after_a.ps.unlinked(Polarity::Negative)[0];
        let b_pos = after_a.ps.unlinked(Polarity::Positive)[0];
        assert!(after_a.ps.unify_pair(b_neg, b_pos).is_ok());
        assert!(matches!(axiom_link(&after_a, b_neg, b_pos), Err(FoLinkError::Scope(_))));
    }

    #[test]
    fn lollipop_matchings() {
        let all = complete_structures(&seq("a -o a |- a -o a"));
        assert_eq!(all.len(), 2);
        let verdicts: Vec<bool> = all.iter().map(is_fol_proofnet).collect();
        assert_eq!(verdicts.iter().filter(|&&v| v).count(), 1);
        for ps in &all {
            assert_eq!(
                is_fol_proofnet(ps),
                is_net_by_switching(ps, DEFAULT_SWITCHING_CAP).unwrap()
            );
        }
    }

    #[test]
    fn quantifier_shift_is_derivable() {
        let s = seq("forall x.(a -o b(x)) |- a -o forall y.b(y)");
        assert_eq!(prove_fol_sequent(&s, &FolOptions::default()).len(), 1);
        let bad = seq("a -o forall y.b(y) |- forall x.(a -o b(x))");
        assert_eq!(prove_fol_sequent(&bad, &FolOptions::default()).len(), 1);
        let wrong = seq("exists x.b(x) |- forall y.b(y)");
        assert!(prove_fol_sequent(&wrong, &FolOptions::default()).is_empty());
    }
}
