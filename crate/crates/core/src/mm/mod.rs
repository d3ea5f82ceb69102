//! Multimodal proof nets: unfolding, axiom matchings, contractions and
//! structural rewrites.

mod filter;
mod matching;
mod reduce;
mod structure;

use std::collections::HashSet;
use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{MMFormula, Mode, Sequent};
use crate::grammar::{Grammar, GrammarDialect, LexFormula, StructuralRule};

pub use filter::mll_filter;
pub use matching::{atoms_balanced, candidates, enumerate_matchings, for_each_matching, Matching};
pub use reduce::{apply_step, contract_step, rewrite_step, MmStep, StepError};
pub use structure::{
    unfold_mm, LinkError, LinkId, LinkKind, MmLink, MmRule, MmStructure, MmVertex, VertexId,
};

/// An antecedent structure: a binary tree of words (by position) or
/// withdrawn hypotheses, joined by structural connectives.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Structure {
    Word(usize),
    Hyp(usize),
    Node(Mode, Box<Structure>, Box<Structure>),
}

impl Structure {
    pub fn node(m: Mode, l: Structure, r: Structure) -> Self {
        Structure::Node(m, Box::new(l), Box::new(r))
    }

    /// Leaves from left to right.
    pub fn leaves(&self) -> Vec<&Structure> {
        match self {
            Structure::Node(_, l, r) => {
                let mut v = l.leaves();
                v.extend(r.leaves());
                v
            }
            leaf => vec![leaf],
        }
    }

    /// Renders with `leaf` for the leaves and `(x om y)` for nodes.
    pub fn render(&self, leaf: &impl Fn(&Structure) -> String) -> String {
        match self {
            Structure::Node(m, l, r) => {
                format!("({} o{m} {})", l.render(leaf), r.render(leaf))
            }
            other => leaf(other),
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|l| match l {
            Structure::Word(i) => format!("w{i}"),
            Structure::Hyp(i) => format!("h{i}"),
            Structure::Node(..) => unreachable!(),
        }))
    }
}

/// If the structure is a single tensor tree rooted at the goal vertex
/// with hypothesis leaves, returns it.
pub fn tensor_tree(aps: &MmStructure) -> Option<Structure> {
    if aps.links.values().any(|l| l.kind == LinkKind::Par) {
        return None;
    }
    let mut roots = aps.vertices.iter().filter(|(_, v)| v.conc);
    let (&root, _) = roots.next()?;
    if roots.next().is_some() {
        return None;
    }
    let mut seen_links = 0;
    let mut seen_vertices = 0;
    fn build(
        aps: &MmStructure,
        v: VertexId,
        links: &mut usize,
        verts: &mut usize,
    ) -> Option<Structure> {
        *verts += 1;
        if *verts > aps.vertices.len() {
            return None;
        }
        match aps.up(v) {
            None => aps.vertices[&v].hyp.map(Structure::Word),
            Some(l) => {
                *links += 1;
                let lk = &aps.links[&l];
                let left = build(aps, lk.premisses[0], links, verts)?;
                let right = build(aps, lk.premisses[1], links, verts)?;
                Some(Structure::node(lk.mode.clone(), left, right))
            }
        }
    }
    let tree = build(aps, root, &mut seen_links, &mut seen_vertices)?;
    (seen_links == aps.links.len() && seen_vertices == aps.vertices.len()).then_some(tree)
}

pub(crate) fn yield_matches(tree: &Structure, n: usize) -> bool {
    let leaves = tree.leaves();
    leaves.len() == n
        && leaves
            .iter()
            .enumerate()
            .all(|(i, l)| matches!(l, Structure::Word(j) if *j == i))
}

/// Verdict of the correctness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetCheck {
    Net { trace: Vec<MmStep>, tree: Structure },
    NotNet,
    /// The rewrite budget ran out before the search space was exhausted.
    BudgetExceeded,
}

impl NetCheck {
    pub fn is_net(&self) -> bool {
        matches!(self, NetCheck::Net { .. })
    }
}

pub const DEFAULT_REWRITE_BUDGET: usize = 512;

struct Search<'a> {
    rules: &'a [StructuralRule],
    n: usize,
    visited: HashSet<Vec<u64>>,
    budget: usize,
    exhausted: bool,
}

impl Search<'_> {
    fn dfs(&mut self, aps: &MmStructure, trace: &mut Vec<MmStep>) -> Option<Structure> {
        if let Some(tree) = tensor_tree(aps) {
            if yield_matches(&tree, self.n) {
                return Some(tree);
            }
        }
        if !self.visited.insert(aps.canonical_key()) {
            return None;
        }
        for (step, next) in contract_step(aps) {
            trace.push(step);
            if let Some(t) = self.dfs(&next, trace) {
                return Some(t);
            }
            trace.pop();
        }
        for (step, next) in rewrite_step(aps, self.rules) {
            if self.budget == 0 {
                self.exhausted = true;
                return None;
            }
            self.budget -= 1;
            trace.push(step);
            if let Some(t) = self.dfs(&next, trace) {
                return Some(t);
            }
            trace.pop();
        }
        None
    }
}

/// Decides whether a complete proof structure is a proof net: some
/// interleaving of contractions and rewrites must reach a tensor tree whose
/// root is the goal and whose leaves are the antecedent formulas in order.
pub fn is_mm_proofnet(ps: &MmStructure, rules: &[StructuralRule], budget: usize) -> NetCheck {
    let mut search = Search {
        rules,
        n: ps.sequent.antecedent.len(),
        visited: HashSet::new(),
        budget,
        exhausted: false,
    };
    let mut trace = Vec::new();
    match search.dfs(&ps.to_abstract(), &mut trace) {
        Some(tree) => NetCheck::Net { trace, tree },
        None if search.exhausted => NetCheck::BudgetExceeded,
        None => NetCheck::NotNet,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MmOptions {
    pub rewrite_budget: usize,
    /// Prune partial matchings with the MLL filter.
    pub filter: bool,
    pub max_proofs: Option<usize>,
}

impl Default for MmOptions {
    fn default() -> Self {
        MmOptions {
            rewrite_budget: DEFAULT_REWRITE_BUDGET,
            filter: true,
            max_proofs: None,
        }
    }
}

/// A proof found by the multimodal engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmProof {
    /// Index of the lexical combination (0 for bare sequents).
    pub combination: usize,
    /// Chosen lexicon entry per word.
    pub entries: Vec<usize>,
    pub sequent: Sequent<Mode>,
    pub matching: Matching,
    /// The complete proof structure, formulas included.
    pub structure: MmStructure,
    pub trace: Vec<MmStep>,
    /// The antecedent tree the net contracts to.
    pub tree: Structure,
}

/// Proofs found, and whether some candidate was abandoned for lack of budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofSearch<P> {
    pub proofs: Vec<P>,
    pub budget_exhausted: bool,
}

impl<P> Default for ProofSearch<P> {
    fn default() -> Self {
        ProofSearch {
            proofs: Vec::new(),
            budget_exhausted: false,
        }
    }
}

impl<P> ProofSearch<P> {
    fn full(&self, max: Option<usize>) -> bool {
        max.is_some_and(|m| self.proofs.len() >= m)
    }
}

/// All proof nets for a sequent, one per successful matching.
pub fn prove_mm_sequent(
    sequent: &Sequent<Mode>,
    rules: &[StructuralRule],
    opts: &MmOptions,
) -> ProofSearch<MmProof> {
    let mut out = ProofSearch::default();
    prove_into(sequent, rules, opts, 0, &[], &mut out);
    out
}

fn prove_into(
    sequent: &Sequent<Mode>,
    rules: &[StructuralRule],
    opts: &MmOptions,
    combination: usize,
    entries: &[usize],
    out: &mut ProofSearch<MmProof>,
) {
    if out.full(opts.max_proofs) {
        return;
    }
    let ps = unfold_mm(sequent);
    let _ = for_each_matching::<()>(&ps, opts.filter, &mut |complete, matching| {
        match is_mm_proofnet(complete, rules, opts.rewrite_budget) {
            NetCheck::Net { trace, tree } => out.proofs.push(MmProof {
                combination,
                entries: entries.to_vec(),
                sequent: sequent.clone(),
                matching: matching.clone(),
                structure: complete.clone(),
                trace,
                tree,
            }),
            NetCheck::NotNet => {}
            NetCheck::BudgetExceeded => out.budget_exhausted = true,
        }
        if out.full(opts.max_proofs) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProveError {
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("no usable lexical entry for `{word}` with the {engine} engine")]
    NoUsableEntry { word: String, engine: &'static str },
    #[error("the multimodal engine needs a grammar with declared modes")]
    NotMultimodal,
    #[error("goal `{0}` is not a categorial formula of the grammar")]
    BadGoal(String),
}

/// Lexical entries per word, as `(entry index, entry)` pairs, failing on
/// unknown words.
pub(crate) fn entries_per_word<'g>(
    g: &'g Grammar,
    words: &[&str],
) -> Result<Vec<Vec<(usize, &'g LexFormula)>>, ProveError> {
    words
        .iter()
        .map(|w| {
            let e = g.lookup(w);
            if e.is_empty() {
                Err(ProveError::UnknownWord(w.to_string()))
            } else {
                Ok(e.iter().enumerate().map(|(i, e)| (i, &e.formula)).collect())
            }
        })
        .collect()
}

/// Cartesian product in lexicographic order (first word slowest).
pub(crate) fn combinations(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |i| {
                    let mut p = prefix.clone();
                    p.push(i);
                    p
                })
            })
            .collect();
    }
    out
}

/// Parses `words` against the grammar's goals (or `goal` if given) and
/// returns every proof, ordered by lexical combination then goal then matching.
pub fn prove_mm(
    g: &Grammar,
    words: &[&str],
    goal: Option<&MMFormula>,
    opts: &MmOptions,
) -> Result<ProofSearch<MmProof>, ProveError> {
    if g.dialect() != GrammarDialect::Multimodal {
        return Err(ProveError::NotMultimodal);
    }
    let per_word = entries_per_word(g, words)?;
    let usable: Vec<Vec<(usize, MMFormula)>> = per_word
        .iter()
        .zip(words)
        .map(|(es, w)| {
            let v: Vec<(usize, MMFormula)> = es
                .iter()
                .filter_map(|(i, f)| match f {
                    LexFormula::Multimodal(m) => Some((*i, m.clone())),
                    _ => None,
                })
                .collect();
            if v.is_empty() {
                Err(ProveError::NoUsableEntry {
                    word: w.to_string(),
                    engine: "multimodal",
                })
            } else {
                Ok(v)
            }
        })
        .collect::<Result<_, _>>()?;
    let goals: Vec<MMFormula> = match goal {
        Some(f) => vec![f.clone()],
        None => g
            .goals
            .iter()
            .map(|f| match f {
                LexFormula::Multimodal(m) => Ok(m.clone()),
                other => Err(ProveError::BadGoal(other.to_string())),
            })
            .collect::<Result<_, _>>()?,
    };
    let sizes: Vec<usize> = usable.iter().map(Vec::len).collect();
    let mut out = ProofSearch::default();
    for (k, combo) in combinations(&sizes).into_iter().enumerate() {
        let antecedent: Vec<MMFormula> =
            combo.iter().zip(&usable).map(|(&i, es)| es[i].1.clone()).collect();
        let entries: Vec<usize> = combo.iter().zip(&usable).map(|(&i, es)| es[i].0).collect();
        for goal in &goals {
            let sequent = Sequent {
                antecedent: antecedent.clone(),
                succedent: goal.clone(),
            };
            prove_into(&sequent, &g.rules, opts, k, &entries, &mut out);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_mm_sequent;
    use crate::grammar::parse_rule;

    fn ass() -> Vec<StructuralRule> {
        vec![
            parse_rule("assL: (x oa y) oa z => x oa (y oa z)").unwrap(),
            parse_rule("assR: x oa (y oa z) => (x oa y) oa z").unwrap(),
        ]
    }

    fn single_matching(text: &str) -> MmStructure {
        let ps = unfold_mm(&parse_mm_sequent(text).unwrap());
        let mut all = enumerate_matchings(&ps, false);
        assert_eq!(all.len(), 1);
        all.pop().unwrap().0
    }

    #[test]
    fn composition_needs_associativity() {
        let ps = single_matching("a/a b, b/a c |- a/a c");
        assert!(mll_filter(&ps));
        assert_eq!(is_mm_proofnet(&ps, &[], 512), NetCheck::NotNet);
        let NetCheck::Net { trace, .. } = is_mm_proofnet(&ps, &ass(), 512) else {
            panic!("derivable with associativity")
        };
        assert_eq!(trace.len(), 2);
        // x oa (y oa z) => (x oa y) oa z rebrackets the two hypotheses together
        assert!(matches!(&trace[0], MmStep::Rewrite { rule, .. } if rule == "assR"));
        assert!(matches!(&trace[1], MmStep::Contract { rule, .. } if rule == "/I"));
    }

    #[test]
    fn identity_is_a_net() {
        let ps = single_matching("c /i b |- c /i b");
        let NetCheck::Net { trace, tree } = is_mm_proofnet(&ps, &[], 512) else { panic!() };
        assert_eq!(trace.len(), 1);
        assert_eq!(tree, Structure::Word(0));
        let aps = ps.to_abstract();
        let (_, after) = contract_step(&aps).pop().unwrap();
        assert_eq!(after.vertices.len(), 1);
    }

    #[test]
    fn product_introduction_contracts_in_two_steps() {
        let ps = single_matching("a |- (a *i b) /i b");
        let NetCheck::Net { trace, .. } = is_mm_proofnet(&ps, &[], 512) else { panic!() };
        assert_eq!(trace.len(), 1);
        // one /I contraction leaves a single vertex; the *I tensor is consumed with it
        let ps = single_matching("(a /i b) *i b |- a");
        let NetCheck::Net { trace, tree } = is_mm_proofnet(&ps, &[], 512) else { panic!() };
        assert_eq!(trace.len(), 1);
        assert_eq!(tree, Structure::Word(0));
    }

    #[test]
    fn tensor_tree_yield() {
        let s = parse_mm_sequent("np, (np \\a s) /a np, np |- s").unwrap();
        let found = prove_mm_sequent(&s, &[], &MmOptions::default());
        assert_eq!(found.proofs.len(), 1);
        assert!(found.proofs[0].trace.is_empty());
        assert_eq!(found.proofs[0].tree.to_string(), "(w0 oa (w1 oa w2))");
    }

    #[test]
    fn crossed_identity_matching_is_filtered() {
        let ps = unfold_mm(&parse_mm_sequent("a /a b |- a /a b").unwrap());
        let all = enumerate_matchings(&ps, false);
        assert_eq!(all.len(), 1);
        let ps = unfold_mm(&parse_mm_sequent("a /a a |- a /a a").unwrap());
        let all = enumerate_matchings(&ps, false);
        assert_eq!(all.len(), 2);
        let verdicts: Vec<bool> = all.iter().map(|(s, _)| mll_filter(s)).collect();
        assert_eq!(verdicts.iter().filter(|&&b| b).count(), 1);
        assert_eq!(enumerate_matchings(&ps, true).len(), 1);
    }

    #[test]
    fn name_mismatch_has_no_matching() {
        let ps = unfold_mm(&parse_mm_sequent("a |- b").unwrap());
        assert!(enumerate_matchings(&ps, false).is_empty());
    }

    #[test]
    fn rewrite_preserves_leaves() {
        let s = parse_mm_sequent("a, b, c |- a").unwrap();
        let mut ps = unfold_mm(&s);
        // build (0 oa 1) oa 2 by hand over the three hypotheses
        let u = ps.add_vertex(MmVertex { formula: None, hyp: None, conc: false });
        let r = ps.add_vertex(MmVertex { formula: None, hyp: None, conc: true });
        ps.add_link(MmLink {
            kind: LinkKind::Tensor,
            rule: None,
            mode: Mode::new("a"),
            premisses: vec![0, 1],
            conclusions: vec![u],
            arrow: None,
        });
        ps.add_link(MmLink {
            kind: LinkKind::Tensor,
            rule: None,
            mode: Mode::new("a"),
            premisses: vec![u, 2],
            conclusions: vec![r],
            arrow: None,
        });
        ps.vertices.remove(&3);
        let before = tensor_tree(&ps).unwrap();
        assert_eq!(before.to_string(), "((w0 oa w1) oa w2)");
        let steps = rewrite_step(&ps, &ass());
        assert_eq!(steps.len(), 1);
        let after = tensor_tree(&steps[0].1).unwrap();
        assert_eq!(after.to_string(), "(w0 oa (w1 oa w2))");
        assert!(steps[0].1.is_well_formed());
        assert!(rewrite_step(&ps, &[]).is_empty());
    }
}
