//! Natural deduction for the multimodal engine.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::formula::{MMFormula, Mode, Sequent};
use crate::grammar::{StructuralRule, TreePattern};
use crate::mm::{unfold_mm, MmProof, MmRule, MmStructure, Structure, VertexId};

use super::NdError;

/// Default cap on the antecedent structures visited while looking for
/// structural steps at one goal.
pub const DEFAULT_ND_BUDGET: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "rule", rename_all = "camelCase")]
pub enum MmNdRule {
    /// Lexical leaf; the antecedent is the word.
    Lex,
    /// Withdrawn hypothesis leaf, coindexed with the rule discharging it.
    Hyp,
    OverE { mode: Mode },
    OverI { mode: Mode, hyp: usize },
    UnderE { mode: Mode },
    UnderI { mode: Mode, hyp: usize },
    ProdE { mode: Mode, left: usize, right: usize },
    ProdI { mode: Mode },
    /// Structural rule: the premiss antecedent rewrites to the conclusion's.
    Struct { name: String },
}

/// A natural deduction proof in sequent format: every node carries its
/// antecedent structure and its formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MmNd {
    #[serde(flatten)]
    pub rule: MmNdRule,
    pub antecedent: Structure,
    pub formula: MMFormula,
    pub premisses: Vec<MmNd>,
}

impl MmNd {
    pub fn size(&self) -> usize {
        1 + self.premisses.iter().map(MmNd::size).sum::<usize>()
    }

    /// Formulas of the hypothesis leaves, by coindex.
    pub fn hypotheses(&self) -> HashMap<usize, MMFormula> {
        let mut out = HashMap::new();
        self.collect_hyps(&mut out);
        out
    }

    fn collect_hyps(&self, out: &mut HashMap<usize, MMFormula>) {
        if let (MmNdRule::Hyp, Structure::Hyp(k)) = (&self.rule, &self.antecedent) {
            out.insert(*k, self.formula.clone());
        }
        for p in &self.premisses {
            p.collect_hyps(out);
        }
    }
}

/// Reads a normal natural deduction proof off a proof net.
pub fn sequentialize_mm(proof: &MmProof, rules: &[StructuralRule]) -> Result<MmNd, NdError> {
    sequentialize_matching(
        &proof.sequent,
        &proof.matching,
        &proof.tree,
        rules,
        DEFAULT_ND_BUDGET,
    )
}

/// Same, from the sequent, its axiom matching (vertex ids of [`unfold_mm`])
/// and the antecedent structure of the conclusion.
pub fn sequentialize_matching(
    sequent: &Sequent<Mode>,
    matching: &[(VertexId, VertexId)],
    tree: &Structure,
    rules: &[StructuralRule],
    budget: usize,
) -> Result<MmNd, NdError> {
    let ps = unfold_mm(sequent);
    let mut words = vec![0; sequent.antecedent.len()];
    for (&id, v) in &ps.vertices {
        if let Some(i) = v.hyp {
            words[i] = id;
        }
    }
    let goal = ps
        .vertices
        .iter()
        .find(|(_, v)| v.conc)
        .map(|(&id, _)| id)
        .expect("unfolding has a goal vertex");
    let mut b = Builder {
        partner: matching.iter().map(|&(n, p)| (p, n)).collect(),
        ps,
        rules,
        budget,
        hyps: Vec::new(),
        words,
    };
    b.prove(goal, tree.clone())
}

struct Builder<'a> {
    ps: MmStructure,
    /// positive atom -> negative atom
    partner: HashMap<VertexId, VertexId>,
    rules: &'a [StructuralRule],
    budget: usize,
    /// Vertex of hypothesis `k` at index `k - 1`.
    hyps: Vec<VertexId>,
    /// Vertex of word `i`.
    words: Vec<VertexId>,
}

/// One elimination on the way from a negative atom up to its head.
struct Elim {
    rule: MmRule,
    mode: Mode,
    arg: VertexId,
    result: VertexId,
}

/// Required antecedent shape at a goal: the head leaf and argument slots.
enum Shape {
    Head(VertexId),
    Slot(BTreeSet<VertexId>),
    Node(Mode, Box<Shape>, Box<Shape>),
}

impl Builder<'_> {
    fn formula(&self, v: VertexId) -> MMFormula {
        self.ps.vertices[&v].formula.clone().expect("unfolded vertices carry formulas")
    }

    fn rule_above(&self, v: VertexId) -> Option<(MmRule, Mode, Vec<VertexId>, Vec<VertexId>)> {
        let l = &self.ps.links[&self.ps.up(v)?];
        Some((l.rule?, l.mode.clone(), l.premisses.clone(), l.conclusions.clone()))
    }

    fn leaf_vertex(&self, s: &Structure) -> Option<VertexId> {
        match s {
            Structure::Word(i) => self.words.get(*i).copied(),
            Structure::Hyp(k) => self.hyps.get(k.checked_sub(1)?).copied(),
            Structure::Node(..) => None,
        }
    }

    fn leaf_of(&self, v: VertexId) -> Option<Structure> {
        if let Some(i) = self.words.iter().position(|&w| w == v) {
            return Some(Structure::Word(i));
        }
        self.hyps.iter().position(|&h| h == v).map(|k| Structure::Hyp(k + 1))
    }

    fn leaf_set(&self, s: &Structure) -> BTreeSet<VertexId> {
        s.leaves().into_iter().filter_map(|l| self.leaf_vertex(l)).collect()
    }

    fn leaf_nd(&self, s: &Structure) -> MmNd {
        let v = self.leaf_vertex(s).expect("leaf in scope");
        MmNd {
            rule: if matches!(s, Structure::Word(_)) { MmNdRule::Lex } else { MmNdRule::Hyp },
            antecedent: s.clone(),
            formula: self.formula(v),
            premisses: Vec::new(),
        }
    }

    fn new_hyp(&mut self, v: VertexId) -> usize {
        self.hyps.push(v);
        self.hyps.len()
    }

    /// Product elimination link below a leaf vertex, if any.
    fn product_below(&self, v: VertexId) -> Option<(Mode, VertexId, VertexId)> {
        let l = &self.ps.links[&self.ps.down(v)?];
        (l.rule == Some(MmRule::ProdE)).then(|| (l.mode.clone(), l.conclusions[0], l.conclusions[1]))
    }

    /// A hypothesis vertex together with the components it splits into.
    fn hyp_closure(&self, v: VertexId) -> BTreeSet<VertexId> {
        let mut out = BTreeSet::from([v]);
        if let Some((_, a, b)) = self.product_below(v) {
            out.extend(self.hyp_closure(a));
            out.extend(self.hyp_closure(b));
        }
        out
    }

    /// Walks from a negative atom up through elimination links to its head.
    fn chain(&self, n: VertexId) -> (VertexId, Vec<Elim>) {
        let mut cur = n;
        let mut steps = Vec::new();
        while let Some((rule @ (MmRule::OverE | MmRule::UnderE), mode, prem, _)) = self.rule_above(cur) {
            let (fun, arg) = if rule == MmRule::OverE { (prem[0], prem[1]) } else { (prem[1], prem[0]) };
            steps.push(Elim { rule, mode, arg, result: cur });
            cur = fun;
        }
        (cur, steps)
    }

    /// Leaf vertices a subproof of positive vertex `v` consumes.
    fn uses(&self, v: VertexId) -> Result<BTreeSet<VertexId>, NdError> {
        match self.rule_above(v) {
            Some((MmRule::OverI | MmRule::UnderI, _, prem, conc)) => {
                let b = if conc[0] == v { conc[1] } else { conc[0] };
                let inner = self.uses(prem[0])?;
                Ok(inner.difference(&self.hyp_closure(b)).copied().collect())
            }
            Some((MmRule::ProdI, _, prem, _)) => {
                let mut out = self.uses(prem[0])?;
                out.extend(self.uses(prem[1])?);
                Ok(out)
            }
            Some(_) => Err(NdError::Malformed(format!("vertex {v} is not positive"))),
            None => {
                let n = *self
                    .partner
                    .get(&v)
                    .ok_or_else(|| NdError::Malformed(format!("atom {v} is unmatched")))?;
                let (head, steps) = self.chain(n);
                let mut out = BTreeSet::from([head]);
                for s in &steps {
                    out.extend(self.uses(s.arg)?);
                }
                Ok(out)
            }
        }
    }

    fn prove(&mut self, v: VertexId, gamma: Structure) -> Result<MmNd, NdError> {
        let product = gamma.leaves().into_iter().find_map(|l| {
            let lv = self.leaf_vertex(l)?;
            self.product_below(lv).map(|p| (l.clone(), p))
        });
        if let Some((leaf, (mode, a, b))) = product {
            let ka = self.new_hyp(a);
            let kb = self.new_hyp(b);
            let pair = Structure::node(mode.clone(), Structure::Hyp(ka), Structure::Hyp(kb));
            let minor = self.prove(v, replace_leaf(&gamma, &leaf, &pair))?;
            let major = self.leaf_nd(&leaf);
            return Ok(MmNd {
                rule: MmNdRule::ProdE { mode, left: ka, right: kb },
                antecedent: gamma,
                formula: self.formula(v),
                premisses: vec![major, minor],
            });
        }
        match self.rule_above(v) {
            Some((rule @ (MmRule::OverI | MmRule::UnderI), mode, prem, conc)) => {
                let over = rule == MmRule::OverI;
                let b = if over { conc[1] } else { conc[0] };
                let k = self.new_hyp(b);
                let inner = if over {
                    Structure::node(mode.clone(), gamma.clone(), Structure::Hyp(k))
                } else {
                    Structure::node(mode.clone(), Structure::Hyp(k), gamma.clone())
                };
                let sub = self.prove(prem[0], inner)?;
                Ok(MmNd {
                    rule: if over {
                        MmNdRule::OverI { mode, hyp: k }
                    } else {
                        MmNdRule::UnderI { mode, hyp: k }
                    },
                    antecedent: gamma,
                    formula: self.formula(v),
                    premisses: vec![sub],
                })
            }
            Some((MmRule::ProdI, mode, prem, _)) => {
                let shape = Shape::Node(
                    mode.clone(),
                    Box::new(Shape::Slot(self.uses(prem[0])?)),
                    Box::new(Shape::Slot(self.uses(prem[1])?)),
                );
                let (start, path) = self.reshape(&gamma, &shape)?;
                let Structure::Node(_, l, r) = &start else { unreachable!("shape is a node") };
                let left = self.prove(prem[0], (**l).clone())?;
                let right = self.prove(prem[1], (**r).clone())?;
                let core = MmNd {
                    rule: MmNdRule::ProdI { mode },
                    antecedent: start,
                    formula: self.formula(v),
                    premisses: vec![left, right],
                };
                Ok(wrap(core, path))
            }
            Some(_) => Err(NdError::Malformed(format!("vertex {v} is not positive"))),
            None => {
                let n = *self
                    .partner
                    .get(&v)
                    .ok_or_else(|| NdError::Malformed(format!("atom {v} is unmatched")))?;
                let (head, steps) = self.chain(n);
                if self.leaf_of(head).is_none() {
                    return Err(NdError::Unsupported(format!(
                        "hypothesis `{}` is a product component obtained by elimination",
                        self.formula(head)
                    )));
                }
                let mut shape = Shape::Head(head);
                for s in steps.iter().rev() {
                    let slot = Box::new(Shape::Slot(self.uses(s.arg)?));
                    let cur = Box::new(shape);
                    shape = if s.rule == MmRule::OverE {
                        Shape::Node(s.mode.clone(), cur, slot)
                    } else {
                        Shape::Node(s.mode.clone(), slot, cur)
                    };
                }
                let (start, path) = self.reshape(&gamma, &shape)?;
                let core = self.eliminate(&steps, &start)?;
                Ok(wrap(core, path))
            }
        }
    }

    /// The elimination chain over an antecedent of the required shape.
    fn eliminate(&mut self, steps: &[Elim], gamma: &Structure) -> Result<MmNd, NdError> {
        let Some((s, rest)) = steps.split_first() else {
            return Ok(self.leaf_nd(gamma));
        };
        let Structure::Node(_, l, r) = gamma else { unreachable!("shape was matched") };
        let (fun, arg) = if s.rule == MmRule::OverE {
            (self.eliminate(rest, l)?, self.prove(s.arg, (**r).clone())?)
        } else {
            (self.eliminate(rest, r)?, self.prove(s.arg, (**l).clone())?)
        };
        let (rule, premisses) = if s.rule == MmRule::OverE {
            (MmNdRule::OverE { mode: s.mode.clone() }, vec![fun, arg])
        } else {
            (MmNdRule::UnderE { mode: s.mode.clone() }, vec![arg, fun])
        };
        Ok(MmNd {
            rule,
            antecedent: gamma.clone(),
            formula: self.formula(s.result),
            premisses,
        })
    }

    fn fits(&self, shape: &Shape, s: &Structure) -> bool {
        match (shape, s) {
            (Shape::Head(v), leaf) => self.leaf_vertex(leaf) == Some(*v),
            (Shape::Slot(set), s) => &self.leaf_set(s) == set,
            (Shape::Node(m, a, b), Structure::Node(n, l, r)) => {
                m == n && self.fits(a, l) && self.fits(b, r)
            }
            _ => false,
        }
    }

    /// Breadth-first search backwards through structural rules for an
    /// antecedent of the given shape that rewrites to `gamma`. Returns it
    /// with the forward path, one `(rule, result)` per step.
    fn reshape(
        &self,
        gamma: &Structure,
        shape: &Shape,
    ) -> Result<(Structure, Vec<(String, Structure)>), NdError> {
        let mut parent: HashMap<Structure, Option<(Structure, String)>> = HashMap::new();
        parent.insert(gamma.clone(), None);
        let mut queue = VecDeque::from([gamma.clone()]);
        while let Some(s) = queue.pop_front() {
            if self.fits(shape, &s) {
                let mut path = Vec::new();
                let mut cur = s.clone();
                while let Some(Some((next, name))) = parent.get(&cur) {
                    path.push((name.clone(), next.clone()));
                    cur = next.clone();
                }
                return Ok((s, path));
            }
            for rule in self.rules {
                for pred in rewrites(&s, &rule.rhs, &rule.lhs) {
                    if !parent.contains_key(&pred) {
                        if parent.len() >= self.budget {
                            return Err(NdError::Budget);
                        }
                        parent.insert(pred.clone(), Some((s.clone(), rule.name.clone())));
                        queue.push_back(pred);
                    }
                }
            }
        }
        Err(NdError::Stuck(format!("no structural path to the shape required at {gamma}")))
    }
}

/// Adds structural steps below a proof.
fn wrap(core: MmNd, path: Vec<(String, Structure)>) -> MmNd {
    path.into_iter().fold(core, |nd, (name, antecedent)| MmNd {
        rule: MmNdRule::Struct { name },
        antecedent,
        formula: nd.formula.clone(),
        premisses: vec![nd],
    })
}

fn replace_leaf(s: &Structure, leaf: &Structure, by: &Structure) -> Structure {
    match s {
        Structure::Node(m, l, r) => {
            Structure::node(m.clone(), replace_leaf(l, leaf, by), replace_leaf(r, leaf, by))
        }
        other if other == leaf => by.clone(),
        other => other.clone(),
    }
}

/// Binds pattern leaves to substructures.
pub(crate) fn match_tree(
    pat: &TreePattern,
    s: &Structure,
    binds: &mut HashMap<String, Structure>,
) -> bool {
    match (pat, s) {
        (TreePattern::Leaf(x), s) => {
            binds.insert(x.clone(), s.clone());
            true
        }
        (TreePattern::Node(m, a, b), Structure::Node(n, l, r)) => {
            m == n && match_tree(a, l, binds) && match_tree(b, r, binds)
        }
        _ => false,
    }
}

pub(crate) fn instantiate(pat: &TreePattern, binds: &HashMap<String, Structure>) -> Structure {
    match pat {
        TreePattern::Leaf(x) => binds[x].clone(),
        TreePattern::Node(m, a, b) => {
            Structure::node(m.clone(), instantiate(a, binds), instantiate(b, binds))
        }
    }
}

/// Every structure obtained by rewriting one occurrence of `from` to `to`.
pub(crate) fn rewrites(s: &Structure, from: &TreePattern, to: &TreePattern) -> Vec<Structure> {
    let mut out = Vec::new();
    let mut binds = HashMap::new();
    if match_tree(from, s, &mut binds) {
        out.push(instantiate(to, &binds));
    }
    if let Structure::Node(m, l, r) = s {
        for l2 in rewrites(l, from, to) {
            out.push(Structure::node(m.clone(), l2, (**r).clone()));
        }
        for r2 in rewrites(r, from, to) {
            out.push(Structure::node(m.clone(), (**l).clone(), r2));
        }
    }
    out
}

/// Checks every rule application of a multimodal natural deduction proof of
/// `sequent` whose conclusion antecedent yields the words in order.
pub fn check_mm_nd(
    nd: &MmNd,
    sequent: &Sequent<Mode>,
    rules: &[StructuralRule],
) -> Result<(), NdError> {
    let bad = |msg: String| Err(NdError::Invalid(msg));
    if nd.formula != sequent.succedent {
        return bad(format!("concludes {} instead of {}", nd.formula, sequent.succedent));
    }
    let leaves = nd.antecedent.leaves();
    if leaves.len() != sequent.antecedent.len()
        || leaves.iter().enumerate().any(|(i, l)| **l != Structure::Word(i))
    {
        return bad(format!("conclusion antecedent {} is not the sentence", nd.antecedent));
    }
    let hyps = nd.hypotheses();
    let mut discharged = BTreeSet::new();
    check_node(nd, sequent, rules, &hyps, &mut discharged)?;
    if discharged.len() != hyps.len() {
        return bad("some hypothesis is never discharged".into());
    }
    Ok(())
}

fn check_node(
    nd: &MmNd,
    sequent: &Sequent<Mode>,
    rules: &[StructuralRule],
    hyps: &HashMap<usize, MMFormula>,
    discharged: &mut BTreeSet<usize>,
) -> Result<(), NdError> {
    use MMFormula as F;
    use Structure as S;
    let fail = || Err(NdError::Invalid(format!("bad {:?} step concluding {}", nd.rule, nd.formula)));
    let node = |m: &Mode, l: &S, r: &S| S::node(m.clone(), l.clone(), r.clone());
    let p = &nd.premisses;
    let ok = match (&nd.rule, p.as_slice()) {
        (MmNdRule::Lex, []) => {
            matches!(nd.antecedent, S::Word(i) if sequent.antecedent.get(i) == Some(&nd.formula))
        }
        (MmNdRule::Hyp, []) => matches!(nd.antecedent, S::Hyp(_)),
        (MmNdRule::OverE { mode }, [f, a]) => {
            f.formula == F::over(mode.clone(), nd.formula.clone(), a.formula.clone())
                && nd.antecedent == node(mode, &f.antecedent, &a.antecedent)
        }
        (MmNdRule::UnderE { mode }, [a, f]) => {
            f.formula == F::under(mode.clone(), a.formula.clone(), nd.formula.clone())
                && nd.antecedent == node(mode, &a.antecedent, &f.antecedent)
        }
        (MmNdRule::OverI { mode, hyp }, [q]) => {
            discharged.insert(*hyp)
                && hyps.get(hyp).is_some_and(|b| {
                    nd.formula == F::over(mode.clone(), q.formula.clone(), b.clone())
                })
                && q.antecedent == node(mode, &nd.antecedent, &S::Hyp(*hyp))
        }
        (MmNdRule::UnderI { mode, hyp }, [q]) => {
            discharged.insert(*hyp)
                && hyps.get(hyp).is_some_and(|b| {
                    nd.formula == F::under(mode.clone(), b.clone(), q.formula.clone())
                })
                && q.antecedent == node(mode, &S::Hyp(*hyp), &nd.antecedent)
        }
        (MmNdRule::ProdI { mode }, [a, b]) => {
            nd.formula == F::prod(mode.clone(), a.formula.clone(), b.formula.clone())
                && nd.antecedent == node(mode, &a.antecedent, &b.antecedent)
        }
        (MmNdRule::ProdE { mode, left, right }, [major, minor]) => {
            let pair = node(mode, &S::Hyp(*left), &S::Hyp(*right));
            discharged.insert(*left)
                && discharged.insert(*right)
                && minor.formula == nd.formula
                && match (hyps.get(left), hyps.get(right)) {
                    (Some(a), Some(b)) => {
                        major.formula == F::prod(mode.clone(), a.clone(), b.clone())
                    }
                    _ => false,
                }
                && substitute_subtree(&minor.antecedent, &pair, &major.antecedent)
                    .is_some_and(|s| s == nd.antecedent)
        }
        (MmNdRule::Struct { name }, [q]) => {
            q.formula == nd.formula
                && rules.iter().filter(|r| &r.name == name).any(|r| {
                    rewrites(&q.antecedent, &r.lhs, &r.rhs).contains(&nd.antecedent)
                })
        }
        _ => false,
    };
    if !ok {
        return fail();
    }
    for q in p {
        check_node(q, sequent, rules, hyps, discharged)?;
    }
    Ok(())
}

/// Replaces the unique occurrence of `sub` in `s`.
fn substitute_subtree(s: &Structure, sub: &Structure, by: &Structure) -> Option<Structure> {
    if s == sub {
        return Some(by.clone());
    }
    match s {
        Structure::Node(m, l, r) => {
            if let Some(l2) = substitute_subtree(l, sub, by) {
                Some(Structure::node(m.clone(), l2, (**r).clone()))
            } else {
                substitute_subtree(r, sub, by).map(|r2| Structure::node(m.clone(), (**l).clone(), r2))
            }
        }
        _ => None,
    }
}
