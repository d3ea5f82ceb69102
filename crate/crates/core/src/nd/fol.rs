//! Natural deduction for first-order multiplicative intuitionistic linear
//! logic, read off a proof net by splitting.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::fol::{ContractionGraph, FoLinkKind, FoRule, FoStructure, FolProof, OccId};
use crate::formula::{FoFormula, FoSequent, FoTerm, Polarity};

use super::NdError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "rule", rename_all = "camelCase")]
pub enum FoNdRule {
    /// Lexical leaf: antecedent formula `word`.
    Lex { word: usize },
    /// Withdrawn hypothesis leaf.
    Hyp { hyp: usize },
    ImplE,
    ImplI { hyp: usize },
    TensorE { left: usize, right: usize },
    TensorI,
    ForallE { term: FoTerm },
    ForallI { var: String },
    ExistsE { hyp: usize, var: String },
    ExistsI { term: FoTerm },
}

/// Premisses are ordered as in the rules: major premiss first for `ImplE`,
/// `TensorE` and `ExistsE`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FoNd {
    #[serde(flatten)]
    pub rule: FoNdRule,
    pub formula: FoFormula,
    pub premisses: Vec<FoNd>,
}

impl FoNd {
    pub fn size(&self) -> usize {
        1 + self.premisses.iter().map(FoNd::size).sum::<usize>()
    }

    fn leaf(rule: FoNdRule, formula: FoFormula) -> Self {
        FoNd {
            rule,
            formula,
            premisses: Vec::new(),
        }
    }

    /// Open leaves from left to right: `Lex` and undischarged `Hyp`.
    pub fn open_hypotheses(&self) -> Vec<(FoNdRule, FoFormula)> {
        let mut out = Vec::new();
        self.collect_open(&mut out);
        out
    }

    fn collect_open(&self, out: &mut Vec<(FoNdRule, FoFormula)>) {
        match &self.rule {
            FoNdRule::Lex { .. } | FoNdRule::Hyp { .. } => {
                out.push((self.rule.clone(), self.formula.clone()));
                return;
            }
            _ => {}
        }
        let mut inner = Vec::new();
        for p in &self.premisses {
            p.collect_open(&mut inner);
        }
        let closed: Vec<usize> = match &self.rule {
            FoNdRule::ImplI { hyp } | FoNdRule::ExistsE { hyp, .. } => vec![*hyp],
            FoNdRule::TensorE { left, right } => vec![*left, *right],
            _ => Vec::new(),
        };
        out.extend(
            inner
                .into_iter()
                .filter(|(r, _)| !matches!(r, FoNdRule::Hyp { hyp } if closed.contains(hyp))),
        );
    }

    fn replace_hyp(self, label: usize, by: &FoNd) -> FoNd {
        if self.rule == (FoNdRule::Hyp { hyp: label }) {
            return by.clone();
        }
        FoNd {
            premisses: self.premisses.into_iter().map(|p| p.replace_hyp(label, by)).collect(),
            ..self
        }
    }
}

/// Sequentializes a MILL1 proof net.
pub fn sequentialize_fol(proof: &FolProof) -> Result<FoNd, NdError> {
    sequentialize_structure(&proof.structure)
}

/// Sequentializes a complete, grounded proof structure.
pub fn sequentialize_structure(ps: &FoStructure) -> Result<FoNd, NdError> {
    if !ps.is_complete() {
        return Err(NdError::Malformed("the structure has unlinked atoms".into()));
    }
    let all: BTreeSet<OccId> = (0..ps.occs.len()).collect();
    let s = Splitter { ps };
    if !s.is_net(&all) {
        return Err(NdError::Stuck("the structure is not a proof net".into()));
    }
    let raw = s
        .split(&all)
        .ok_or_else(|| NdError::Stuck("no splitting order satisfies the side conditions".into()))?;
    let mut names = BTreeMap::new();
    Ok(relabel(raw, ps, &mut names))
}

struct Splitter<'a> {
    ps: &'a FoStructure,
}

impl Splitter<'_> {
    fn links_in(&self, sub: &BTreeSet<OccId>) -> Vec<usize> {
        (0..self.ps.links.len())
            .filter(|&i| {
                let l = &self.ps.links[i];
                l.premisses.iter().chain(&l.conclusions).all(|o| sub.contains(o))
            })
            .collect()
    }

    fn conclusions(&self, sub: &BTreeSet<OccId>) -> Vec<OccId> {
        let links = self.links_in(sub);
        sub.iter()
            .copied()
            .filter(|o| !links.iter().any(|&i| self.ps.links[i].premisses.contains(o)))
            .collect()
    }

    fn is_net(&self, sub: &BTreeSet<OccId>) -> bool {
        let mut g = ContractionGraph::within(self.ps, sub);
        g.contract();
        g.is_single_vertex()
    }

    fn components(&self, sub: &BTreeSet<OccId>) -> Vec<BTreeSet<OccId>> {
        let links = self.links_in(sub);
        let mut out: Vec<BTreeSet<OccId>> = Vec::new();
        let mut seen = BTreeSet::new();
        for &start in sub {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = BTreeSet::from([start]);
            let mut stack = vec![start];
            while let Some(o) = stack.pop() {
                for &i in &links {
                    let l = &self.ps.links[i];
                    if l.premisses.contains(&o) || l.conclusions.contains(&o) {
                        for &u in l.premisses.iter().chain(&l.conclusions) {
                            if seen.insert(u) {
                                comp.insert(u);
                                stack.push(u);
                            }
                        }
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    fn free_elsewhere(&self, concl: &[OccId], skip: &[OccId], x: &str) -> bool {
        concl
            .iter()
            .filter(|o| !skip.contains(o))
            .any(|&o| self.ps.free_vars(o).contains(x))
    }

    fn term(&self, var: &str) -> FoTerm {
        self.ps.unifier.resolve(&FoTerm::var(var))
    }

    /// Proof of the positive conclusion of `sub` from its negative ones,
    /// with hypothesis labels being occurrence ids.
    fn split(&self, sub: &BTreeSet<OccId>) -> Option<FoNd> {
        let ps = self.ps;
        let concl = self.conclusions(sub);
        if sub.len() == 2 {
            let neg = *sub.iter().find(|&&o| ps.occs[o].polarity == Polarity::Negative)?;
            return Some(FoNd::leaf(FoNdRule::Hyp { hyp: neg }, ps.formula(neg)));
        }
        let mut terminal: Vec<usize> = self
            .links_in(sub)
            .into_iter()
            .filter(|&i| {
                let l = &ps.links[i];
                l.rule != FoRule::Axiom && l.conclusions.iter().all(|c| concl.contains(c))
            })
            .collect();
        // pars first, then unary tensors, then splitting tensors
        terminal.sort_by_key(|&i| {
            let l = &ps.links[i];
            let rank = match (l.rule.kind(), l.premisses.len()) {
                (FoLinkKind::Par, _) => 0,
                (_, 1) => 1,
                _ => 2,
            };
            (rank, i)
        });
        for i in terminal {
            let l = &ps.links[i];
            let c = l.conclusions[0];
            let mut rest = sub.clone();
            rest.remove(&c);
            let formula = ps.formula(c);
            let found = match (l.rule, l.premisses.as_slice()) {
                (FoRule::ImplPos, &[a, _]) => self.unary(&rest).map(|pi| FoNd {
                    rule: FoNdRule::ImplI { hyp: a },
                    formula,
                    premisses: vec![pi],
                }),
                (FoRule::TensorNeg, &[a, b]) => self.unary(&rest).map(|pi| FoNd {
                    rule: FoNdRule::TensorE { left: a, right: b },
                    formula: pi.formula.clone(),
                    premisses: vec![FoNd::leaf(FoNdRule::Hyp { hyp: c }, formula), pi],
                }),
                (FoRule::ForallPos, &[a]) => {
                    let x = l.var.clone()?;
                    if self.free_elsewhere(&self.conclusions(&rest), &[a], &x) {
                        continue;
                    }
                    self.unary(&rest).map(|pi| FoNd {
                        rule: FoNdRule::ForallI { var: x },
                        formula,
                        premisses: vec![pi],
                    })
                }
                (FoRule::ExistsNeg, &[a]) => {
                    let x = l.var.clone()?;
                    if self.free_elsewhere(&self.conclusions(&rest), &[a], &x) {
                        continue;
                    }
                    self.unary(&rest).map(|pi| FoNd {
                        rule: FoNdRule::ExistsE { hyp: a, var: x },
                        formula: pi.formula.clone(),
                        premisses: vec![FoNd::leaf(FoNdRule::Hyp { hyp: c }, formula), pi],
                    })
                }
                (FoRule::ForallNeg, &[a]) => {
                    let t = self.term(l.var.as_deref()?);
                    self.unary(&rest).map(|pi| {
                        let inst = FoNd {
                            rule: FoNdRule::ForallE { term: t },
                            formula: ps.formula(a),
                            premisses: vec![FoNd::leaf(FoNdRule::Hyp { hyp: c }, formula)],
                        };
                        pi.replace_hyp(a, &inst)
                    })
                }
                (FoRule::ExistsPos, &[_]) => {
                    let t = self.term(l.var.as_deref()?);
                    self.unary(&rest).map(|pi| FoNd {
                        rule: FoNdRule::ExistsI { term: t },
                        formula,
                        premisses: vec![pi],
                    })
                }
                (FoRule::ImplNeg, &[a, b]) => self.binary(&rest, a, b).map(|(pa, pb)| {
                    let app = FoNd {
                        rule: FoNdRule::ImplE,
                        formula: ps.formula(b),
                        premisses: vec![FoNd::leaf(FoNdRule::Hyp { hyp: c }, formula), pa],
                    };
                    pb.replace_hyp(b, &app)
                }),
                (FoRule::TensorPos, &[a, b]) => self.binary(&rest, a, b).map(|(pa, pb)| FoNd {
                    rule: FoNdRule::TensorI,
                    formula,
                    premisses: vec![pa, pb],
                }),
                _ => None,
            };
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn unary(&self, rest: &BTreeSet<OccId>) -> Option<FoNd> {
        if self.is_net(rest) {
            self.split(rest)
        } else {
            None
        }
    }

    fn binary(&self, rest: &BTreeSet<OccId>, a: OccId, b: OccId) -> Option<(FoNd, FoNd)> {
        let comps = self.components(rest);
        if comps.len() != 2 {
            return None;
        }
        let ca = comps.iter().find(|c| c.contains(&a))?;
        let cb = comps.iter().find(|c| c.contains(&b))?;
        if ca == cb || !self.is_net(ca) || !self.is_net(cb) {
            return None;
        }
        Some((self.split(ca)?, self.split(cb)?))
    }
}

/// Lexical leaves get word positions; withdrawn hypotheses get coindices
/// in order of their discharging rule.
fn relabel(nd: FoNd, ps: &FoStructure, names: &mut BTreeMap<usize, usize>) -> FoNd {
    let fresh = |o: usize, names: &mut BTreeMap<usize, usize>| {
        let k = names.len() + 1;
        *names.entry(o).or_insert(k)
    };
    let rule = match nd.rule {
        FoNdRule::Hyp { hyp } => match ps.occs[hyp].hyp {
            Some(word) => FoNdRule::Lex { word },
            None => FoNdRule::Hyp { hyp: fresh(hyp, names) },
        },
        FoNdRule::ImplI { hyp } => FoNdRule::ImplI { hyp: fresh(hyp, names) },
        FoNdRule::ExistsE { hyp, var } => FoNdRule::ExistsE { hyp: fresh(hyp, names), var },
        FoNdRule::TensorE { left, right } => {
            let left = fresh(left, names);
            FoNdRule::TensorE { left, right: fresh(right, names) }
        }
        other => other,
    };
    FoNd {
        rule,
        formula: nd.formula,
        premisses: nd.premisses.into_iter().map(|p| relabel(p, ps, names)).collect(),
    }
}

/// Checks every rule application, linearity of hypotheses and the
/// eigenvariable conditions, and that the open leaves are exactly the
/// sequent's antecedent.
pub fn check_fo_nd(nd: &FoNd, sequent: &FoSequent) -> Result<(), NdError> {
    if !nd.formula.alpha_eq(&sequent.succedent) {
        return Err(NdError::Invalid(format!(
            "concludes {} instead of {}",
            nd.formula, sequent.succedent
        )));
    }
    let open = check_fo_node(nd)?;
    let mut words: Vec<usize> = Vec::new();
    for (r, f) in &open {
        match r {
            FoNdRule::Lex { word } => {
                let want = sequent.antecedent.get(*word).ok_or_else(|| {
                    NdError::Invalid(format!("leaf for missing word {word}"))
                })?;
                if !want.alpha_eq(f) {
                    return Err(NdError::Invalid(format!("word {word} is not {f}")));
                }
                words.push(*word);
            }
            _ => return Err(NdError::Invalid("undischarged hypothesis".into())),
        }
    }
    words.sort_unstable();
    if words != (0..sequent.antecedent.len()).collect::<Vec<_>>() {
        return Err(NdError::Invalid("antecedent formulas are not each used once".into()));
    }
    Ok(())
}

type Open = Vec<(FoNdRule, FoFormula)>;

fn take_hyp(open: &mut Open, k: usize) -> Option<FoFormula> {
    let i = open.iter().position(|(r, _)| *r == FoNdRule::Hyp { hyp: k })?;
    let (_, f) = open.remove(i);
    if open.iter().any(|(r, _)| *r == FoNdRule::Hyp { hyp: k }) {
        return None;
    }
    Some(f)
}

fn free_in(open: &Open, x: &str) -> bool {
    open.iter().any(|(_, f)| f.is_free(x))
}

fn check_fo_node(nd: &FoNd) -> Result<Open, NdError> {
    use FoFormula as F;
    let bad = || NdError::Invalid(format!("bad {:?} step concluding {}", nd.rule, nd.formula));
    let mut subs = Vec::new();
    for p in &nd.premisses {
        subs.push(check_fo_node(p)?);
    }
    let p = &nd.premisses;
    let concl = &nd.formula;
    let open = match (&nd.rule, p.as_slice()) {
        (FoNdRule::Lex { .. } | FoNdRule::Hyp { .. }, []) => vec![(nd.rule.clone(), concl.clone())],
        (FoNdRule::ImplE, [f, a]) => {
            let F::Impl(x, y) = &f.formula else { return Err(bad()) };
            if !x.alpha_eq(&a.formula) || !y.alpha_eq(concl) {
                return Err(bad());
            }
            subs.concat()
        }
        (FoNdRule::ImplI { hyp }, [b]) => {
            let F::Impl(x, y) = concl else { return Err(bad()) };
            let mut open = subs.concat();
            let h = take_hyp(&mut open, *hyp).ok_or_else(bad)?;
            if !h.alpha_eq(x) || !y.alpha_eq(&b.formula) {
                return Err(bad());
            }
            open
        }
        (FoNdRule::TensorI, [a, b]) => {
            if !concl.alpha_eq(&F::tensor(a.formula.clone(), b.formula.clone())) {
                return Err(bad());
            }
            subs.concat()
        }
        (FoNdRule::TensorE { left, right }, [major, minor]) => {
            let F::Tensor(x, y) = &major.formula else { return Err(bad()) };
            let mut inner = subs[1].clone();
            let hl = take_hyp(&mut inner, *left).ok_or_else(bad)?;
            let hr = take_hyp(&mut inner, *right).ok_or_else(bad)?;
            if !hl.alpha_eq(x) || !hr.alpha_eq(y) || !minor.formula.alpha_eq(concl) {
                return Err(bad());
            }
            let mut open = subs[0].clone();
            open.extend(inner);
            open
        }
        (FoNdRule::ForallE { term }, [q]) => {
            let F::Forall(x, body) = &q.formula else { return Err(bad()) };
            if !body.substitute(x, term).alpha_eq(concl) {
                return Err(bad());
            }
            subs.concat()
        }
        (FoNdRule::ExistsI { term }, [q]) => {
            let F::Exists(x, body) = concl else { return Err(bad()) };
            if !body.substitute(x, term).alpha_eq(&q.formula) {
                return Err(bad());
            }
            subs.concat()
        }
        (FoNdRule::ForallI { var }, [q]) => {
            let F::Forall(x, body) = concl else { return Err(bad()) };
            let open = subs.concat();
            if concl.is_free(var)
                || free_in(&open, var)
                || !body.substitute(x, &FoTerm::var(var.clone())).alpha_eq(&q.formula)
            {
                return Err(bad());
            }
            open
        }
        (FoNdRule::ExistsE { hyp, var }, [major, minor]) => {
            let F::Exists(x, body) = &major.formula else { return Err(bad()) };
            let mut inner = subs[1].clone();
            let h = take_hyp(&mut inner, *hyp).ok_or_else(bad)?;
            if !h.alpha_eq(&body.substitute(x, &FoTerm::var(var.clone())))
                || !minor.formula.alpha_eq(concl)
                || concl.is_free(var)
                || free_in(&inner, var)
                || free_in(&subs[0], var)
            {
                return Err(bad());
            }
            let mut open = subs[0].clone();
            open.extend(inner);
            open
        }
        _ => return Err(bad()),
    };
    Ok(open)
}
