use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::unify::{Unifier, UnifyError};
use crate::formula::{FoFormula, FoSequent, FoTerm, Fresh, Polarity};

pub type OccId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FoLinkKind {
    Axiom,
    Cut,
    Tensor,
    Par,
}

/// The logical links, named by main connective and polarity of the conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FoRule {
    Axiom,
    Cut,
    ImplNeg,
    ImplPos,
    TensorNeg,
    TensorPos,
    ForallNeg,
    ForallPos,
    ExistsNeg,
    ExistsPos,
}

impl FoRule {
    pub fn kind(self) -> FoLinkKind {
        match self {
            FoRule::Axiom => FoLinkKind::Axiom,
            FoRule::Cut => FoLinkKind::Cut,
            FoRule::ImplNeg | FoRule::TensorPos | FoRule::ForallNeg | FoRule::ExistsPos => {
                FoLinkKind::Tensor
            }
            FoRule::ImplPos | FoRule::TensorNeg | FoRule::ForallPos | FoRule::ExistsNeg => {
                FoLinkKind::Par
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FoRule::Axiom => "ax",
            FoRule::Cut => "cut",
            FoRule::ImplNeg => "-o-",
            FoRule::ImplPos => "-o+",
            FoRule::TensorNeg => "*-",
            FoRule::TensorPos => "*+",
            FoRule::ForallNeg => "forall-",
            FoRule::ForallPos => "forall+",
            FoRule::ExistsNeg => "exists-",
            FoRule::ExistsPos => "exists+",
        }
    }

    /// Quantifier links carrying an eigenvariable.
    pub fn binds_eigenvariable(self) -> bool {
        matches!(self, FoRule::ForallPos | FoRule::ExistsNeg)
    }
}

/// A formula occurrence. `formula` mentions the structure's metavariables and
/// eigenvariables; apply the unifier to see the current instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoOcc {
    pub formula: FoFormula,
    pub polarity: Polarity,
    /// Antecedent position, for the sequent's own antecedent formulas.
    pub hyp: Option<usize>,
    /// True for the sequent's succedent.
    pub conc: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoLink {
    pub rule: FoRule,
    pub premisses: Vec<OccId>,
    pub conclusions: Vec<OccId>,
    /// Eigenvariable (par quantifier links) or witness metavariable (tensor
    /// quantifier links).
    pub var: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoLinkError {
    #[error("occurrence {0} is not an unlinked atom")]
    NotAnAtom(OccId),
    #[error("polarity/name mismatch")]
    Mismatch,
    #[error(transparent)]
    Unify(#[from] UnifyError),
    #[error("eigenvariable `{0}` would escape its scope")]
    Scope(String),
}

/// A (partial) MILL1 proof structure: the unfolded sequent plus the axiom
/// links made so far and the unifier they induce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoStructure {
    pub sequent: FoSequent,
    pub occs: Vec<FoOcc>,
    pub links: Vec<FoLink>,
    pub eigenvars: BTreeSet<String>,
    pub metavars: BTreeSet<String>,
    pub unifier: Unifier,
    below: Vec<Option<usize>>,
    above: Vec<Option<usize>>,
}

impl FoStructure {
    /// Link of which `o` is a premiss.
    pub fn below(&self, o: OccId) -> Option<usize> {
        self.below[o]
    }

    /// Link of which `o` is a conclusion.
    pub fn above(&self, o: OccId) -> Option<usize> {
        self.above[o]
    }

    /// The occurrence's formula under the current unifier.
    pub fn formula(&self, o: OccId) -> FoFormula {
        self.unifier.apply(&self.occs[o].formula)
    }

    pub fn free_vars(&self, o: OccId) -> BTreeSet<String> {
        self.formula(o).free_vars()
    }

    pub fn is_atom(&self, o: OccId) -> bool {
        self.occs[o].formula.is_atom()
    }

    pub fn unlinked(&self, polarity: Polarity) -> Vec<OccId> {
        (0..self.occs.len())
            .filter(|&o| {
                self.above[o].is_none() && self.is_atom(o) && self.occs[o].polarity == polarity
            })
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.above.iter().all(Option::is_some)
    }

    /// Axiom links as `(negative, positive)` pairs, sorted.
    pub fn matching(&self) -> Vec<(OccId, OccId)> {
        let mut m: Vec<_> = self
            .links
            .iter()
            .filter(|l| l.rule == FoRule::Axiom)
            .map(|l| (l.conclusions[0], l.conclusions[1]))
            .collect();
        m.sort_unstable();
        m
    }

    pub fn is_metavar(&self, v: &str) -> bool {
        self.metavars.contains(v)
    }

    /// The unifier that an axiom link between `neg` and `pos` would produce.
    pub fn unify_pair(&self, neg: OccId, pos: OccId) -> Result<Unifier, FoLinkError> {
        for o in [neg, pos] {
            if o >= self.occs.len() || !self.is_atom(o) || self.above[o].is_some() {
                return Err(FoLinkError::NotAnAtom(o));
            }
        }
        if self.occs[neg].polarity != Polarity::Negative
            || self.occs[pos].polarity != Polarity::Positive
        {
            return Err(FoLinkError::Mismatch);
        }
        let (FoFormula::Atom(p, xs), FoFormula::Atom(q, ys)) =
            (&self.occs[neg].formula, &self.occs[pos].formula)
        else {
            unreachable!()
        };
        if p != q || xs.len() != ys.len() {
            return Err(FoLinkError::Mismatch);
        }
        Ok(self.unifier.unify_atoms(
            &self.occs[neg].formula,
            &self.occs[pos].formula,
            &|v| self.metavars.contains(v),
        )?)
    }

    /// Adds an axiom link without any correctness check beyond unification.
    pub fn add_axiom(&mut self, neg: OccId, pos: OccId) -> Result<(), FoLinkError> {
        self.unifier = self.unify_pair(neg, pos)?;
        self.add_link(FoLink {
            rule: FoRule::Axiom,
            premisses: vec![],
            conclusions: vec![neg, pos],
            var: None,
        });
        Ok(())
    }

    /// Replaces every unbound metavariable by one constant beyond all
    /// positions of the sequent.
    pub fn ground(&mut self) {
        let mut max = None;
        for o in &self.occs {
            collect_consts(&o.formula, &mut max);
        }
        let c = FoTerm::Const(max.map_or(0, |m| m + 1));
        let open: Vec<String> = self
            .metavars
            .iter()
            .filter(|v| self.unifier.get(v).is_none())
            .cloned()
            .collect();
        for v in open {
            self.unifier
                .unify_terms(&FoTerm::Var(v), &c, &|_| true)
                .expect("unbound metavariable");
        }
    }

    fn add_occ(&mut self, formula: FoFormula, polarity: Polarity) -> OccId {
        self.occs.push(FoOcc {
            formula,
            polarity,
            hyp: None,
            conc: false,
        });
        self.below.push(None);
        self.above.push(None);
        self.occs.len() - 1
    }

    fn add_link(&mut self, l: FoLink) -> usize {
        let id = self.links.len();
        for &p in &l.premisses {
            self.below[p] = Some(id);
        }
        for &c in &l.conclusions {
            self.above[c] = Some(id);
        }
        self.links.push(l);
        id
    }

    fn unfold(&mut self, o: OccId, fresh: &mut Fresh) {
        let f = self.occs[o].formula.clone();
        let pol = self.occs[o].polarity;
        let neg = pol == Polarity::Negative;
        let (rule, premisses, var) = match &f {
            FoFormula::Atom(..) => return,
            FoFormula::Impl(a, b) => {
                let va = self.add_occ(a.as_ref().clone(), pol.flip());
                let vb = self.add_occ(b.as_ref().clone(), pol);
                let rule = if neg { FoRule::ImplNeg } else { FoRule::ImplPos };
                (rule, vec![va, vb], None)
            }
            FoFormula::Tensor(a, b) => {
                let va = self.add_occ(a.as_ref().clone(), pol);
                let vb = self.add_occ(b.as_ref().clone(), pol);
                let rule = if neg { FoRule::TensorNeg } else { FoRule::TensorPos };
                (rule, vec![va, vb], None)
            }
            FoFormula::Forall(x, body) | FoFormula::Exists(x, body) => {
                let universal = matches!(f, FoFormula::Forall(..));
                let v = fresh.var();
                let rule = match (universal, neg) {
                    (true, true) => FoRule::ForallNeg,
                    (true, false) => FoRule::ForallPos,
                    (false, true) => FoRule::ExistsNeg,
                    (false, false) => FoRule::ExistsPos,
                };
                if rule.binds_eigenvariable() {
                    self.eigenvars.insert(v.clone());
                } else {
                    self.metavars.insert(v.clone());
                }
                let p = self.add_occ(body.substitute(x, &FoTerm::var(&v)), pol);
                (rule, vec![p], Some(v))
            }
        };
        self.add_link(FoLink {
            rule,
            premisses: premisses.clone(),
            conclusions: vec![o],
            var,
        });
        for p in premisses {
            self.unfold(p, fresh);
        }
    }
}

fn collect_consts(f: &FoFormula, max: &mut Option<u32>) {
    match f {
        FoFormula::Atom(_, args) => {
            for a in args {
                if let FoTerm::Const(c) = a {
                    *max = Some(max.map_or(*c, |m| m.max(*c)));
                }
            }
        }
        FoFormula::Impl(a, b) | FoFormula::Tensor(a, b) => {
            collect_consts(a, max);
            collect_consts(b, max);
        }
        FoFormula::Forall(_, b) | FoFormula::Exists(_, b) => collect_consts(b, max),
    }
}

/// Unfolds the antecedent negatively and the succedent positively. The
/// witness of a negative universal or positive existential becomes a fresh
/// metavariable; the other two quantifier links get fresh eigenvariables.
pub fn unfold_fol(sequent: &FoSequent) -> FoStructure {
    let mut ps = FoStructure {
        sequent: sequent.clone(),
        occs: Vec::new(),
        links: Vec::new(),
        eigenvars: BTreeSet::new(),
        metavars: BTreeSet::new(),
        unifier: Unifier::new(),
        below: Vec::new(),
        above: Vec::new(),
    };
    let mut fresh =
        Fresh::avoiding(sequent.antecedent.iter().chain(std::iter::once(&sequent.succedent)));
    for (i, a) in sequent.antecedent.iter().enumerate() {
        let o = ps.add_occ(a.clone(), Polarity::Negative);
        ps.occs[o].hyp = Some(i);
        ps.unfold(o, &mut fresh);
    }
    let o = ps.add_occ(sequent.succedent.clone(), Polarity::Positive);
    ps.occs[o].conc = true;
    ps.unfold(o, &mut fresh);
    ps
}

impl fmt::Display for FoStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, o) in self.occs.iter().enumerate() {
            let sign = match o.polarity {
                Polarity::Positive => '+',
                Polarity::Negative => '-',
            };
            writeln!(f, "{i}{sign} {}", self.formula(i))?;
        }
        for (i, l) in self.links.iter().enumerate() {
            write!(f, "L{i} {} {:?} -> {:?}", l.rule.name(), l.premisses, l.conclusions)?;
            if let Some(v) = &l.var {
                write!(f, " [{v}]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
