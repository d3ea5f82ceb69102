use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::formula::{MMFormula, Mode, Sequent};

pub type VertexId = usize;
pub type LinkId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkKind {
    Tensor,
    Par,
}

/// The natural-deduction rule a link stems from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MmRule {
    #[serde(rename = "overE")]
    OverE,
    #[serde(rename = "overI")]
    OverI,
    #[serde(rename = "underE")]
    UnderE,
    #[serde(rename = "underI")]
    UnderI,
    #[serde(rename = "prodE")]
    ProdE,
    #[serde(rename = "prodI")]
    ProdI,
}

impl MmRule {
    pub fn kind(self) -> LinkKind {
        match self {
            MmRule::OverE | MmRule::UnderE | MmRule::ProdI => LinkKind::Tensor,
            MmRule::OverI | MmRule::UnderI | MmRule::ProdE => LinkKind::Par,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MmRule::OverE => "/E",
            MmRule::OverI => "/I",
            MmRule::UnderE => "\\E",
            MmRule::UnderI => "\\I",
            MmRule::ProdE => "*E",
            MmRule::ProdI => "*I",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MmVertex {
    /// Formula occurrence; erased on internal vertices of abstract structures.
    pub formula: Option<MMFormula>,
    /// Antecedent position when this vertex is a hypothesis of the sequent.
    pub hyp: Option<usize>,
    /// Whether this vertex carries the goal formula.
    pub conc: bool,
}

/// A link with exactly three tentacles. Tensor links have two premisses and
/// one conclusion; par links one premiss and two conclusions, with `arrow`
/// on the main formula. `rule` is `None` for tensor links built by
/// structural rewrites.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MmLink {
    pub kind: LinkKind,
    pub rule: Option<MmRule>,
    pub mode: Mode,
    pub premisses: Vec<VertexId>,
    pub conclusions: Vec<VertexId>,
    pub arrow: Option<VertexId>,
}

impl MmLink {
    pub fn tentacles(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.premisses.iter().chain(&self.conclusions).copied()
    }

    fn replace(&mut self, old: VertexId, new: VertexId) {
        for v in self.premisses.iter_mut().chain(self.conclusions.iter_mut()) {
            if *v == old {
                *v = new;
            }
        }
        if self.arrow == Some(old) {
            self.arrow = Some(new);
        }
    }
}

/// A (possibly partial, possibly abstract) multimodal proof structure.
/// Vertex and link ids are never reused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmStructure {
    pub sequent: Sequent<Mode>,
    pub vertices: BTreeMap<VertexId, MmVertex>,
    pub links: BTreeMap<LinkId, MmLink>,
    next_vertex: VertexId,
    next_link: LinkId,
}

impl MmStructure {
    pub fn hypothesis_formula(&self, v: VertexId) -> Option<&MMFormula> {
        self.vertices[&v].hyp.map(|i| &self.sequent.antecedent[i])
    }

    /// Link of which `v` is a conclusion.
    pub fn up(&self, v: VertexId) -> Option<LinkId> {
        self.links
            .iter()
            .find(|(_, l)| l.conclusions.contains(&v))
            .map(|(id, _)| *id)
    }

    /// Link of which `v` is a premiss.
    pub fn down(&self, v: VertexId) -> Option<LinkId> {
        self.links
            .iter()
            .find(|(_, l)| l.premisses.contains(&v))
            .map(|(id, _)| *id)
    }

    /// Vertices that are no link's conclusion.
    pub fn hypotheses(&self) -> Vec<VertexId> {
        let mut is_conc = BTreeMap::new();
        for l in self.links.values() {
            for &c in &l.conclusions {
                is_conc.insert(c, ());
            }
        }
        self.vertices.keys().copied().filter(|v| !is_conc.contains_key(v)).collect()
    }

    /// Vertices that are no link's premiss.
    pub fn conclusions(&self) -> Vec<VertexId> {
        let mut is_prem = BTreeMap::new();
        for l in self.links.values() {
            for &p in &l.premisses {
                is_prem.insert(p, ());
            }
        }
        self.vertices.keys().copied().filter(|v| !is_prem.contains_key(v)).collect()
    }

    /// Each vertex is at most once a premiss and at most once a conclusion.
    pub fn is_well_formed(&self) -> bool {
        let mut prem: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut conc: BTreeMap<VertexId, usize> = BTreeMap::new();
        for l in self.links.values() {
            if l.premisses.len() + l.conclusions.len() != 3 {
                return false;
            }
            for &p in &l.premisses {
                *prem.entry(p).or_default() += 1;
            }
            for &c in &l.conclusions {
                *conc.entry(c).or_default() += 1;
            }
            if l.tentacles().any(|v| !self.vertices.contains_key(&v)) {
                return false;
            }
        }
        prem.values().chain(conc.values()).all(|&n| n == 1)
    }

    pub(crate) fn add_vertex(&mut self, v: MmVertex) -> VertexId {
        let id = self.next_vertex;
        self.next_vertex += 1;
        self.vertices.insert(id, v);
        id
    }

    pub(crate) fn add_link(&mut self, l: MmLink) -> LinkId {
        let id = self.next_link;
        self.next_link += 1;
        self.links.insert(id, l);
        id
    }

    /// Identifies `b` with `a`: `b` disappears and every tentacle on `b`
    /// moves to `a`. External markings are merged.
    pub(crate) fn merge_into(&mut self, a: VertexId, b: VertexId) {
        if a == b {
            return;
        }
        let vb = self.vertices.remove(&b).expect("merged vertex exists");
        for l in self.links.values_mut() {
            l.replace(b, a);
        }
        let va = self.vertices.get_mut(&a).expect("merged vertex exists");
        va.hyp = va.hyp.or(vb.hyp);
        va.conc |= vb.conc;
        if va.formula.is_none() {
            va.formula = vb.formula;
        }
    }

    /// Vertices that are atomic, have no link below and are not the goal:
    /// the negative atom occurrences still to be matched.
    pub fn unmatched_negative(&self) -> Vec<VertexId> {
        let prem = self.premiss_set();
        self.vertices
            .iter()
            .filter(|(id, v)| {
                !prem.contains_key(id)
                    && !v.conc
                    && v.formula.as_ref().is_some_and(|f| f.is_atom())
            })
            .map(|(id, _)| *id)
            .collect()
    }

    /// Atomic vertices with no link above that are not antecedent formulas.
    pub fn unmatched_positive(&self) -> Vec<VertexId> {
        let conc = self.conclusion_set();
        self.vertices
            .iter()
            .filter(|(id, v)| {
                !conc.contains_key(id)
                    && v.hyp.is_none()
                    && v.formula.as_ref().is_some_and(|f| f.is_atom())
            })
            .map(|(id, _)| *id)
            .collect()
    }

    fn premiss_set(&self) -> BTreeMap<VertexId, ()> {
        self.links
            .values()
            .flat_map(|l| l.premisses.iter().map(|&p| (p, ())))
            .collect()
    }

    fn conclusion_set(&self) -> BTreeMap<VertexId, ()> {
        self.links
            .values()
            .flat_map(|l| l.conclusions.iter().map(|&c| (c, ())))
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.unmatched_negative().is_empty() && self.unmatched_positive().is_empty()
    }

    /// Identifies a negative atom with a positive atom of the same name.
    pub fn link_atoms(&mut self, neg: VertexId, pos: VertexId) -> Result<VertexId, LinkError> {
        if !self.unmatched_negative().contains(&neg) || !self.unmatched_positive().contains(&pos) {
            return Err(LinkError::NotLinkable);
        }
        if self.vertices[&neg].formula != self.vertices[&pos].formula {
            return Err(LinkError::NameMismatch);
        }
        let (keep, gone) = (neg.min(pos), neg.max(pos));
        self.merge_into(keep, gone);
        Ok(keep)
    }

    /// Erases the formulas of internal vertices, keeping those of the
    /// sequent's hypotheses and conclusion.
    pub fn to_abstract(&self) -> MmStructure {
        let mut out = self.clone();
        for v in out.vertices.values_mut() {
            if v.hyp.is_none() && !v.conc {
                v.formula = None;
            }
        }
        out
    }

    /// Deterministic key invariant under renaming of vertex and link ids:
    /// vertices are numbered in depth-first order from the external vertices.
    pub fn canonical_key(&self) -> Vec<u64> {
        let mut order: BTreeMap<VertexId, u64> = BTreeMap::new();
        let mut link_seen: BTreeMap<LinkId, ()> = BTreeMap::new();
        let mut starts: Vec<VertexId> = Vec::new();
        let mut hyps: Vec<(usize, VertexId)> = self
            .vertices
            .iter()
            .filter_map(|(id, v)| v.hyp.map(|h| (h, *id)))
            .collect();
        hyps.sort();
        starts.extend(hyps.into_iter().map(|(_, v)| v));
        starts.extend(self.vertices.iter().filter(|(_, v)| v.conc).map(|(id, _)| *id));
        starts.extend(self.vertices.keys().copied());
        let mut incident: BTreeMap<VertexId, Vec<LinkId>> = BTreeMap::new();
        for (id, l) in &self.links {
            for v in l.tentacles() {
                incident.entry(v).or_default().push(*id);
            }
        }
        for s in starts {
            if order.contains_key(&s) {
                continue;
            }
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                if order.contains_key(&v) {
                    continue;
                }
                let n = order.len() as u64;
                order.insert(v, n);
                let mut next = Vec::new();
                for &lid in incident.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                    if link_seen.insert(lid, ()).is_none() {
                        next.extend(self.links[&lid].tentacles());
                    }
                }
                stack.extend(next.into_iter().rev());
            }
        }
        let mut key = Vec::new();
        let mut vs: Vec<(u64, &MmVertex)> =
            self.vertices.iter().map(|(id, v)| (order[id], v)).collect();
        vs.sort_by_key(|(n, _)| *n);
        for (_, v) in vs {
            key.push(v.hyp.map_or(0, |h| h as u64 + 1));
            key.push(u64::from(v.conc));
        }
        key.push(u64::MAX);
        let mut ls: Vec<Vec<u64>> = self
            .links
            .values()
            .map(|l| {
                let mut e = vec![
                    matches!(l.kind, LinkKind::Par) as u64,
                    l.mode.0.bytes().fold(0u64, |h, b| h.wrapping_mul(131).wrapping_add(b as u64)),
                    l.premisses.len() as u64,
                ];
                e.extend(l.tentacles().map(|v| order[&v]));
                e.push(l.arrow.map_or(u64::MAX, |a| order[&a]));
                e
            })
            .collect();
        ls.sort();
        for l in ls {
            key.extend(l);
        }
        key
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LinkError {
    #[error("vertices are not an unmatched negative/positive atom pair")]
    NotLinkable,
    #[error("polarity/name mismatch")]
    NameMismatch,
}

/// Unfolds the antecedent formulas negatively and the goal positively down
/// to atoms.
pub fn unfold_mm(sequent: &Sequent<Mode>) -> MmStructure {
    let mut ps = MmStructure {
        sequent: sequent.clone(),
        vertices: BTreeMap::new(),
        links: BTreeMap::new(),
        next_vertex: 0,
        next_link: 0,
    };
    for (i, a) in sequent.antecedent.iter().enumerate() {
        let v = ps.add_vertex(MmVertex {
            formula: Some(a.clone()),
            hyp: Some(i),
            conc: false,
        });
        unfold_neg(&mut ps, v, a);
    }
    let c = &sequent.succedent;
    let v = ps.add_vertex(MmVertex {
        formula: Some(c.clone()),
        hyp: None,
        conc: true,
    });
    unfold_pos(&mut ps, v, c);
    ps
}

fn internal(ps: &mut MmStructure, f: &MMFormula) -> VertexId {
    ps.add_vertex(MmVertex {
        formula: Some(f.clone()),
        hyp: None,
        conc: false,
    })
}

fn unfold_neg(ps: &mut MmStructure, v: VertexId, f: &MMFormula) {
    match f {
        MMFormula::Atom(_) => {}
        MMFormula::Over(m, a, b) | MMFormula::Under(m, b, a) => {
            let over = matches!(f, MMFormula::Over(..));
            let vb = internal(ps, b);
            let va = internal(ps, a);
            ps.add_link(MmLink {
                kind: LinkKind::Tensor,
                rule: Some(if over { MmRule::OverE } else { MmRule::UnderE }),
                mode: m.clone(),
                premisses: if over { vec![v, vb] } else { vec![vb, v] },
                conclusions: vec![va],
                arrow: None,
            });
            unfold_pos(ps, vb, b);
            unfold_neg(ps, va, a);
        }
        MMFormula::Prod(m, a, b) => {
            let va = internal(ps, a);
            let vb = internal(ps, b);
            ps.add_link(MmLink {
                kind: LinkKind::Par,
                rule: Some(MmRule::ProdE),
                mode: m.clone(),
                premisses: vec![v],
                conclusions: vec![va, vb],
                arrow: Some(v),
            });
            unfold_neg(ps, va, a);
            unfold_neg(ps, vb, b);
        }
    }
}

fn unfold_pos(ps: &mut MmStructure, v: VertexId, f: &MMFormula) {
    match f {
        MMFormula::Atom(_) => {}
        MMFormula::Over(m, a, b) | MMFormula::Under(m, b, a) => {
            let over = matches!(f, MMFormula::Over(..));
            let va = internal(ps, a);
            let vb = internal(ps, b);
            ps.add_link(MmLink {
                kind: LinkKind::Par,
                rule: Some(if over { MmRule::OverI } else { MmRule::UnderI }),
                mode: m.clone(),
                premisses: vec![va],
                conclusions: if over { vec![v, vb] } else { vec![vb, v] },
                arrow: Some(v),
            });
            unfold_pos(ps, va, a);
            unfold_neg(ps, vb, b);
        }
        MMFormula::Prod(m, a, b) => {
            let va = internal(ps, a);
            let vb = internal(ps, b);
            ps.add_link(MmLink {
                kind: LinkKind::Tensor,
                rule: Some(MmRule::ProdI),
                mode: m.clone(),
                premisses: vec![va, vb],
                conclusions: vec![v],
                arrow: None,
            });
            unfold_pos(ps, va, a);
            unfold_pos(ps, vb, b);
        }
    }
}

impl fmt::Display for MmStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (id, v) in &self.vertices {
            write!(f, "v{id}")?;
            if let Some(fm) = &v.formula {
                write!(f, " {fm}")?;
            }
            if let Some(h) = v.hyp {
                write!(f, " [hyp {h}]")?;
            }
            if v.conc {
                f.write_str(" [goal]")?;
            }
            writeln!(f)?;
        }
        for (id, l) in &self.links {
            let name = l.rule.map_or("tensor", MmRule::name);
            writeln!(
                f,
                "l{id} {name}{} {:?} -> {:?}{}",
                l.mode,
                l.premisses,
                l.conclusions,
                l.arrow.map(|a| format!(" arrow v{a}")).unwrap_or_default()
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_mm_sequent;

    fn count(ps: &MmStructure, kind: LinkKind) -> usize {
        ps.links.values().filter(|l| l.kind == kind).count()
    }

    #[test]
    fn unfolds_transitive_sentence() {
        let s = parse_mm_sequent("np, (np \\a s) /a np, np |- s").unwrap();
        let ps = unfold_mm(&s);
        assert_eq!(count(&ps, LinkKind::Tensor), 2);
        assert_eq!(count(&ps, LinkKind::Par), 0);
        assert!(ps.is_well_formed());
    }

    #[test]
    fn unfolds_composition_sequent() {
        let s = parse_mm_sequent("a /a b, b /a c |- a /a c").unwrap();
        let ps = unfold_mm(&s);
        assert_eq!(count(&ps, LinkKind::Tensor), 2);
        assert_eq!(count(&ps, LinkKind::Par), 1);
        let names = |vs: Vec<VertexId>| {
            let mut v: Vec<String> = vs
                .iter()
                .map(|v| ps.vertices[v].formula.as_ref().unwrap().to_string())
                .collect();
            v.sort();
            v
        };
        // hypotheses a, a/ab, b, b/ac, c; conclusions a, a/ac, b, c
        assert_eq!(names(ps.hypotheses()), ["a", "a /a b", "b", "b /a c", "c"]);
        assert_eq!(names(ps.conclusions()), ["a", "a /a c", "b", "c"]);
    }

    #[test]
    fn identity_axiom() {
        let s = parse_mm_sequent("a |- a").unwrap();
        let mut ps = unfold_mm(&s);
        assert_eq!(ps.vertices.len(), 2);
        assert!(ps.links.is_empty());
        let (n, p) = (ps.unmatched_negative(), ps.unmatched_positive());
        assert_eq!((n.len(), p.len()), (1, 1));
        let v = ps.link_atoms(n[0], p[0]).unwrap();
        let aps = ps.to_abstract();
        assert_eq!(aps.vertices.len(), 1);
        assert_eq!(aps.vertices[&v].hyp, Some(0));
        assert!(aps.vertices[&v].conc);
    }

    #[test]
    fn canonical_key_ignores_ids() {
        let s = parse_mm_sequent("a /a b, b |- a").unwrap();
        let ps = unfold_mm(&s);
        let mut renamed = ps.clone();
        let max = *renamed.vertices.keys().max().unwrap();
        let v = *renamed.vertices.keys().next().unwrap();
        let vx = renamed.vertices.remove(&v).unwrap();
        renamed.vertices.insert(max + 10, vx);
        for l in renamed.links.values_mut() {
            l.replace(v, max + 10);
        }
        assert_eq!(ps.canonical_key(), renamed.canonical_key());
    }
}
