//! Contractions and structural rewrites on abstract proof structures.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::formula::Mode;
use crate::grammar::{StructuralRule, TreePattern};

use super::structure::{LinkId, LinkKind, MmLink, MmStructure, VertexId};

/// One step of the correctness check.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MmStep {
    /// Contraction of a par link against a tensor link; `rule` is `/I`,
    /// `\I` or `*E`.
    Contract {
        rule: String,
        par: LinkId,
        tensor: LinkId,
    },
    /// Structural rewrite of the tensor tree whose lowest link is `root`.
    Rewrite { rule: String, root: LinkId },
}

impl fmt::Display for MmStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MmStep::Contract { rule, par, tensor } => {
                write!(f, "contract {rule} (par l{par}, tensor l{tensor})")
            }
            MmStep::Rewrite { rule, root } => write!(f, "rewrite {rule} at l{root}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("step does not apply: {0}")]
    NotApplicable(String),
    #[error("unknown structural rule `{0}`")]
    UnknownRule(String),
}

/// A redex found in the structure: vertices to delete and the pair to identify.
struct Redex {
    rule: &'static str,
    par: LinkId,
    tensor: LinkId,
    remove: [VertexId; 2],
    /// (upper, lower): the merged vertex keeps the link above `upper` and
    /// the link below `lower`.
    merge: (VertexId, VertexId),
}

fn redex_at(aps: &MmStructure, par: LinkId) -> Option<Redex> {
    let p = &aps.links[&par];
    if p.kind != LinkKind::Par {
        return None;
    }
    let arrow = p.arrow?;
    let tensor_with = |t: LinkId| -> Option<&MmLink> {
        let l = &aps.links[&t];
        (l.kind == LinkKind::Tensor && l.mode == p.mode).then_some(l)
    };
    if p.premisses[0] == arrow {
        // *E: main formula above, its two components below
        let (v1, v2) = (p.conclusions[0], p.conclusions[1]);
        let t = aps.down(v1)?;
        let tl = tensor_with(t)?;
        if tl.premisses != [v1, v2] {
            return None;
        }
        let h = tl.conclusions[0];
        if h == arrow || [arrow, h].iter().any(|x| [v1, v2].contains(x)) {
            return None;
        }
        return Some(Redex {
            rule: "*E",
            par,
            tensor: t,
            remove: [v1, v2],
            merge: (arrow, h),
        });
    }
    let over = p.conclusions[0] == arrow;
    let (r, v) = if over {
        (p.conclusions[0], p.conclusions[1])
    } else {
        (p.conclusions[1], p.conclusions[0])
    };
    let w = p.premisses[0];
    let t = aps.up(w)?;
    let tl = tensor_with(t)?;
    let h = if over {
        (tl.premisses[1] == v).then_some(tl.premisses[0])?
    } else {
        (tl.premisses[0] == v).then_some(tl.premisses[1])?
    };
    if h == r || v == w || [h, r].iter().any(|x| [v, w].contains(x)) {
        return None;
    }
    Some(Redex {
        rule: if over { "/I" } else { "\\I" },
        par,
        tensor: t,
        remove: [v, w],
        merge: (h, r),
    })
}

fn apply_redex(aps: &MmStructure, rx: &Redex) -> MmStructure {
    let mut out = aps.clone();
    out.links.remove(&rx.par);
    out.links.remove(&rx.tensor);
    for v in rx.remove {
        out.vertices.remove(&v);
    }
    let (a, b) = rx.merge;
    out.merge_into(a.min(b), a.max(b));
    out
}

/// Every contraction applicable to the structure, with its result.
pub fn contract_step(aps: &MmStructure) -> Vec<(MmStep, MmStructure)> {
    aps.links
        .keys()
        .filter_map(|&id| redex_at(aps, id))
        .map(|rx| {
            let step = MmStep::Contract {
                rule: rx.rule.to_string(),
                par: rx.par,
                tensor: rx.tensor,
            };
            (step, apply_redex(aps, &rx))
        })
        .collect()
}

struct PatternMatch {
    leaves: BTreeMap<String, VertexId>,
    links: Vec<LinkId>,
    inner: Vec<VertexId>,
}

fn match_pattern(aps: &MmStructure, pat: &TreePattern, link: LinkId, m: &mut PatternMatch) -> bool {
    let TreePattern::Node(mode, l, r) = pat else {
        return false;
    };
    let lk = &aps.links[&link];
    if lk.kind != LinkKind::Tensor || &lk.mode != mode {
        return false;
    }
    m.links.push(link);
    for (sub, &v) in [l, r].into_iter().zip(&lk.premisses) {
        match sub.as_ref() {
            TreePattern::Leaf(x) => {
                m.leaves.insert(x.clone(), v);
            }
            node => {
                let vx = &aps.vertices[&v];
                if vx.hyp.is_some() || vx.conc {
                    return false;
                }
                let Some(up) = aps.up(v) else { return false };
                m.inner.push(v);
                if !match_pattern(aps, node, up, m) {
                    return false;
                }
            }
        }
    }
    true
}

fn build_pattern(
    out: &mut MmStructure,
    pat: &TreePattern,
    conclusion: VertexId,
    leaves: &BTreeMap<String, VertexId>,
) {
    let TreePattern::Node(mode, l, r) = pat else {
        unreachable!("rule sides are trees");
    };
    let mut premisses = Vec::new();
    let mut pending = Vec::new();
    for sub in [l, r] {
        match sub.as_ref() {
            TreePattern::Leaf(x) => premisses.push(leaves[x]),
            node => {
                let u = out.add_vertex(super::structure::MmVertex {
                    formula: None,
                    hyp: None,
                    conc: false,
                });
                premisses.push(u);
                pending.push((node, u));
            }
        }
    }
    out.add_link(MmLink {
        kind: LinkKind::Tensor,
        rule: None,
        mode: Mode::clone(mode),
        premisses,
        conclusions: vec![conclusion],
        arrow: None,
    });
    for (node, u) in pending {
        build_pattern(out, node, u, leaves);
    }
}

fn rewrite_at(aps: &MmStructure, rule: &StructuralRule, root: LinkId) -> Option<MmStructure> {
    let mut m = PatternMatch {
        leaves: BTreeMap::new(),
        links: Vec::new(),
        inner: Vec::new(),
    };
    if !match_pattern(aps, &rule.lhs, root, &mut m) {
        return None;
    }
    let conclusion = aps.links[&root].conclusions[0];
    let mut vertices: Vec<VertexId> = m.leaves.values().chain(&m.inner).copied().collect();
    vertices.push(conclusion);
    let mut links = m.links.clone();
    vertices.sort();
    vertices.dedup();
    links.sort();
    links.dedup();
    // cyclic structures can fold a pattern onto itself
    if vertices.len() != m.leaves.len() + m.inner.len() + 1 || links.len() != m.links.len() {
        return None;
    }
    let mut out = aps.clone();
    for l in &m.links {
        out.links.remove(l);
    }
    for v in &m.inner {
        out.vertices.remove(v);
    }
    build_pattern(&mut out, &rule.rhs, conclusion, &m.leaves);
    Some(out)
}

/// Every structural rewrite applicable to the structure, with its result.
pub fn rewrite_step(aps: &MmStructure, rules: &[StructuralRule]) -> Vec<(MmStep, MmStructure)> {
    let mut out = Vec::new();
    for rule in rules {
        for &root in aps.links.keys() {
            if let Some(next) = rewrite_at(aps, rule, root) {
                out.push((
                    MmStep::Rewrite {
                        rule: rule.name.clone(),
                        root,
                    },
                    next,
                ));
            }
        }
    }
    out
}

/// Applies a single step chosen by the caller (e.g. from an interactive session).
pub fn apply_step(
    aps: &MmStructure,
    step: &MmStep,
    rules: &[StructuralRule],
) -> Result<MmStructure, StepError> {
    match step {
        MmStep::Contract { par, tensor, .. } => {
            if !aps.links.contains_key(par) {
                return Err(StepError::NotApplicable(format!("no link l{par}")));
            }
            match redex_at(aps, *par) {
                Some(rx) if rx.tensor == *tensor => Ok(apply_redex(aps, &rx)),
                _ => Err(StepError::NotApplicable(step.to_string())),
            }
        }
        MmStep::Rewrite { rule, root } => {
            let r = rules
                .iter()
                .find(|r| &r.name == rule)
                .ok_or_else(|| StepError::UnknownRule(rule.clone()))?;
            if !aps.links.contains_key(root) {
                return Err(StepError::NotApplicable(format!("no link l{root}")));
            }
            rewrite_at(aps, r, *root).ok_or_else(|| StepError::NotApplicable(step.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_mm_sequent;
    use crate::mm::{enumerate_matchings, unfold_mm};

    fn abstract_net(text: &str) -> MmStructure {
        let ps = unfold_mm(&parse_mm_sequent(text).unwrap());
        enumerate_matchings(&ps, true).remove(0).0.to_abstract()
    }

    #[test]
    fn one_introduction_redex() {
        let aps = abstract_net("b /a a |- b /a a");
        let steps = contract_step(&aps);
        assert_eq!(steps.len(), 1);
        let (step, next) = &steps[0];
        assert!(matches!(step, MmStep::Contract { rule, .. } if rule == "/I"));
        assert_eq!(apply_step(&aps, step, &[]).as_ref(), Ok(next));
        assert!(contract_step(next).is_empty());
    }

    #[test]
    fn bad_steps_are_rejected() {
        let aps = abstract_net("b /a a |- b /a a");
        let missing = MmStep::Contract { rule: "/I".into(), par: 99, tensor: 0 };
        assert!(matches!(apply_step(&aps, &missing, &[]), Err(StepError::NotApplicable(_))));
        let unknown = MmStep::Rewrite { rule: "nope".into(), root: 0 };
        assert!(matches!(apply_step(&aps, &unknown, &[]), Err(StepError::UnknownRule(_))));
    }

    #[test]
    fn cyclic_structures_do_not_break_rewriting() {
        use crate::grammar::associativity;
        use crate::mm::{prove_mm_sequent, MmOptions};
        let s = parse_mm_sequent(r"b \a a, b \a (a \a b) |- b \a (a /a a)").unwrap();
        let opts = MmOptions { filter: false, ..MmOptions::default() };
        let found = prove_mm_sequent(&s, &associativity(&Mode::new("a")), &opts);
        assert!(found.proofs.is_empty());
    }
}
