//! Multiplicative linear logic image of a multimodal structure, checked by
//! contraction.

use std::collections::BTreeMap;

use super::structure::{LinkKind, MmStructure, VertexId};

/// Union-find over vertex ids.
#[derive(Debug, Clone, Default)]
pub(crate) struct Classes {
    parent: BTreeMap<VertexId, VertexId>,
}

impl Classes {
    pub fn find(&mut self, v: VertexId) -> VertexId {
        let p = *self.parent.entry(v).or_insert(v);
        if p == v {
            return v;
        }
        let r = self.find(p);
        self.parent.insert(v, r);
        r
    }

    /// Returns false if `a` and `b` were already joined.
    pub fn union(&mut self, a: VertexId, b: VertexId) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent.insert(ra.max(rb), ra.min(rb));
        true
    }
}

/// Outcome of contracting the MLL image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Image {
    /// A switching has a cycle.
    Cyclic,
    /// Normal form has this many vertices.
    Contracted(usize),
}

fn contract_image(ps: &MmStructure) -> Image {
    let mut classes = Classes::default();
    // solid edges: every tensor link joins its three tentacles
    for l in ps.links.values().filter(|l| l.kind == LinkKind::Tensor) {
        let t: Vec<VertexId> = l.tentacles().collect();
        if !classes.union(t[0], t[1]) || !classes.union(t[0], t[2]) {
            return Image::Cyclic;
        }
    }
    // par pairs: arrow vertex to each of the other two tentacles
    let mut pars: Vec<(VertexId, VertexId, VertexId)> = ps
        .links
        .values()
        .filter(|l| l.kind == LinkKind::Par)
        .map(|l| {
            let main = l.arrow.expect("par links carry an arrow");
            let others: Vec<VertexId> = l.tentacles().filter(|&v| v != main).collect();
            (main, others[0], others[1])
        })
        .collect();
    loop {
        let mut progress = false;
        let mut i = 0;
        while i < pars.len() {
            let (m, x, y) = pars[i];
            let (rm, rx, ry) = (classes.find(m), classes.find(x), classes.find(y));
            if rm == rx || rm == ry {
                return Image::Cyclic;
            }
            if rx == ry {
                classes.union(rm, rx);
                pars.swap_remove(i);
                progress = true;
            } else {
                i += 1;
            }
        }
        if !progress {
            break;
        }
    }
    let mut roots: Vec<VertexId> = ps.vertices.keys().map(|&v| classes.find(v)).collect();
    roots.sort();
    roots.dedup();
    Image::Contracted(roots.len())
}

/// Rejects structures whose multiplicative image cannot be part of an MLL
/// proof net. On complete structures this is the full acyclicity and
/// connectedness criterion; on partial ones only cycles are detected.
pub fn mll_filter(ps: &MmStructure) -> bool {
    match contract_image(ps) {
        Image::Cyclic => false,
        // a leftover par pair spans three classes, so one class means none is left
        Image::Contracted(n) => !ps.is_complete() || n == 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_mm_sequent;
    use crate::mm::{enumerate_matchings, unfold_mm};

    #[test]
    fn open_structures_pass_unless_cyclic() {
        let ps = unfold_mm(&parse_mm_sequent("b /a a |- b /a a").unwrap());
        assert!(mll_filter(&ps));
    }

    #[test]
    fn complete_structures_need_one_component() {
        let ps = unfold_mm(&parse_mm_sequent("a /a a, a |- a").unwrap());
        let verdicts: Vec<bool> = enumerate_matchings(&ps, false)
            .iter()
            .map(|(done, _)| mll_filter(done))
            .collect();
        assert_eq!(verdicts.iter().filter(|&&v| v).count(), 1);
        let ps = unfold_mm(&parse_mm_sequent("a /a a |- a /a a").unwrap());
        let verdicts: Vec<bool> = enumerate_matchings(&ps, false)
            .iter()
            .map(|(done, _)| mll_filter(done))
            .collect();
        assert_eq!(verdicts.iter().filter(|&&v| v).count(), 1);
    }
}
