//! Enumeration of axiom matchings (identifications of atom occurrences).

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use super::filter::mll_filter;
use super::structure::{MmStructure, VertexId};

/// Identified atom pairs `(negative, positive)` in the order chosen.
pub type Matching = Vec<(VertexId, VertexId)>;

fn atom_name(ps: &MmStructure, v: VertexId) -> &str {
    match &ps.vertices[&v].formula {
        Some(crate::formula::Formula::Atom(p)) => p,
        _ => unreachable!("unmatched vertices are atomic"),
    }
}

/// Whether every atom name has as many negative as positive occurrences.
pub fn atoms_balanced(ps: &MmStructure) -> bool {
    let mut count: BTreeMap<&str, i64> = BTreeMap::new();
    for v in ps.unmatched_negative() {
        *count.entry(atom_name(ps, v)).or_default() += 1;
    }
    for v in ps.unmatched_positive() {
        *count.entry(atom_name(ps, v)).or_default() -= 1;
    }
    count.values().all(|&c| c == 0)
}

/// Candidate links for every unmatched atom, as `(atom, partners)`.
/// With `filter`, partners whose link makes the MLL image cyclic are dropped.
pub fn candidates(ps: &MmStructure, filter: bool) -> Vec<(VertexId, Vec<VertexId>)> {
    let neg = ps.unmatched_negative();
    let pos = ps.unmatched_positive();
    let ok = |n: VertexId, p: VertexId| {
        if atom_name(ps, n) != atom_name(ps, p) {
            return false;
        }
        if !filter {
            return true;
        }
        let mut next = ps.clone();
        next.link_atoms(n, p).is_ok() && mll_filter(&next)
    };
    let mut pairs: BTreeMap<(VertexId, VertexId), bool> = BTreeMap::new();
    for &n in &neg {
        for &p in &pos {
            pairs.insert((n, p), ok(n, p));
        }
    }
    let mut out = Vec::new();
    for &n in &neg {
        out.push((n, pos.iter().copied().filter(|&p| pairs[&(n, p)]).collect()));
    }
    for &p in &pos {
        out.push((p, neg.iter().copied().filter(|&n| pairs[&(n, p)]).collect()));
    }
    out.sort_by_key(|(v, c): &(VertexId, Vec<VertexId>)| (c.len(), *v));
    out
}

/// Calls `visit` for every complete matching. Atoms are linked
/// least-possibilities first, ties broken by lowest vertex id.
pub fn for_each_matching<B>(
    ps: &MmStructure,
    filter: bool,
    visit: &mut impl FnMut(&MmStructure, &Matching) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if !atoms_balanced(ps) {
        return ControlFlow::Continue(());
    }
    if filter && !mll_filter(ps) {
        return ControlFlow::Continue(());
    }
    search(ps, filter, &mut Vec::new(), visit)
}

fn search<B>(
    ps: &MmStructure,
    filter: bool,
    acc: &mut Matching,
    visit: &mut impl FnMut(&MmStructure, &Matching) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let cands = candidates(ps, filter);
    let Some((atom, partners)) = cands.into_iter().next() else {
        return visit(ps, acc);
    };
    let negative = ps.unmatched_negative().contains(&atom);
    for p in partners {
        let (n, q) = if negative { (atom, p) } else { (p, atom) };
        let mut next = ps.clone();
        next.link_atoms(n, q).expect("candidate pairs are linkable");
        acc.push((n, q));
        search(&next, filter, acc, visit)?;
        acc.pop();
    }
    ControlFlow::Continue(())
}

/// All complete matchings with the resulting structures.
pub fn enumerate_matchings(ps: &MmStructure, filter: bool) -> Vec<(MmStructure, Matching)> {
    let mut out = Vec::new();
    let _ = for_each_matching::<()>(ps, filter, &mut |s, m| {
        out.push((s.clone(), m.clone()));
        ControlFlow::Continue(())
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_mm_sequent;
    use crate::mm::unfold_mm;

    fn unfolded(text: &str) -> MmStructure {
        unfold_mm(&parse_mm_sequent(text).unwrap())
    }

    #[test]
    fn balance_counts_names_and_polarities() {
        assert!(atoms_balanced(&unfolded("a /a b, b |- a")));
        assert!(!atoms_balanced(&unfolded("a, a |- a")));
        assert!(!atoms_balanced(&unfolded("a |- b")));
    }

    #[test]
    fn candidates_share_the_name() {
        let ps = unfolded("a /a b, b |- a");
        for (neg, poss) in candidates(&ps, false) {
            for p in poss {
                assert_eq!(atom_name(&ps, neg), atom_name(&ps, p));
            }
        }
    }

    #[test]
    fn matchings_are_bijections() {
        let ps = unfolded("a /a a, a |- a");
        let all = enumerate_matchings(&ps, false);
        assert_eq!(all.len(), 2);
        for (done, m) in &all {
            assert!(done.is_complete());
            assert_eq!(m.len(), 2);
        }
    }
}
