use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::formula::FoTerm;

use super::structure::{FoLinkKind, FoStructure};

/// An edge of a contraction graph, in terms of current vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum CEdge {
    Solid { a: usize, b: usize },
    /// The two dotted edges of a binary par link, joined at `joint`.
    Par { joint: usize, left: usize, right: usize },
    /// Dotted edge of a quantifier par link, from the premiss side `from` to
    /// the conclusion side `to`.
    Univ { from: usize, to: usize, var: String },
}

impl CEdge {
    fn rename(&mut self, gone: usize, keep: usize) {
        let r = |v: &mut usize| {
            if *v == gone {
                *v = keep
            }
        };
        match self {
            CEdge::Solid { a, b } => {
                r(a);
                r(b)
            }
            CEdge::Par { joint, left, right } => {
                r(joint);
                r(left);
                r(right)
            }
            CEdge::Univ { from, to, .. } => {
                r(from);
                r(to)
            }
        }
    }

    fn is_loop(&self) -> bool {
        match self {
            CEdge::Solid { a, b } => a == b,
            CEdge::Par { joint, left, right } => joint == left || joint == right,
            CEdge::Univ { from, to, .. } => from == to,
        }
    }
}

/// One contraction, named as in the contraction table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum CStep {
    C { edge: usize, keep: usize, gone: usize },
    P { edge: usize, keep: usize, gone: usize },
    U { edge: usize, keep: usize, gone: usize, var: String },
}

impl CStep {
    pub fn letter(&self) -> char {
        match self {
            CStep::C { .. } => 'c',
            CStep::P { .. } => 'p',
            CStep::U { .. } => 'u',
        }
    }
}

impl fmt::Display for CStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CStep::C { keep, gone, .. } | CStep::P { keep, gone, .. } => {
                write!(f, "{} {gone}->{keep}", self.letter())
            }
            CStep::U { keep, gone, var, .. } => write!(f, "u[{var}] {gone}->{keep}"),
        }
    }
}

/// A proof structure with formulas erased down to their free variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractionGraph {
    /// Current vertices with their free variables.
    pub vertices: BTreeMap<usize, BTreeSet<String>>,
    pub edges: Vec<CEdge>,
    /// Current vertex of each original formula occurrence.
    rep: Vec<usize>,
    /// Free variables of each original occurrence, before unification.
    occ_vars: Vec<BTreeSet<String>>,
    /// Eigenvariables removed by a `u` contraction.
    discharged: BTreeSet<String>,
    /// Variables whose value may still change (unbound metavariables); a `u`
    /// contraction waits until none of them sits outside the redex.
    volatile: BTreeSet<String>,
}

impl ContractionGraph {
    /// One vertex per formula occurrence, one edge per link. Unlinked atoms
    /// are simply vertices without an axiom edge.
    pub fn from_structure(ps: &FoStructure) -> Self {
        Self::build(ps, &|_| true)
    }

    /// The graph of the sub-structure on the given occurrences: only links
    /// with every tentacle inside are kept.
    pub fn within(ps: &FoStructure, occs: &BTreeSet<usize>) -> Self {
        Self::build(ps, &|o| occs.contains(&o))
    }

    fn build(ps: &FoStructure, keep: &dyn Fn(usize) -> bool) -> Self {
        let mut edges = Vec::new();
        for l in &ps.links {
            if !l.premisses.iter().chain(&l.conclusions).all(|&o| keep(o)) {
                continue;
            }
            match (l.rule.kind(), l.premisses.as_slice(), l.conclusions.as_slice()) {
                (FoLinkKind::Axiom | FoLinkKind::Cut, [], [a, b])
                | (FoLinkKind::Cut, [a, b], []) => edges.push(CEdge::Solid { a: *a, b: *b }),
                (FoLinkKind::Tensor, ps, [c]) => {
                    for p in ps {
                        edges.push(CEdge::Solid { a: *c, b: *p });
                    }
                }
                (FoLinkKind::Par, [l, r], [c]) => edges.push(CEdge::Par {
                    joint: *c,
                    left: *l,
                    right: *r,
                }),
                (FoLinkKind::Par, [p], [c]) => edges.push(CEdge::Univ {
                    from: *p,
                    to: *c,
                    var: l.var.clone().expect("quantifier link without eigenvariable"),
                }),
                other => unreachable!("malformed link {other:?}"),
            }
        }
        let n = ps.occs.len();
        let occ_vars: Vec<BTreeSet<String>> =
            ps.occs.iter().map(|o| o.formula.free_vars()).collect();
        let mut g = ContractionGraph {
            vertices: (0..n).filter(|&i| keep(i)).map(|i| (i, BTreeSet::new())).collect(),
            edges,
            rep: (0..n).collect(),
            occ_vars,
            discharged: BTreeSet::new(),
            volatile: BTreeSet::new(),
        };
        g.refresh(ps);
        g
    }

    /// Builds a graph directly from vertex labels and edges.
    pub fn from_parts(vertices: BTreeMap<usize, BTreeSet<String>>, edges: Vec<CEdge>) -> Self {
        let n = vertices.keys().next_back().map_or(0, |m| m + 1);
        let mut occ_vars = vec![BTreeSet::new(); n];
        for (&v, vars) in &vertices {
            occ_vars[v] = vars.clone();
        }
        ContractionGraph {
            vertices,
            edges,
            rep: (0..n).collect(),
            occ_vars,
            discharged: BTreeSet::new(),
            volatile: BTreeSet::new(),
        }
    }

    /// Recomputes vertex variables under the structure's current unifier and
    /// records which metavariables are still unbound.
    pub fn refresh(&mut self, ps: &FoStructure) {
        for vars in self.vertices.values_mut() {
            vars.clear();
        }
        for (o, raw) in self.occ_vars.iter().enumerate() {
            let Some(vars) = self.vertices.get_mut(&self.rep[o]) else {
                continue;
            };
            for v in raw {
                let t = ps.unifier.resolve(&FoTerm::var(v));
                if let Some(w) = t.as_var() {
                    if !self.discharged.contains(w) {
                        vars.insert(w.to_string());
                    }
                }
            }
        }
        self.volatile = ps
            .metavars
            .iter()
            .filter(|m| ps.unifier.get(m).is_none())
            .cloned()
            .collect();
    }

    /// Current vertex of an original occurrence.
    pub fn vertex_of(&self, occ: usize) -> usize {
        self.rep[occ]
    }

    /// Original occurrences merged into vertex `v`.
    pub fn members(&self, v: usize) -> Vec<usize> {
        (0..self.rep.len()).filter(|&o| self.rep[o] == v).collect()
    }

    pub fn add_solid(&mut self, occ_a: usize, occ_b: usize) {
        self.edges.push(CEdge::Solid {
            a: self.rep[occ_a],
            b: self.rep[occ_b],
        });
    }

    pub fn is_single_vertex(&self) -> bool {
        self.vertices.len() == 1 && self.edges.is_empty()
    }

    fn holds_elsewhere(&self, x: &str, here: usize) -> bool {
        self.vertices
            .iter()
            .any(|(&v, vars)| v != here && (vars.contains(x) || !vars.is_disjoint(&self.volatile)))
    }

    /// Every contraction applicable now.
    pub fn redexes(&self) -> Vec<CStep> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            match e {
                CEdge::Solid { a, b } if a != b => out.push(CStep::C {
                    edge: i,
                    keep: *a.min(b),
                    gone: *a.max(b),
                }),
                CEdge::Par { joint, left, right } if left == right && joint != left => {
                    out.push(CStep::P {
                        edge: i,
                        keep: *joint,
                        gone: *left,
                    })
                }
                CEdge::Univ { from, to, var } if from != to && !self.holds_elsewhere(var, *from) => {
                    out.push(CStep::U {
                        edge: i,
                        keep: *to,
                        gone: *from,
                        var: var.clone(),
                    })
                }
                _ => {}
            }
        }
        out
    }

    pub fn apply(&mut self, step: &CStep) {
        let (edge, keep, gone) = match step {
            CStep::C { edge, keep, gone } | CStep::P { edge, keep, gone } => (*edge, *keep, *gone),
            CStep::U {
                edge,
                keep,
                gone,
                var,
            } => {
                self.discharged.insert(var.clone());
                (*edge, *keep, *gone)
            }
        };
        self.edges.remove(edge);
        let moved = self.vertices.remove(&gone).expect("live vertex");
        let target = self.vertices.get_mut(&keep).expect("live vertex");
        target.extend(moved);
        if let CStep::U { var, .. } = step {
            target.remove(var);
        }
        for r in self.rep.iter_mut() {
            if *r == gone {
                *r = keep;
            }
        }
        for e in &mut self.edges {
            e.rename(gone, keep);
        }
    }

    /// Contracts greedily (first redex in edge order) until stuck.
    pub fn contract(&mut self) -> Vec<CStep> {
        let mut trace = Vec::new();
        while let Some(step) = self.redexes().into_iter().next() {
            self.apply(&step);
            trace.push(step);
        }
        trace
    }

    /// An edge whose ends have been identified: no completion can contract.
    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(CEdge::is_loop)
    }

    /// Vertices reachable from `v` by moving from a premiss side to a
    /// conclusion side of a dotted edge, `v` included.
    fn descendants(&self, v: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([v]);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for e in &self.edges {
                let next = match e {
                    CEdge::Par { joint, left, right } if *left == u || *right == u => *joint,
                    CEdge::Univ { from, to, .. } if *from == u => *to,
                    _ => continue,
                };
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        seen
    }

    /// The eigenvariable of some quantifier edge occurs at the edge's
    /// conclusion side or below it.
    pub fn scope_violation(&self) -> Option<String> {
        for e in &self.edges {
            if let CEdge::Univ { to, var, .. } = e {
                if self
                    .descendants(*to)
                    .iter()
                    .any(|d| self.vertices[d].contains(var))
                {
                    return Some(var.clone());
                }
            }
        }
        None
    }

    /// Canonical description independent of vertex naming: blocks of
    /// original occurrences with their variables, and the remaining edges
    /// with each end named by the smallest occurrence of its block.
    pub fn normal_form_key(&self) -> (Vec<(Vec<usize>, BTreeSet<String>)>, Vec<String>) {
        let name = |v: &usize| self.members(*v)[0];
        let blocks = self
            .vertices
            .iter()
            .map(|(&v, vars)| (self.members(v), vars.clone()))
            .collect();
        let mut edges: Vec<String> = self
            .edges
            .iter()
            .map(|e| match e {
                CEdge::Solid { a, b } => {
                    let (a, b) = (name(a), name(b));
                    format!("c{}-{}", a.min(b), a.max(b))
                }
                CEdge::Par { joint, left, right } => {
                    format!("p{}:{},{}", name(joint), name(left), name(right))
                }
                CEdge::Univ { from, to, var } => format!("u{var}:{}>{}", name(from), name(to)),
            })
            .collect();
        edges.sort();
        (blocks, edges)
    }
}

impl fmt::Display for ContractionGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, vars) in &self.vertices {
            let vs: Vec<&str> = vars.iter().map(String::as_str).collect();
            writeln!(f, "v{v} {{{}}}", vs.join(","))?;
        }
        for e in &self.edges {
            match e {
                CEdge::Solid { a, b } => writeln!(f, "v{a} -- v{b}")?,
                CEdge::Par { joint, left, right } => {
                    writeln!(f, "v{joint} .. v{left} | v{right}")?
                }
                CEdge::Univ { from, to, var } => writeln!(f, "v{from} ..{var}.> v{to}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::complete_structures;
    use crate::formula::parse_fo_sequent;

    fn structures(text: &str) -> Vec<FoStructure> {
        complete_structures(&parse_fo_sequent(text).unwrap())
            .into_iter()
            .map(|mut ps| {
                ps.ground();
                ps
            })
            .collect()
    }

    fn letters(steps: &[CStep]) -> String {
        let mut l: Vec<char> = steps.iter().map(CStep::letter).collect();
        l.sort();
        l.into_iter().collect()
    }

    #[test]
    fn identity_is_one_solid_edge() {
        let ps = &structures("a |- a")[0];
        let mut g = ContractionGraph::from_structure(ps);
        assert_eq!((g.vertices.len(), g.edges.len()), (2, 1));
        assert_eq!(letters(&g.contract()), "c");
        assert!(g.is_single_vertex());
    }

    #[test]
    fn straight_lollipop_uses_a_par_step() {
        let all = structures("a -o b |- a -o b");
        assert_eq!(all.len(), 1);
        let mut g = ContractionGraph::from_structure(&all[0]);
        assert_eq!(letters(&g.contract()).matches('p').count(), 1);
        assert!(g.is_single_vertex());
    }

    #[test]
    fn universal_edge_contracts_last() {
        let ps = &structures("forall x.p(x) |- forall y.p(y)")[0];
        let mut g = ContractionGraph::from_structure(ps);
        let steps = g.contract();
        assert!(g.is_single_vertex());
        assert_eq!(steps.last().map(CStep::letter), Some('u'));
    }

    #[test]
    fn crossed_matching_leaves_a_loop() {
        let all = structures("a -o a |- a -o a");
        assert_eq!(all.len(), 2);
        let verdicts: Vec<bool> = all
            .iter()
            .map(|ps| {
                let mut g = ContractionGraph::from_structure(ps);
                g.contract();
                assert_eq!(g.is_single_vertex(), !g.has_loop());
                g.is_single_vertex()
            })
            .collect();
        assert_eq!(verdicts.iter().filter(|&&b| b).count(), 1);
    }

    #[test]
    fn normal_form_does_not_depend_on_order() {
        let ps = &structures("a -o b, b -o c |- a -o c")[0];
        let mut first = ContractionGraph::from_structure(ps);
        first.contract();
        let mut last = ContractionGraph::from_structure(ps);
        while let Some(step) = last.redexes().pop() {
            last.apply(&step);
        }
        assert_eq!(first.normal_form_key(), last.normal_form_key());
    }

    #[test]
    fn within_everything_is_the_whole_graph() {
        let ps = &structures("a -o b, a |- b")[0];
        let all: BTreeSet<usize> = (0..ps.occs.len()).collect();
        assert_eq!(ContractionGraph::within(ps, &all), ContractionGraph::from_structure(ps));
        let none = ContractionGraph::within(ps, &BTreeSet::new());
        assert!(none.vertices.is_empty());
    }
}
