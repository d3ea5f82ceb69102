//! Graphviz output for proof structures and contraction graphs.

use std::fmt::Write;

use crate::fol::{CEdge, ContractionGraph, FoLinkKind, FoStructure};
use crate::formula::Polarity;
use crate::mm::{LinkKind, MmRule, MmStructure};

fn esc(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Link node style: tensor links are hollow, par links filled.
fn link_node(out: &mut String, id: &str, label: &str, par: bool) {
    let fill = if par {
        "style=filled, fillcolor=black, fontcolor=white"
    } else {
        "style=solid"
    };
    let _ = writeln!(out, "  {id} [shape=circle, {fill}, label=\"{}\"];", esc(label));
}

/// One node per vertex and per link; tentacles are numbered 1 to 3, and the
/// arrow of a par link points at its main vertex.
pub fn mm_to_dot(ps: &MmStructure, words: &[String]) -> String {
    let mut out = String::from("digraph proof {\n  rankdir=BT;\n");
    for (id, v) in &ps.vertices {
        let mut label = v.formula.as_ref().map(|f| f.to_string()).unwrap_or_default();
        if let Some(i) = v.hyp {
            if let Some(w) = words.get(i) {
                label = format!("{w} : {label}");
            }
        }
        let shape = if v.conc { "doublecircle" } else if v.hyp.is_some() { "box" } else { "ellipse" };
        let _ = writeln!(out, "  v{id} [shape={shape}, label=\"{}\"];", esc(&label));
    }
    for (id, l) in &ps.links {
        let name = l.rule.map_or("", MmRule::name);
        let label = format!("{name} {}", l.mode);
        link_node(&mut out, &format!("l{id}"), label.trim(), l.kind == LinkKind::Par);
        let mut n = 0;
        for &p in &l.premisses {
            n += 1;
            let head = if l.arrow == Some(p) { "normal" } else { "none" };
            let _ = writeln!(out, "  v{p} -> l{id} [label=\"{n}\", dir=back, arrowtail={head}];");
        }
        for &c in &l.conclusions {
            n += 1;
            let head = if l.arrow == Some(c) { "normal" } else { "none" };
            let _ = writeln!(out, "  l{id} -> v{c} [label=\"{n}\", dir=back, arrowtail=none, arrowhead={head}];");
        }
    }
    out.push_str("}\n");
    out
}

pub fn fol_to_dot(ps: &FoStructure, words: &[String]) -> String {
    let mut out = String::from("digraph proof {\n  rankdir=BT;\n");
    for (id, o) in ps.occs.iter().enumerate() {
        let sign = if o.polarity == Polarity::Positive { "+" } else { "-" };
        let mut label = format!("{}{sign}", ps.formula(id));
        if let Some(w) = o.hyp.and_then(|i| words.get(i)) {
            label = format!("{w} : {label}");
        }
        let shape = if o.conc { "doublecircle" } else if o.hyp.is_some() { "box" } else { "ellipse" };
        let _ = writeln!(out, "  o{id} [shape={shape}, label=\"{}\"];", esc(&label));
    }
    for (id, l) in ps.links.iter().enumerate() {
        if l.rule.kind() == FoLinkKind::Axiom {
            let _ = writeln!(out, "  o{} -> o{} [dir=none, label=\"ax\"];", l.conclusions[0], l.conclusions[1]);
            continue;
        }
        let label = match &l.var {
            Some(v) => format!("{} {v}", l.rule.name()),
            None => l.rule.name().to_string(),
        };
        link_node(&mut out, &format!("l{id}"), &label, l.rule.kind() == FoLinkKind::Par);
        let mut n = 0;
        for &p in &l.premisses {
            n += 1;
            let _ = writeln!(out, "  o{p} -> l{id} [label=\"{n}\", arrowhead=none];");
        }
        for &c in &l.conclusions {
            n += 1;
            let _ = writeln!(out, "  l{id} -> o{c} [label=\"{n}\"];");
        }
    }
    out.push_str("}\n");
    out
}

/// Solid edges plain, par edges dashed from the joint, quantifier edges
/// dashed and directed from premiss side to conclusion side.
pub fn graph_to_dot(g: &ContractionGraph) -> String {
    let mut out = String::from("digraph contraction {\n");
    for (v, vars) in &g.vertices {
        let vs: Vec<&str> = vars.iter().map(String::as_str).collect();
        let _ = writeln!(out, "  v{v} [label=\"v{v} {{{}}}\"];", esc(&vs.join(",")));
    }
    for e in &g.edges {
        let _ = match e {
            CEdge::Solid { a, b } => writeln!(out, "  v{a} -> v{b} [dir=none];"),
            CEdge::Par { joint, left, right } => {
                writeln!(out, "  v{joint} -> v{left} [style=dashed, arrowhead=none, label=\"1\"];")
                    .and_then(|_| {
                        writeln!(out, "  v{joint} -> v{right} [style=dashed, arrowhead=none, label=\"2\"];")
                    })
            }
            CEdge::Univ { from, to, var } => {
                writeln!(out, "  v{from} -> v{to} [style=dashed, label=\"{}\"];", esc(var))
            }
        };
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::{to_contraction_graph, unfold_fol};
    use crate::formula::{parse_fo_sequent, parse_mm_sequent};
    use crate::mm::unfold_mm;

    fn nodes(dot: &str) -> usize {
        dot.lines().filter(|l| l.contains("[shape=") || l.contains("[label=\"v")).count()
    }

    fn edges(dot: &str) -> usize {
        dot.lines().filter(|l| l.contains(" -> ")).count()
    }

    #[test]
    fn mm_nodes_and_tentacles() {
        let ps = unfold_mm(&parse_mm_sequent("a /a b, b |- a").unwrap());
        let dot = mm_to_dot(&ps, &[]);
        assert_eq!(nodes(&dot), ps.vertices.len() + ps.links.len());
        assert_eq!(edges(&dot), 3 * ps.links.len());
        assert!(dot.starts_with("digraph") && dot.trim_end().ends_with('}'));
    }

    #[test]
    fn par_links_are_filled() {
        let ps = unfold_mm(&parse_mm_sequent("a |- b /a (a \\a b)").unwrap());
        let dot = mm_to_dot(&ps, &[]);
        assert_eq!(dot.matches("fillcolor=black").count(), 1);
        assert_eq!(dot.matches("arrowhead=normal").count(), 1);
    }

    #[test]
    fn fol_and_graph() {
        let ps = unfold_fol(&parse_fo_sequent("a -o exists x.b(x) |- exists y.(a -o b(y))").unwrap());
        let dot = fol_to_dot(&ps, &[]);
        assert_eq!(nodes(&dot), ps.occs.len() + ps.links.len());
        let g = to_contraction_graph(&ps);
        let gd = graph_to_dot(&g);
        assert_eq!(nodes(&gd), g.vertices.len());
        assert!(gd.contains("style=dashed"));
    }

    #[test]
    fn quotes_are_escaped() {
        assert_eq!(esc("a\"b\\c"), "a\\\"b\\\\c");
    }
}
