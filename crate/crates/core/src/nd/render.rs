//! Plain-text and LaTeX rendering of natural deduction proofs.

use std::collections::HashMap;

use crate::formula::{FoFormula, FoTerm, MMFormula, Mode, ModeLabel, Formula, MillFormula};
use crate::mm::Structure;

use super::deep::{DeepNd, DeepRule};
use super::fol::{FoNd, FoNdRule};
use super::mm::{MmNd, MmNdRule};

/// A proof tree with every sequent and rule label already rendered in both
/// notations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplayTree {
    pub antecedent: (String, String),
    pub formula: (String, String),
    pub rule: Option<(String, String)>,
    pub premisses: Vec<DisplayTree>,
}

impl DisplayTree {
    /// One sequent per line, conclusion first, premisses indented below it.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(0, &mut out);
        out
    }

    fn write_text(&self, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("{} |- {}", self.antecedent.0, self.formula.0));
        if let Some((r, _)) = &self.rule {
            out.push_str(&format!("  [{r}]"));
        }
        out.push('\n');
        for p in &self.premisses {
            p.write_text(depth + 1, out);
        }
    }

    /// A `proof.sty` `\infer` term.
    pub fn to_latex(&self) -> String {
        let sequent = format!("{} \\vdash {}", self.antecedent.1, self.formula.1);
        match &self.rule {
            None => sequent,
            Some((_, r)) => {
                let ps: Vec<String> = self.premisses.iter().map(DisplayTree::to_latex).collect();
                format!("\\infer[{r}]{{{sequent}}}{{{}}}", ps.join(" & "))
            }
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premisses.iter().map(DisplayTree::size).sum::<usize>()
    }
}

fn tex_ident(s: &str) -> String {
    s.replace('_', "\\_")
}

fn tex_word(s: &str) -> String {
    format!("\\textit{{{}}}", tex_ident(s))
}

pub fn mm_formula_tex<M: ModeLabel>(f: &Formula<M>) -> String {
    fn go<M: ModeLabel>(f: &Formula<M>, nested: bool) -> String {
        let mode = |m: &M| {
            let s = m.suffix();
            if s.is_empty() { String::new() } else { format!("_{{{}}}", tex_ident(s)) }
        };
        let bin = |op: &str, m: &M, a: &Formula<M>, b: &Formula<M>| {
            let s = format!("{} {op}{} {}", go(a, true), mode(m), go(b, true));
            if nested { format!("({s})") } else { s }
        };
        match f {
            Formula::Atom(p) => tex_ident(p),
            Formula::Over(m, a, b) => bin("/", m, a, b),
            Formula::Under(m, a, b) => bin("\\backslash", m, a, b),
            Formula::Prod(m, a, b) => bin("\\bullet", m, a, b),
        }
    }
    go(f, false)
}

fn term_tex(t: &FoTerm) -> String {
    tex_ident(&t.to_string())
}

pub fn fo_formula_tex(f: &FoFormula) -> String {
    fn go(f: &FoFormula, nested: bool) -> String {
        let wrap = |s: String| if nested { format!("({s})") } else { s };
        match f {
            FoFormula::Atom(p, args) => {
                if args.is_empty() {
                    tex_ident(p)
                } else {
                    let a: Vec<String> = args.iter().map(term_tex).collect();
                    format!("{}({})", tex_ident(p), a.join(","))
                }
            }
            FoFormula::Impl(a, b) => wrap(format!("{} \\multimap {}", go(a, true), go(b, true))),
            FoFormula::Tensor(a, b) => wrap(format!("{} \\otimes {}", go(a, true), go(b, true))),
            FoFormula::Forall(x, b) => wrap(format!("\\forall {}. {}", tex_ident(x), go(b, true))),
            FoFormula::Exists(x, b) => wrap(format!("\\exists {}. {}", tex_ident(x), go(b, true))),
        }
    }
    go(f, false)
}

pub fn mill_formula_tex(f: &MillFormula) -> String {
    fn go(f: &MillFormula, nested: bool) -> String {
        let wrap = |s: String| if nested { format!("({s})") } else { s };
        match f {
            MillFormula::Atom(p) => tex_ident(p),
            MillFormula::Lolli(a, b) => wrap(format!("{} \\multimap {}", go(a, true), go(b, true))),
            MillFormula::Tensor(a, b) => wrap(format!("{} \\otimes {}", go(a, true), go(b, true))),
        }
    }
    go(f, false)
}

/// Word labels for the lexical leaves: the words themselves when known,
/// otherwise the antecedent formulas.
fn leaf_label(words: &[String], i: usize, fallback: impl FnOnce() -> (String, String)) -> (String, String) {
    match words.get(i) {
        Some(w) => (w.clone(), tex_word(w)),
        None => fallback(),
    }
}

fn hyp_label(k: usize, f: (String, String)) -> (String, String) {
    (format!("[{}]^{k}", f.0), format!("[{}]^{{{k}}}", f.1))
}

pub fn mm_display(nd: &MmNd, sequent_antecedent: &[MMFormula], words: &[String]) -> DisplayTree {
    let hyps = nd.hypotheses();
    mm_tree(nd, sequent_antecedent, words, &hyps)
}

fn structure_labels(
    s: &Structure,
    leaf: &impl Fn(&Structure) -> (String, String),
) -> (String, String) {
    fn go(
        s: &Structure,
        leaf: &impl Fn(&Structure) -> (String, String),
        nested: bool,
    ) -> (String, String) {
        match s {
            Structure::Node(m, l, r) => {
                let (l, r) = (go(l, leaf, true), go(r, leaf, true));
                let text = format!("{} o{m} {}", l.0, r.0);
                let tex = format!("{} \\circ_{{{}}} {}", l.1, tex_ident(m.as_str()), r.1);
                if nested {
                    (format!("({text})"), format!("({tex})"))
                } else {
                    (text, tex)
                }
            }
            other => leaf(other),
        }
    }
    go(s, leaf, false)
}

fn mm_tree(
    nd: &MmNd,
    ante: &[MMFormula],
    words: &[String],
    hyps: &HashMap<usize, MMFormula>,
) -> DisplayTree {
    let f = |f: &MMFormula| (f.to_string(), mm_formula_tex(f));
    let leaf = |s: &Structure| match s {
        Structure::Word(i) => leaf_label(words, *i, || ante.get(*i).map(f).unwrap_or_default()),
        Structure::Hyp(k) => hyp_label(*k, hyps.get(k).map(f).unwrap_or_default()),
        Structure::Node(..) => unreachable!("leaf"),
    };
    let m = |mode: &Mode| mode.to_string();
    let rule = match &nd.rule {
        MmNdRule::Lex | MmNdRule::Hyp => None,
        MmNdRule::OverE { mode } => Some((format!("/{}E", m(mode)), format!("/_{{{}}}E", m(mode)))),
        MmNdRule::UnderE { mode } => {
            Some((format!("\\{}E", m(mode)), format!("\\backslash_{{{}}}E", m(mode))))
        }
        MmNdRule::OverI { mode, hyp } => Some((
            format!("/{}I^{hyp}", m(mode)),
            format!("/_{{{}}}I^{{{hyp}}}", m(mode)),
        )),
        MmNdRule::UnderI { mode, hyp } => Some((
            format!("\\{}I^{hyp}", m(mode)),
            format!("\\backslash_{{{}}}I^{{{hyp}}}", m(mode)),
        )),
        MmNdRule::ProdE { mode, left, right } => Some((
            format!("*{}E^{left},{right}", m(mode)),
            format!("\\bullet_{{{}}}E^{{{left},{right}}}", m(mode)),
        )),
        MmNdRule::ProdI { mode } => {
            Some((format!("*{}I", m(mode)), format!("\\bullet_{{{}}}I", m(mode))))
        }
        MmNdRule::Struct { name } => Some((name.clone(), format!("\\mathit{{{}}}", tex_ident(name)))),
    };
    DisplayTree {
        antecedent: structure_labels(&nd.antecedent, &leaf),
        formula: f(&nd.formula),
        rule,
        premisses: nd.premisses.iter().map(|p| mm_tree(p, ante, words, hyps)).collect(),
    }
}

fn open_labels(open: &[(String, String)]) -> (String, String) {
    let text: Vec<&str> = open.iter().map(|l| l.0.as_str()).collect();
    let tex: Vec<&str> = open.iter().map(|l| l.1.as_str()).collect();
    (text.join(", "), tex.join(", "))
}

pub fn fo_display(nd: &FoNd, words: &[String]) -> DisplayTree {
    let f = |f: &FoFormula| (f.to_string(), fo_formula_tex(f));
    let mut hyps = nd.open_hypotheses();
    hyps.sort_by_key(|(r, _)| match r {
        FoNdRule::Lex { word } => (0, *word),
        FoNdRule::Hyp { hyp } => (1, *hyp),
        _ => (2, 0),
    });
    let open: Vec<(String, String)> = hyps
        .into_iter()
        .map(|(r, formula)| match r {
            FoNdRule::Lex { word } => leaf_label(words, word, || f(&formula)),
            FoNdRule::Hyp { hyp } => hyp_label(hyp, f(&formula)),
            _ => unreachable!("open leaves"),
        })
        .collect();
    let rule = match &nd.rule {
        FoNdRule::Lex { .. } | FoNdRule::Hyp { .. } => None,
        FoNdRule::ImplE => Some(("-oE".into(), "\\multimap E".into())),
        FoNdRule::ImplI { hyp } => Some((format!("-oI^{hyp}"), format!("\\multimap I^{{{hyp}}}"))),
        FoNdRule::TensorE { left, right } => Some((
            format!("*E^{left},{right}"),
            format!("\\otimes E^{{{left},{right}}}"),
        )),
        FoNdRule::TensorI => Some(("*I".into(), "\\otimes I".into())),
        FoNdRule::ForallE { term } => Some((format!("forallE {term}"), format!("\\forall E\\ {}", term_tex(term)))),
        FoNdRule::ForallI { var } => Some((format!("forallI {var}"), format!("\\forall I\\ {}", tex_ident(var)))),
        FoNdRule::ExistsE { hyp, var } => Some((
            format!("existsE^{hyp} {var}"),
            format!("\\exists E^{{{hyp}}}\\ {}", tex_ident(var)),
        )),
        FoNdRule::ExistsI { term } => Some((format!("existsI {term}"), format!("\\exists I\\ {}", term_tex(term)))),
    };
    DisplayTree {
        antecedent: open_labels(&open),
        formula: f(&nd.formula),
        rule,
        premisses: nd.premisses.iter().map(|p| fo_display(p, words)).collect(),
    }
}

pub fn deep_display(nd: &DeepNd, words: &[String]) -> DisplayTree {
    let f = |f: &MillFormula| (f.to_string(), mill_formula_tex(f));
    let mut open = Vec::new();
    deep_open(nd, &mut open);
    let open: Vec<(String, String)> = open
        .into_iter()
        .map(|(r, formula)| match r {
            DeepRule::Lex { word } => leaf_label(words, word, || f(&formula)),
            DeepRule::Hyp { hyp } => hyp_label(hyp, f(&formula)),
            _ => unreachable!("open leaves"),
        })
        .collect();
    let rule = match &nd.rule {
        DeepRule::Lex { .. } | DeepRule::Hyp { .. } => None,
        DeepRule::ImplE => Some(("-oE".into(), "\\multimap E".into())),
        DeepRule::ImplI { hyp } => Some((format!("-oI^{hyp}"), format!("\\multimap I^{{{hyp}}}"))),
        DeepRule::TensorE { left, right } => Some((
            format!("*E^{left},{right}"),
            format!("\\otimes E^{{{left},{right}}}"),
        )),
        DeepRule::TensorI => Some(("*I".into(), "\\otimes I".into())),
    };
    DisplayTree {
        antecedent: open_labels(&open),
        formula: f(&nd.formula),
        rule,
        premisses: nd.premisses.iter().map(|p| deep_display(p, words)).collect(),
    }
}

fn deep_open(nd: &DeepNd, out: &mut Vec<(DeepRule, MillFormula)>) {
    match &nd.rule {
        DeepRule::Lex { .. } | DeepRule::Hyp { .. } => {
            out.push((nd.rule.clone(), nd.formula.clone()));
            return;
        }
        _ => {}
    }
    let mut inner = Vec::new();
    for p in &nd.premisses {
        deep_open(p, &mut inner);
    }
    let closed: Vec<usize> = match &nd.rule {
        DeepRule::ImplI { hyp } => vec![*hyp],
        DeepRule::TensorE { left, right } => vec![*left, *right],
        _ => Vec::new(),
    };
    out.extend(
        inner
            .into_iter()
            .filter(|(r, _)| !matches!(r, DeepRule::Hyp { hyp } if closed.contains(hyp))),
    );
}
