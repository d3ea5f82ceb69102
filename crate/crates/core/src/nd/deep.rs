//! Deep structure: multiplicative intuitionistic linear logic proofs, the
//! common image of both engines, and their lambda terms.

use std::collections::HashMap;

use serde::Serialize;

use crate::formula::MillFormula;
use crate::semantics::{LambdaTerm, SemType, SemanticsError, TypeMap};

use super::fol::{FoNd, FoNdRule};
use super::mm::{MmNd, MmNdRule};
use crate::mm::Structure;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "rule", rename_all = "camelCase")]
pub enum DeepRule {
    Lex { word: usize },
    Hyp { hyp: usize },
    ImplE,
    ImplI { hyp: usize },
    TensorE { left: usize, right: usize },
    TensorI,
}

/// `ImplE` premisses are `[function, argument]`; `TensorE` premisses are
/// `[major, minor]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DeepNd {
    #[serde(flatten)]
    pub rule: DeepRule,
    pub formula: MillFormula,
    pub premisses: Vec<DeepNd>,
}

impl DeepNd {
    pub fn size(&self) -> usize {
        1 + self.premisses.iter().map(DeepNd::size).sum::<usize>()
    }

    fn replace_hyp(self, k: usize, by: &DeepNd) -> DeepNd {
        if self.rule == (DeepRule::Hyp { hyp: k }) {
            return by.clone();
        }
        DeepNd {
            premisses: self.premisses.into_iter().map(|p| p.replace_hyp(k, by)).collect(),
            ..self
        }
    }
}

/// Forgets modes, directions and structural steps.
pub fn deep_from_mm(nd: &MmNd) -> DeepNd {
    let formula = MillFormula::from(&nd.formula);
    let p: Vec<DeepNd> = nd.premisses.iter().map(deep_from_mm).collect();
    let rule = match &nd.rule {
        MmNdRule::Struct { .. } => return p.into_iter().next().expect("structural step has a premiss"),
        MmNdRule::Lex => match nd.antecedent {
            Structure::Word(word) => DeepRule::Lex { word },
            _ => unreachable!("lexical leaves are words"),
        },
        MmNdRule::Hyp => match nd.antecedent {
            Structure::Hyp(hyp) => DeepRule::Hyp { hyp },
            _ => unreachable!("hypothesis leaves are hypotheses"),
        },
        MmNdRule::OverE { .. } => DeepRule::ImplE,
        MmNdRule::UnderE { .. } => {
            let mut p = p;
            p.swap(0, 1);
            return DeepNd { rule: DeepRule::ImplE, formula, premisses: p };
        }
        MmNdRule::OverI { hyp, .. } | MmNdRule::UnderI { hyp, .. } => DeepRule::ImplI { hyp: *hyp },
        MmNdRule::ProdE { left, right, .. } => DeepRule::TensorE { left: *left, right: *right },
        MmNdRule::ProdI { .. } => DeepRule::TensorI,
    };
    DeepNd { rule, formula, premisses: p }
}

/// Erases first-order variables and quantifier rules. An existential
/// elimination becomes the substitution of its major premiss for the
/// withdrawn hypothesis.
pub fn deep_from_fol(nd: &FoNd) -> DeepNd {
    let formula = MillFormula::from(&nd.formula);
    let mut p: Vec<DeepNd> = nd.premisses.iter().map(deep_from_fol).collect();
    let rule = match &nd.rule {
        FoNdRule::ForallE { .. } | FoNdRule::ForallI { .. } | FoNdRule::ExistsI { .. } => {
            return p.pop().expect("quantifier step has a premiss")
        }
        FoNdRule::ExistsE { hyp, .. } => {
            let minor = p.pop().expect("minor premiss");
            let major = p.pop().expect("major premiss");
            return minor.replace_hyp(*hyp, &major);
        }
        FoNdRule::Lex { word } => DeepRule::Lex { word: *word },
        FoNdRule::Hyp { hyp } => DeepRule::Hyp { hyp: *hyp },
        FoNdRule::ImplE => DeepRule::ImplE,
        FoNdRule::ImplI { hyp } => DeepRule::ImplI { hyp: *hyp },
        FoNdRule::TensorE { left, right } => DeepRule::TensorE { left: *left, right: *right },
        FoNdRule::TensorI => DeepRule::TensorI,
    };
    DeepNd { rule, formula, premisses: p }
}

/// Name of the lambda variable for word `i`.
pub fn word_var(i: usize) -> String {
    format!("z{i}")
}

const HYP_NAMES: [&str; 5] = ["x", "y", "w", "v", "u"];

/// The derivational term: `z_i` for word `i`, and variables named in order
/// of their binding rule for withdrawn hypotheses.
pub fn curry_howard(nd: &DeepNd, types: &TypeMap) -> Result<LambdaTerm, SemanticsError> {
    let mut names = HashMap::new();
    term_of(nd, types, &mut names)
}

fn bind(names: &mut HashMap<usize, String>, k: usize) -> String {
    let n = names.len();
    let name = HYP_NAMES
        .get(n)
        .map_or_else(|| format!("x{}", n - HYP_NAMES.len() + 1), |s| s.to_string());
    names.insert(k, name.clone());
    name
}

fn term_of(
    nd: &DeepNd,
    types: &TypeMap,
    names: &mut HashMap<usize, String>,
) -> Result<LambdaTerm, SemanticsError> {
    let p = &nd.premisses;
    Ok(match (&nd.rule, p.as_slice()) {
        (DeepRule::Lex { word }, _) => LambdaTerm::var(word_var(*word)),
        (DeepRule::Hyp { hyp }, _) => LambdaTerm::var(
            names
                .get(hyp)
                .cloned()
                .ok_or_else(|| SemanticsError::UnboundVariable(format!("hypothesis {hyp}")))?,
        ),
        (DeepRule::ImplE, [f, a]) => LambdaTerm::app(term_of(f, types, names)?, term_of(a, types, names)?),
        (DeepRule::ImplI { hyp }, [b]) => {
            let MillFormula::Lolli(arg, _) = &nd.formula else {
                unreachable!("implication introduction concludes an implication")
            };
            let ty = types.of_mill(arg)?;
            let x = bind(names, *hyp);
            LambdaTerm::abs(x, ty, term_of(b, types, names)?)
        }
        (DeepRule::TensorI, [a, b]) => LambdaTerm::pair(term_of(a, types, names)?, term_of(b, types, names)?),
        (DeepRule::TensorE { left, right }, [major, minor]) => {
            let m = term_of(major, types, names)?;
            let l = bind(names, *left);
            let r = bind(names, *right);
            let body = term_of(minor, types, names)?;
            body.substitute(&HashMap::from([
                (l, LambdaTerm::Fst(Box::new(m.clone()))),
                (r, LambdaTerm::Snd(Box::new(m))),
            ]))
        }
        (rule, _) => unreachable!("malformed deep structure node {rule:?}"),
    })
}

/// Types of the free variables `z_i` of a derivational term.
pub fn word_types(nd: &DeepNd, types: &TypeMap) -> Result<HashMap<String, SemType>, SemanticsError> {
    let mut out = HashMap::new();
    collect_words(nd, types, &mut out)?;
    Ok(out)
}

fn collect_words(
    nd: &DeepNd,
    types: &TypeMap,
    out: &mut HashMap<String, SemType>,
) -> Result<(), SemanticsError> {
    if let DeepRule::Lex { word } = nd.rule {
        out.insert(word_var(word), types.of_mill(&nd.formula)?);
    }
    for p in &nd.premisses {
        collect_words(p, types, out)?;
    }
    Ok(())
}
