//! From a sentence to its readings: proof search, sequentialization and
//! lexical semantics.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fol::{prove_fol, FolOptions, FolProof};
use crate::formula::MMFormula;
use crate::grammar::{Grammar, LexFormula};
use crate::mm::{prove_mm, MmOptions, MmProof, ProveError};
use crate::nd::{
    curry_howard, deep_from_fol, deep_from_mm, deep_display, fo_display, mm_display,
    sequentialize_fol, sequentialize_mm, word_types, word_var, DeepNd, DisplayTree, NdError,
};
use crate::semantics::{
    normalize, print_hol, substitute_lexical, LambdaTerm, SemanticsError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Mm,
    Fol,
}

impl FromStr for Engine {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mm" => Ok(Engine::Mm),
            "fol" => Ok(Engine::Fol),
            other => Err(format!("unknown engine `{other}` (expected mm or fol)")),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Mm => "mm",
            Engine::Fol => "fol",
        })
    }
}

#[derive(Debug, Error)]
pub enum ReadingError {
    #[error(transparent)]
    Prove(#[from] ProveError),
    #[error(transparent)]
    Nd(#[from] NdError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// A proof from either engine.
#[derive(Debug, Clone)]
pub enum AnyProof {
    Mm(MmProof),
    Fol(FolProof),
}

impl AnyProof {
    pub fn entries(&self) -> &[usize] {
        match self {
            AnyProof::Mm(p) => &p.entries,
            AnyProof::Fol(p) => &p.entries,
        }
    }
}

/// One reading of a sentence.
#[derive(Debug, Clone)]
pub struct Reading {
    pub proof: AnyProof,
    /// Engine-specific natural deduction proof, rendered.
    pub nd: DisplayTree,
    pub deep: DeepNd,
    /// Derivational term over `z0, z1, ...`.
    pub term: LambdaTerm,
    /// Normal form after substituting the lexical meanings.
    pub semantics: LambdaTerm,
    pub hol: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    pub max_proofs: Option<usize>,
    pub rewrite_budget: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            max_proofs: None,
            rewrite_budget: MmOptions::default().rewrite_budget,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParseOutcome {
    pub readings: Vec<Reading>,
    pub budget_exhausted: bool,
}

/// Lexical meaning of the chosen entry of a word; words without a term
/// denote a constant named after the word.
pub fn lexical_term(g: &Grammar, word: &str, entry: usize) -> Result<LambdaTerm, SemanticsError> {
    let e = &g.lookup(word)[entry];
    match &e.term {
        Some(t) => Ok(t.clone()),
        None => Ok(LambdaTerm::constant(word, e.formula.semantic_type(&g.types)?)),
    }
}

/// Semantics of a deep structure under the chosen lexical entries.
pub fn semantics_of(
    g: &Grammar,
    words: &[&str],
    entries: &[usize],
    deep: &DeepNd,
) -> Result<(LambdaTerm, LambdaTerm), SemanticsError> {
    let term = curry_howard(deep, &g.types)?;
    let ctx = word_types(deep, &g.types)?;
    let lex = words
        .iter()
        .zip(entries)
        .enumerate()
        .map(|(i, (w, &e))| Ok((word_var(i), lexical_term(g, w, e)?)))
        .collect::<Result<Vec<_>, SemanticsError>>()?;
    let filled = substitute_lexical(&term, &lex, &ctx)?;
    Ok((term, normalize(&filled)))
}

fn owned(words: &[&str]) -> Vec<String> {
    words.iter().map(|w| w.to_string()).collect()
}

pub fn mm_reading(g: &Grammar, words: &[&str], proof: MmProof) -> Result<Reading, ReadingError> {
    let nd = sequentialize_mm(&proof, &g.rules)?;
    let deep = deep_from_mm(&nd);
    let (term, semantics) = semantics_of(g, words, &proof.entries, &deep)?;
    Ok(Reading {
        nd: mm_display(&nd, &proof.sequent.antecedent, &owned(words)),
        proof: AnyProof::Mm(proof),
        hol: print_hol(&semantics),
        deep,
        term,
        semantics,
    })
}

pub fn fol_reading(g: &Grammar, words: &[&str], proof: FolProof) -> Result<Reading, ReadingError> {
    let nd = sequentialize_fol(&proof)?;
    let deep = deep_from_fol(&nd);
    let (term, semantics) = semantics_of(g, words, &proof.entries, &deep)?;
    Ok(Reading {
        nd: fo_display(&nd, &owned(words)),
        proof: AnyProof::Fol(proof),
        hol: print_hol(&semantics),
        deep,
        term,
        semantics,
    })
}

/// Parses a sentence and computes every reading.
pub fn parse_sentence(
    g: &Grammar,
    words: &[&str],
    engine: Engine,
    goal: Option<&LexFormula>,
    opts: &ParseOptions,
) -> Result<ParseOutcome, ReadingError> {
    let mut out = ParseOutcome::default();
    match engine {
        Engine::Mm => {
            let goal: Option<MMFormula> = match goal {
                Some(LexFormula::Multimodal(m)) => Some(m.clone()),
                Some(other) => return Err(ProveError::BadGoal(other.to_string()).into()),
                None => None,
            };
            let mo = MmOptions {
                rewrite_budget: opts.rewrite_budget,
                max_proofs: opts.max_proofs,
                ..MmOptions::default()
            };
            let search = prove_mm(g, words, goal.as_ref(), &mo)?;
            out.budget_exhausted = search.budget_exhausted;
            for p in search.proofs {
                out.readings.push(mm_reading(g, words, p)?);
            }
        }
        Engine::Fol => {
            let fo = FolOptions {
                max_proofs: opts.max_proofs,
                ..FolOptions::default()
            };
            for p in prove_fol(g, words, goal, &fo)?.proofs {
                out.readings.push(fol_reading(g, words, p)?);
            }
        }
    }
    Ok(out)
}

/// Renders the deep structure of a reading.
pub fn deep_tree(r: &Reading, words: &[&str]) -> DisplayTree {
    deep_display(&r.deep, &owned(words))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;

    fn grammar() -> Grammar {
        parse_grammar(
            "atom np, n, s.\nmode a.\ngoal s.\n\
             lex Alyssa : np : alyssa.\n\
             lex ran : np \\a s : run.\n\
             lex student : n.\n",
        )
        .unwrap()
    }

    #[test]
    fn engines_by_name() {
        assert_eq!("fol".parse::<Engine>(), Ok(Engine::Fol));
        assert_eq!(Engine::Mm.to_string(), "mm");
        assert!("lp".parse::<Engine>().is_err());
    }

    #[test]
    fn words_without_terms_are_constants() {
        let g = grammar();
        assert_eq!(lexical_term(&g, "student", 0).unwrap().to_string(), "student");
    }

    #[test]
    fn both_engines_agree_on_a_simple_sentence() {
        let g = grammar();
        for engine in [Engine::Mm, Engine::Fol] {
            let out = parse_sentence(&g, &["Alyssa", "ran"], engine, None, &ParseOptions::default())
                .unwrap();
            assert_eq!(out.readings.len(), 1, "{engine}");
            let r = &out.readings[0];
            assert_eq!(r.hol, "run(alyssa)", "{engine}");
            assert_eq!(r.proof.entries(), [0, 0]);
            assert_eq!(deep_tree(r, &["Alyssa", "ran"]).size(), r.deep.size());
        }
    }

    #[test]
    fn no_reading_for_word_salad() {
        let g = grammar();
        let out = parse_sentence(&g, &["ran", "Alyssa"], Engine::Mm, None, &ParseOptions::default())
            .unwrap();
        assert!(out.readings.is_empty());
        assert!(!out.budget_exhausted);
    }
}
