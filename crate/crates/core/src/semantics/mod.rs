//! Syntax-semantics interface: semantic types, lambda terms, normalization.

mod hol;
mod infer;
mod normal;
mod term;
mod types;

use std::collections::HashMap;

use thiserror::Error;

use crate::syntax::ParseError;

pub use hol::print_hol;
pub use infer::{logical_constant, type_of};
pub use normal::{alpha_eq, is_beta_normal, normalize, rename_canonical};
pub use term::LambdaTerm;
pub use types::{parse_type, semantic_type, SemType, TypeMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },
    #[error("no semantic type for atom `{0}`")]
    UnmappedAtom(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
}

/// Parses and type-checks a lambda term in the lexicon syntax
/// (`\x.body`, `\x:TYPE.body`, left-associative application).
pub fn parse_lambda(text: &str, expected: Option<&SemType>) -> Result<LambdaTerm, SemanticsError> {
    let raw = term::parse_raw(text)?;
    infer::check_raw(&raw, expected)
}

/// Substitutes lexical meanings for free variables, checking that each
/// replacement has the variable's type in `ctx`.
pub fn substitute_lexical(
    t: &LambdaTerm,
    entries: &[(String, LambdaTerm)],
    ctx: &HashMap<String, SemType>,
) -> Result<LambdaTerm, SemanticsError> {
    let empty = HashMap::new();
    for (z, term) in entries {
        let want = ctx.get(z).ok_or_else(|| SemanticsError::UnboundVariable(z.clone()))?;
        let have = type_of(term, &empty)?;
        if &have != want {
            return Err(SemanticsError::TypeMismatch {
                expected: want.to_string(),
                found: have.to_string(),
            });
        }
    }
    let map: HashMap<String, LambdaTerm> = entries.iter().cloned().collect();
    Ok(t.substitute(&map))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_checks_types() {
        let z0 = LambdaTerm::var("z0");
        let ctx = HashMap::from([("z0".to_string(), SemType::E)]);
        let good = parse_lambda("alyssa", Some(&SemType::E)).unwrap();
        assert_eq!(
            substitute_lexical(&z0, &[("z0".into(), good.clone())], &ctx).unwrap(),
            good
        );
        let bad = parse_lambda("ran", Some(&SemType::property())).unwrap();
        let err = substitute_lexical(&z0, &[("z0".into(), bad)], &ctx).unwrap_err();
        assert_eq!(
            err,
            SemanticsError::TypeMismatch { expected: "e".into(), found: "e->t".into() }
        );
    }

    #[test]
    fn no_free_variables_means_identity() {
        let t = parse_lambda("(f a)", None).unwrap();
        assert_eq!(substitute_lexical(&t, &[], &HashMap::new()).unwrap(), t);
    }
}
