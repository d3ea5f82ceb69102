use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::formula::{FoFormula, Formula, MillFormula, ModeLabel};
use crate::syntax::{Cursor, ParseError};

use super::SemanticsError;

/// Simple types over Montague's atomic types `e` and `t`. `Pair` is only
/// produced for product formulas.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SemType {
    E,
    T,
    Arrow(Box<SemType>, Box<SemType>),
    Pair(Box<SemType>, Box<SemType>),
}

impl SemType {
    pub fn arrow(a: SemType, b: SemType) -> Self {
        SemType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn pair(a: SemType, b: SemType) -> Self {
        SemType::Pair(Box::new(a), Box::new(b))
    }

    /// `e -> t`
    pub fn property() -> Self {
        SemType::arrow(SemType::E, SemType::T)
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::E => f.write_str("e"),
            SemType::T => f.write_str("t"),
            SemType::Arrow(a, b) => {
                if matches!(**a, SemType::Arrow(..) | SemType::Pair(..)) {
                    write!(f, "({a})->{b}")
                } else {
                    write!(f, "{a}->{b}")
                }
            }
            SemType::Pair(a, b) => {
                let wrap = |t: &SemType| {
                    if matches!(t, SemType::E | SemType::T) {
                        t.to_string()
                    } else {
                        format!("({t})")
                    }
                };
                write!(f, "{}*{}", wrap(a), wrap(b))
            }
        }
    }
}

/// Parses `e`, `t`, `A->B` (right associative), `A*B` and parentheses.
pub fn parse_type(text: &str) -> Result<SemType, ParseError> {
    let mut cur = Cursor::new(text);
    let t = parse_type_at(&mut cur)?;
    cur.expect_end()?;
    Ok(t)
}

pub(crate) fn parse_type_at(cur: &mut Cursor) -> Result<SemType, ParseError> {
    let left = parse_type_factor(cur)?;
    if cur.eat("->") {
        return Ok(SemType::arrow(left, parse_type_at(cur)?));
    }
    Ok(left)
}

fn parse_type_factor(cur: &mut Cursor) -> Result<SemType, ParseError> {
    let left = parse_type_primary(cur)?;
    if cur.eat("*") {
        return Ok(SemType::pair(left, parse_type_primary(cur)?));
    }
    Ok(left)
}

fn parse_type_primary(cur: &mut Cursor) -> Result<SemType, ParseError> {
    if cur.eat("(") {
        let t = parse_type_at(cur)?;
        cur.expect(")")?;
        return Ok(t);
    }
    match cur.ident() {
        Some("e") => Ok(SemType::E),
        Some("t") => Ok(SemType::T),
        _ => Err(cur.error("expected a type (`e`, `t` or `(`)")),
    }
}

/// Atom-to-type table for the mapping from syntactic to semantic types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeMap(HashMap<String, SemType>);

impl Default for TypeMap {
    /// `np -> e`, `n -> e->t`, `s -> t`.
    fn default() -> Self {
        TypeMap(HashMap::from([
            ("np".to_string(), SemType::E),
            ("n".to_string(), SemType::property()),
            ("s".to_string(), SemType::T),
        ]))
    }
}

impl TypeMap {
    pub fn insert(&mut self, atom: impl Into<String>, ty: SemType) {
        self.0.insert(atom.into(), ty);
    }

    pub fn get(&self, atom: &str) -> Option<&SemType> {
        self.0.get(atom)
    }

    pub fn of_mill(&self, f: &MillFormula) -> Result<SemType, SemanticsError> {
        match f {
            MillFormula::Atom(p) => self
                .get(p)
                .cloned()
                .ok_or_else(|| SemanticsError::UnmappedAtom(p.clone())),
            MillFormula::Lolli(a, b) => Ok(SemType::arrow(self.of_mill(a)?, self.of_mill(b)?)),
            MillFormula::Tensor(a, b) => Ok(SemType::pair(self.of_mill(a)?, self.of_mill(b)?)),
        }
    }

    pub fn of_formula<M: ModeLabel>(&self, f: &Formula<M>) -> Result<SemType, SemanticsError> {
        self.of_mill(&f.into())
    }

    pub fn of_fo(&self, f: &FoFormula) -> Result<SemType, SemanticsError> {
        self.of_mill(&f.into())
    }
}

/// Semantic type under the default table.
pub fn semantic_type<M: ModeLabel>(f: &Formula<M>) -> Result<SemType, SemanticsError> {
    TypeMap::default().of_formula(f)
}
