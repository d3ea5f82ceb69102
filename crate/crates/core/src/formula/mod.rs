//! Formula syntax for the three dialects.

mod categorial;
mod first_order;
mod mill;

pub use categorial::{
    parse_lambek, parse_mm, Formula, LambekFormula, MMFormula, Mode, ModeLabel,
};
pub use first_order::{
    parse_fo_sequent, parse_foll, FoFormula, FoSequent, FoTerm, Fresh, Polarity,
};
pub(crate) use first_order::{shift, split_turnstile};
pub use mill::MillFormula;

use crate::syntax::{split_top_level, ParseError};

/// Concrete syntax selector for [`parse_formula`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dialect {
    Lambek,
    Multimodal,
    FirstOrder,
}

/// A formula of any dialect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyFormula {
    Lambek(LambekFormula),
    Multimodal(MMFormula),
    FirstOrder(FoFormula),
}

impl std::fmt::Display for AnyFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnyFormula::Lambek(x) => x.fmt(f),
            AnyFormula::Multimodal(x) => x.fmt(f),
            AnyFormula::FirstOrder(x) => x.fmt(f),
        }
    }
}

pub fn parse_formula(text: &str, dialect: Dialect) -> Result<AnyFormula, ParseError> {
    Ok(match dialect {
        Dialect::Lambek => AnyFormula::Lambek(parse_lambek(text)?),
        Dialect::Multimodal => AnyFormula::Multimodal(parse_mm(text)?),
        Dialect::FirstOrder => AnyFormula::FirstOrder(parse_foll(text)?),
    })
}

/// A categorial sequent `A1, ..., An |- C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent<M> {
    pub antecedent: Vec<Formula<M>>,
    pub succedent: Formula<M>,
}

impl<M: ModeLabel> std::fmt::Display for Sequent<M> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, a) in self.antecedent.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, " |- {}", self.succedent)
    }
}

pub fn parse_mm_sequent(text: &str) -> Result<Sequent<Mode>, ParseError> {
    parse_sequent_with(text, parse_mm)
}

pub fn parse_lambek_sequent(text: &str) -> Result<Sequent<()>, ParseError> {
    parse_sequent_with(text, parse_lambek)
}

fn parse_sequent_with<M>(
    text: &str,
    parse: impl Fn(&str) -> Result<Formula<M>, ParseError>,
) -> Result<Sequent<M>, ParseError> {
    let (lhs, rhs) = split_turnstile(text)?;
    let mut antecedent = Vec::new();
    for (off, part) in split_top_level(lhs, ',') {
        antecedent.push(parse(part).map_err(|e| shift(e, off))?);
    }
    let succedent = parse(rhs).map_err(|e| shift(e, lhs.len() + 2))?;
    Ok(Sequent {
        antecedent,
        succedent,
    })
}
