//! Propositional multiplicative intuitionistic linear logic, the target of the
//! forgetful mappings from both categorial and first-order formulas.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::categorial::{Formula, ModeLabel};
use super::first_order::FoFormula;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MillFormula {
    Atom(String),
    Lolli(Box<MillFormula>, Box<MillFormula>),
    Tensor(Box<MillFormula>, Box<MillFormula>),
}

impl MillFormula {
    pub fn atom(p: impl Into<String>) -> Self {
        MillFormula::Atom(p.into())
    }

    pub fn lolli(a: MillFormula, b: MillFormula) -> Self {
        MillFormula::Lolli(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: MillFormula, b: MillFormula) -> Self {
        MillFormula::Tensor(Box::new(a), Box::new(b))
    }
}

impl<M: ModeLabel> From<&Formula<M>> for MillFormula {
    /// `A/B` and `B\A` both become `B -o A`; `A*B` becomes `A (x) B`.
    fn from(f: &Formula<M>) -> Self {
        match f {
            Formula::Atom(p) => MillFormula::atom(p.clone()),
            Formula::Over(_, a, b) | Formula::Under(_, b, a) => {
                MillFormula::lolli(b.as_ref().into(), a.as_ref().into())
            }
            Formula::Prod(_, a, b) => MillFormula::tensor(a.as_ref().into(), b.as_ref().into()),
        }
    }
}

impl From<&FoFormula> for MillFormula {
    /// Drops quantifiers and predicate arguments.
    fn from(f: &FoFormula) -> Self {
        match f {
            FoFormula::Atom(p, _) => MillFormula::atom(p.clone()),
            FoFormula::Impl(a, b) => MillFormula::lolli(a.as_ref().into(), b.as_ref().into()),
            FoFormula::Tensor(a, b) => MillFormula::tensor(a.as_ref().into(), b.as_ref().into()),
            FoFormula::Forall(_, body) | FoFormula::Exists(_, body) => body.as_ref().into(),
        }
    }
}

impl fmt::Display for MillFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(m: &MillFormula, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
            let (a, sym, b) = match m {
                MillFormula::Atom(p) => return f.write_str(p),
                MillFormula::Lolli(a, b) => (a, "-o", b),
                MillFormula::Tensor(a, b) => (a, "*", b),
            };
            if nested {
                f.write_str("(")?;
            }
            go(a, f, true)?;
            write!(f, " {sym} ")?;
            go(b, f, true)?;
            if nested {
                f.write_str(")")?;
            }
            Ok(())
        }
        go(self, f, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_foll, parse_lambek};

    #[test]
    fn both_slashes_become_implication() {
        let f = parse_lambek("(np\\s)/np").unwrap();
        assert_eq!(MillFormula::from(&f).to_string(), "np -o (np -o s)");
    }

    #[test]
    fn quantifiers_and_arguments_are_erased() {
        let f = parse_foll("forall z.(np(z,3) -o s(z,4))").unwrap();
        assert_eq!(MillFormula::from(&f).to_string(), "np -o s");
    }
}
