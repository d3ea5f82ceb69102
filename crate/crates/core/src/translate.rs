//! Translation of Lambek formulas into first-order linear logic, with string
//! positions as first-order terms.

use thiserror::Error;

use crate::formula::{FoFormula, FoSequent, FoTerm, Fresh, LambekFormula};
use crate::grammar::LexFormula;

/// `translate(f, x, y)` with bound variables drawn from a fresh supply.
pub fn translate(f: &LambekFormula, x: &FoTerm, y: &FoTerm) -> FoFormula {
    translate_with(f, x, y, &mut Fresh::new())
}

pub fn translate_with(f: &LambekFormula, x: &FoTerm, y: &FoTerm, fresh: &mut Fresh) -> FoFormula {
    match f {
        LambekFormula::Atom(p) => FoFormula::atom(p.clone(), vec![x.clone(), y.clone()]),
        LambekFormula::Over(_, a, b) => {
            let z = fresh.var();
            let zt = FoTerm::var(&z);
            let b = translate_with(b, y, &zt, fresh);
            let a = translate_with(a, x, &zt, fresh);
            FoFormula::forall(z, FoFormula::implies(b, a))
        }
        LambekFormula::Under(_, b, a) => {
            let w = fresh.var();
            let wt = FoTerm::var(&w);
            let b = translate_with(b, &wt, x, fresh);
            let a = translate_with(a, &wt, y, fresh);
            FoFormula::forall(w, FoFormula::implies(b, a))
        }
        LambekFormula::Prod(_, a, b) => {
            let m = fresh.var();
            let mt = FoTerm::var(&m);
            let a = translate_with(a, x, &mt, fresh);
            let b = translate_with(b, &mt, y, fresh);
            FoFormula::exists(m, FoFormula::tensor(a, b))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("entry {index} spans ({left},{right}) but should span ({expected},{})", expected + 1)]
    Position {
        index: usize,
        left: u32,
        right: u32,
        expected: u32,
    },
}

/// A lexical formula placed at a string span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionedEntry {
    pub formula: LexFormula,
    pub left: u32,
    pub right: u32,
}

impl PositionedEntry {
    /// Places the `i`-th word (0-based) at `(i, i+1)`.
    pub fn at_word(formula: LexFormula, i: usize) -> Self {
        PositionedEntry {
            formula,
            left: i as u32,
            right: i as u32 + 1,
        }
    }

    fn translate(&self, fresh: &mut Fresh) -> FoFormula {
        match self.formula.at_position(self.left, self.right) {
            LexFormula::FirstOrder(f) => f,
            other => translate_with(
                &other.to_lambek().expect("categorial formula"),
                &FoTerm::Const(self.left),
                &FoTerm::Const(self.right),
                fresh,
            ),
        }
    }
}

/// Builds `‖A1‖^{0,1}, ..., ‖An‖^{n-1,n} |- ‖C‖^{0,n}`. First-order entries
/// are used as given, with their position placeholders instantiated.
pub fn translate_sequent(
    entries: &[PositionedEntry],
    goal: &LambekFormula,
) -> Result<FoSequent, TranslateError> {
    for (i, e) in entries.iter().enumerate() {
        let expected = i as u32;
        if e.left != expected || e.right != expected + 1 {
            return Err(TranslateError::Position {
                index: i,
                left: e.left,
                right: e.right,
                expected,
            });
        }
    }
    let mut fresh = Fresh::new();
    let antecedent = entries.iter().map(|e| e.translate(&mut fresh)).collect();
    let n = entries.len() as u32;
    let succedent = translate_with(goal, &FoTerm::Const(0), &FoTerm::Const(n), &mut fresh);
    Ok(FoSequent {
        antecedent,
        succedent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_foll, parse_lambek};

    fn tr(f: &str, x: u32, y: u32) -> FoFormula {
        translate(&parse_lambek(f).unwrap(), &x.into(), &y.into())
    }

    #[test]
    fn atoms_take_the_span() {
        assert_eq!(tr("np", 0, 1), parse_foll("np(0,1)").unwrap());
    }

    #[test]
    fn intransitive_verb() {
        let f = tr("np\\s", 3, 4);
        assert!(f.alpha_eq(&parse_foll("forall z.(np(z,3) -o s(z,4))").unwrap()));
    }

    #[test]
    fn sentential_complement_verb() {
        let f = tr("(np\\s)/s", 1, 2);
        let expected =
            parse_foll("forall x2.(s(2,x2) -o forall x1.(np(x1,1) -o s(x1,x2)))").unwrap();
        assert!(f.alpha_eq(&expected), "{f}");
    }

    #[test]
    fn product_is_existential() {
        let f = tr("a*b", 0, 2);
        assert!(f.alpha_eq(&parse_foll("exists y.(a(0,y) * b(y,2))").unwrap()));
    }

    #[test]
    fn sequent_positions() {
        let e = |s: &str, i| PositionedEntry::at_word(LexFormula::Lambek(parse_lambek(s).unwrap()), i);
        let seq = translate_sequent(&[e("np", 0)], &parse_lambek("np").unwrap()).unwrap();
        assert_eq!(seq.to_string(), "np(0,1) |- np(0,1)");
        let mut bad = e("np", 0);
        bad.left = 1;
        assert!(translate_sequent(&[bad], &parse_lambek("np").unwrap()).is_err());
    }
}
