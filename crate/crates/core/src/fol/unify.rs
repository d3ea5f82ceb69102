use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{FoFormula, FoTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("`{0}` and `{1}` have different predicates or arities")]
    Mismatch(String, String),
    #[error("cannot identify `{0}` with `{1}`")]
    Clash(FoTerm, FoTerm),
    #[error("unification is only defined on atoms")]
    NotAtomic,
}

/// An idempotent substitution of terms for (meta)variables. Bindings are kept
/// fully resolved, so applying the unifier once is enough.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Unifier {
    map: BTreeMap<String, FoTerm>,
}

impl Unifier {
    pub fn new() -> Self {
        Unifier::default()
    }

    pub fn get(&self, v: &str) -> Option<&FoTerm> {
        self.map.get(v)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&String, &FoTerm)> {
        self.map.iter()
    }

    pub fn resolve(&self, t: &FoTerm) -> FoTerm {
        match t {
            FoTerm::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
            c => c.clone(),
        }
    }

    pub fn apply(&self, f: &FoFormula) -> FoFormula {
        if self.map.is_empty() {
            return f.clone();
        }
        f.apply(&|v| self.map.get(v).cloned())
    }

    /// True when no bound variable occurs in the range.
    pub fn is_idempotent(&self) -> bool {
        self.map
            .values()
            .all(|t| t.as_var().is_none_or(|v| !self.map.contains_key(v)))
    }

    /// Adds `v := t`, keeping the map resolved.
    fn bind(&mut self, v: String, t: FoTerm) {
        for val in self.map.values_mut() {
            if val.as_var() == Some(v.as_str()) {
                *val = t.clone();
            }
        }
        self.map.insert(v, t);
    }

    /// Unifies two terms. Only variables accepted by `flexible` may be bound;
    /// everything else (eigenvariables, constants) is rigid.
    pub fn unify_terms(
        &mut self,
        a: &FoTerm,
        b: &FoTerm,
        flexible: &impl Fn(&str) -> bool,
    ) -> Result<(), UnifyError> {
        let (a, b) = (self.resolve(a), self.resolve(b));
        if a == b {
            return Ok(());
        }
        match (&a, &b) {
            (FoTerm::Var(v), _) if flexible(v) => self.bind(v.clone(), b),
            (_, FoTerm::Var(w)) if flexible(w) => self.bind(w.clone(), a),
            _ => return Err(UnifyError::Clash(a, b)),
        }
        Ok(())
    }

    /// Extends the unifier so that the two atoms become equal.
    pub fn unify_atoms(
        &self,
        f: &FoFormula,
        g: &FoFormula,
        flexible: &impl Fn(&str) -> bool,
    ) -> Result<Unifier, UnifyError> {
        let (FoFormula::Atom(p, xs), FoFormula::Atom(q, ys)) = (f, g) else {
            return Err(UnifyError::NotAtomic);
        };
        if p != q || xs.len() != ys.len() {
            return Err(UnifyError::Mismatch(f.to_string(), g.to_string()));
        }
        let mut u = self.clone();
        for (x, y) in xs.iter().zip(ys) {
            u.unify_terms(x, y, flexible)?;
        }
        Ok(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_foll;

    fn meta(v: &str) -> bool {
        v.starts_with('_')
    }

    fn atom(p: &str, args: &[FoTerm]) -> FoFormula {
        FoFormula::atom(p, args.to_vec())
    }

    #[test]
    fn binds_metavariable_to_position() {
        let u = Unifier::new()
            .unify_atoms(
                &atom("np", &[FoTerm::var("z"), 3.into()]),
                &atom("np", &[2.into(), 3.into()]),
                &|v| v == "z",
            )
            .unwrap();
        assert_eq!(u.get("z"), Some(&FoTerm::Const(2)));
    }

    #[test]
    fn identical_atoms_need_nothing() {
        let a = parse_foll("np(0,1)").unwrap();
        assert!(Unifier::new().unify_atoms(&a, &a, &meta).unwrap().is_empty());
    }

    #[test]
    fn rigid_terms_clash() {
        let a = parse_foll("np(0,1)").unwrap();
        let b = parse_foll("np(0,2)").unwrap();
        assert!(matches!(
            Unifier::new().unify_atoms(&a, &b, &meta),
            Err(UnifyError::Clash(..))
        ));
        let c = parse_foll("s(0,1)").unwrap();
        assert!(matches!(
            Unifier::new().unify_atoms(&a, &c, &meta),
            Err(UnifyError::Mismatch(..))
        ));
        // x is rigid here
        let x = atom("b", &[FoTerm::var("x")]);
        let y = atom("b", &[FoTerm::var("y")]);
        assert!(Unifier::new().unify_atoms(&x, &y, &|_| false).is_err());
    }

    #[test]
    fn chains_stay_resolved() {
        let mut u = Unifier::new();
        u.unify_terms(&FoTerm::var("_a"), &FoTerm::var("_b"), &meta).unwrap();
        u.unify_terms(&FoTerm::var("_b"), &FoTerm::Const(4), &meta).unwrap();
        assert!(u.is_idempotent());
        assert_eq!(u.resolve(&FoTerm::var("_a")), FoTerm::Const(4));
        assert!(u.unify_terms(&FoTerm::var("_a"), &FoTerm::Const(5), &meta).is_err());
    }
}
