//! Type inference for lexical terms and type checking of typed terms.

use std::collections::HashMap;

use super::term::{RawTerm, LambdaTerm};
use super::types::SemType;
use super::SemanticsError;

/// Types of the logical constants.
pub fn logical_constant(name: &str) -> Option<SemType> {
    let t = SemType::T;
    match name {
        "forall" | "exists" => Some(SemType::arrow(SemType::property(), t)),
        "and" | "or" | "implies" => Some(SemType::arrow(t.clone(), SemType::arrow(t.clone(), t))),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Ty {
    Meta(usize),
    E,
    T,
    Arrow(Box<Ty>, Box<Ty>),
    Pair(Box<Ty>, Box<Ty>),
}

impl From<&SemType> for Ty {
    fn from(t: &SemType) -> Self {
        match t {
            SemType::E => Ty::E,
            SemType::T => Ty::T,
            SemType::Arrow(a, b) => Ty::Arrow(Box::new(a.as_ref().into()), Box::new(b.as_ref().into())),
            SemType::Pair(a, b) => Ty::Pair(Box::new(a.as_ref().into()), Box::new(b.as_ref().into())),
        }
    }
}

#[derive(Default)]
struct Infer {
    metas: Vec<Option<Ty>>,
    consts: HashMap<String, Ty>,
}

impl Infer {
    fn fresh(&mut self) -> Ty {
        self.metas.push(None);
        Ty::Meta(self.metas.len() - 1)
    }

    fn resolve(&self, t: &Ty) -> Ty {
        match t {
            Ty::Meta(m) => match &self.metas[*m] {
                Some(u) => self.resolve(u),
                None => t.clone(),
            },
            Ty::Arrow(a, b) => Ty::Arrow(Box::new(self.resolve(a)), Box::new(self.resolve(b))),
            Ty::Pair(a, b) => Ty::Pair(Box::new(self.resolve(a)), Box::new(self.resolve(b))),
            _ => t.clone(),
        }
    }

    fn occurs(&self, m: usize, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Meta(n) => n == m,
            Ty::Arrow(a, b) | Ty::Pair(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
            _ => false,
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> Result<(), SemanticsError> {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            (Ty::Meta(m), Ty::Meta(n)) if m == n => Ok(()),
            (Ty::Meta(m), other) | (other, Ty::Meta(m)) => {
                if self.occurs(*m, other) {
                    return Err(self.mismatch(&a, &b));
                }
                self.metas[*m] = Some(other.clone());
                Ok(())
            }
            (Ty::E, Ty::E) | (Ty::T, Ty::T) => Ok(()),
            (Ty::Arrow(a1, a2), Ty::Arrow(b1, b2)) | (Ty::Pair(a1, a2), Ty::Pair(b1, b2)) => {
                self.unify(a1, b1)?;
                self.unify(a2, b2)
            }
            _ => Err(self.mismatch(&a, &b)),
        }
    }

    fn mismatch(&self, a: &Ty, b: &Ty) -> SemanticsError {
        SemanticsError::TypeMismatch {
            expected: self.ground(a).to_string(),
            found: self.ground(b).to_string(),
        }
    }

    /// Unresolved metavariables default to `e`.
    fn ground(&self, t: &Ty) -> SemType {
        match self.resolve(t) {
            Ty::Meta(_) | Ty::E => SemType::E,
            Ty::T => SemType::T,
            Ty::Arrow(a, b) => SemType::arrow(self.ground(&a), self.ground(&b)),
            Ty::Pair(a, b) => SemType::pair(self.ground(&a), self.ground(&b)),
        }
    }

    fn infer(&mut self, t: &RawTerm, env: &mut Vec<(String, Ty)>) -> Result<(Ty, Elab), SemanticsError> {
        match t {
            RawTerm::Name(x) => {
                if let Some((_, ty)) = env.iter().rev().find(|(y, _)| y == x) {
                    return Ok((ty.clone(), Elab::Var(x.clone())));
                }
                if let Some(ty) = self.consts.get(x) {
                    return Ok((ty.clone(), Elab::Const(x.clone())));
                }
                let ty = match logical_constant(x) {
                    Some(st) => Ty::from(&st),
                    None => self.fresh(),
                };
                self.consts.insert(x.clone(), ty.clone());
                Ok((ty, Elab::Const(x.clone())))
            }
            RawTerm::App(f, a) => {
                let (tf, ef) = self.infer(f, env)?;
                let (ta, ea) = self.infer(a, env)?;
                let r = self.fresh();
                self.unify(&tf, &Ty::Arrow(Box::new(ta), Box::new(r.clone())))?;
                Ok((r, Elab::App(Box::new(ef), Box::new(ea))))
            }
            RawTerm::Abs(x, ann, body) => {
                let tx = match ann {
                    Some(st) => Ty::from(st),
                    None => self.fresh(),
                };
                env.push((x.clone(), tx.clone()));
                let res = self.infer(body, env);
                env.pop();
                let (tb, eb) = res?;
                Ok((
                    Ty::Arrow(Box::new(tx.clone()), Box::new(tb)),
                    Elab::Abs(x.clone(), tx, Box::new(eb)),
                ))
            }
            RawTerm::Pair(a, b) => {
                let (ta, ea) = self.infer(a, env)?;
                let (tb, eb) = self.infer(b, env)?;
                Ok((
                    Ty::Pair(Box::new(ta), Box::new(tb)),
                    Elab::Pair(Box::new(ea), Box::new(eb)),
                ))
            }
            RawTerm::Fst(p) | RawTerm::Snd(p) => {
                let (tp, ep) = self.infer(p, env)?;
                let (l, r) = (self.fresh(), self.fresh());
                self.unify(&tp, &Ty::Pair(Box::new(l.clone()), Box::new(r.clone())))?;
                Ok(if matches!(t, RawTerm::Fst(_)) {
                    (l, Elab::Fst(Box::new(ep)))
                } else {
                    (r, Elab::Snd(Box::new(ep)))
                })
            }
        }
    }

    fn finish(&self, e: &Elab) -> LambdaTerm {
        match e {
            Elab::Var(x) => LambdaTerm::var(x.clone()),
            Elab::Const(c) => LambdaTerm::constant(c.clone(), self.ground(&self.consts[c])),
            Elab::App(f, a) => LambdaTerm::app(self.finish(f), self.finish(a)),
            Elab::Abs(x, ty, b) => LambdaTerm::abs(x.clone(), self.ground(ty), self.finish(b)),
            Elab::Pair(a, b) => LambdaTerm::pair(self.finish(a), self.finish(b)),
            Elab::Fst(p) => LambdaTerm::Fst(Box::new(self.finish(p))),
            Elab::Snd(p) => LambdaTerm::Snd(Box::new(self.finish(p))),
        }
    }
}

/// Term with inference-time types on binders.
enum Elab {
    Var(String),
    Const(String),
    App(Box<Elab>, Box<Elab>),
    Abs(String, Ty, Box<Elab>),
    Pair(Box<Elab>, Box<Elab>),
    Fst(Box<Elab>),
    Snd(Box<Elab>),
}

/// Infers types for a parsed lexical term, optionally against an expected
/// type. Identifiers not bound by a lambda are constants; constants whose
/// type stays undetermined default to `e`.
pub(crate) fn check_raw(raw: &RawTerm, expected: Option<&SemType>) -> Result<LambdaTerm, SemanticsError> {
    let mut inf = Infer::default();
    let (ty, elab) = inf.infer(raw, &mut Vec::new())?;
    if let Some(exp) = expected {
        if inf.unify(&Ty::from(exp), &ty).is_err() {
            return Err(SemanticsError::TypeMismatch {
                expected: exp.to_string(),
                found: inf.ground(&ty).to_string(),
            });
        }
    }
    Ok(inf.finish(&elab))
}

/// Type of a fully typed term. Free variables are looked up in `ctx`.
pub fn type_of(t: &LambdaTerm, ctx: &HashMap<String, SemType>) -> Result<SemType, SemanticsError> {
    fn go(
        t: &LambdaTerm,
        ctx: &HashMap<String, SemType>,
        env: &mut Vec<(String, SemType)>,
    ) -> Result<SemType, SemanticsError> {
        match t {
            LambdaTerm::Var(x) => env
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, ty)| ty.clone())
                .or_else(|| ctx.get(x).cloned())
                .ok_or_else(|| SemanticsError::UnboundVariable(x.clone())),
            LambdaTerm::Const(_, ty) => Ok(ty.clone()),
            LambdaTerm::App(f, a) => {
                let tf = go(f, ctx, env)?;
                let ta = go(a, ctx, env)?;
                match tf {
                    SemType::Arrow(dom, cod) if *dom == ta => Ok(*cod),
                    SemType::Arrow(dom, _) => Err(SemanticsError::TypeMismatch {
                        expected: dom.to_string(),
                        found: ta.to_string(),
                    }),
                    other => Err(SemanticsError::TypeMismatch {
                        expected: format!("{ta}->?"),
                        found: other.to_string(),
                    }),
                }
            }
            LambdaTerm::Abs(x, ty, body) => {
                env.push((x.clone(), ty.clone()));
                let tb = go(body, ctx, env);
                env.pop();
                Ok(SemType::arrow(ty.clone(), tb?))
            }
            LambdaTerm::Pair(a, b) => Ok(SemType::pair(go(a, ctx, env)?, go(b, ctx, env)?)),
            LambdaTerm::Fst(p) | LambdaTerm::Snd(p) => match go(p, ctx, env)? {
                SemType::Pair(l, r) => Ok(if matches!(t, LambdaTerm::Fst(_)) { *l } else { *r }),
                other => Err(SemanticsError::TypeMismatch {
                    expected: "a pair type".to_string(),
                    found: other.to_string(),
                }),
            },
        }
    }
    go(t, ctx, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::term::parse_raw;

    fn check(text: &str, ty: &SemType) -> Result<LambdaTerm, SemanticsError> {
        check_raw(&parse_raw(text).unwrap(), Some(ty))
    }

    #[test]
    fn every_has_determiner_type() {
        let p = SemType::property();
        let det = SemType::arrow(p.clone(), SemType::arrow(p, SemType::T));
        let t = check("\\P.\\Q.(forall \\x.((implies (P x)) (Q x)))", &det).unwrap();
        assert_eq!(type_of(&t, &HashMap::new()).unwrap(), det);
        assert!(!t.is_linear());
    }

    #[test]
    fn constants_are_typed_by_inference() {
        let tv = SemType::arrow(SemType::E, SemType::arrow(SemType::E, SemType::T));
        let t = check("ace", &tv).unwrap();
        assert_eq!(t, LambdaTerm::constant("ace", tv));
        let t = check_raw(&parse_raw("alyssa").unwrap(), None).unwrap();
        assert_eq!(t, LambdaTerm::constant("alyssa", SemType::E));
    }

    #[test]
    fn mismatch_reports_both_types() {
        let err = check("\\x.x", &SemType::T).unwrap_err();
        let SemanticsError::TypeMismatch { expected, found } = err else { panic!() };
        assert_eq!(expected, "t");
        assert_eq!(found, "e->e");
        assert!(check("(and student)", &SemType::T).is_err());
    }
}
