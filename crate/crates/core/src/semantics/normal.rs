//! Beta normalization on a nameless representation.

use std::collections::BTreeSet;

use super::term::LambdaTerm;
use super::types::SemType;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Db {
    Bound(usize),
    Free(String),
    Const(String, SemType),
    App(Box<Db>, Box<Db>),
    Abs(SemType, Box<Db>),
    Pair(Box<Db>, Box<Db>),
    Fst(Box<Db>),
    Snd(Box<Db>),
}

fn to_db(t: &LambdaTerm, env: &mut Vec<String>) -> Db {
    match t {
        LambdaTerm::Var(x) => match env.iter().rev().position(|y| y == x) {
            Some(i) => Db::Bound(i),
            None => Db::Free(x.clone()),
        },
        LambdaTerm::Const(c, ty) => Db::Const(c.clone(), ty.clone()),
        LambdaTerm::App(a, b) => Db::App(Box::new(to_db(a, env)), Box::new(to_db(b, env))),
        LambdaTerm::Pair(a, b) => Db::Pair(Box::new(to_db(a, env)), Box::new(to_db(b, env))),
        LambdaTerm::Fst(a) => Db::Fst(Box::new(to_db(a, env))),
        LambdaTerm::Snd(a) => Db::Snd(Box::new(to_db(a, env))),
        LambdaTerm::Abs(x, ty, body) => {
            env.push(x.clone());
            let b = to_db(body, env);
            env.pop();
            Db::Abs(ty.clone(), Box::new(b))
        }
    }
}

fn shift(t: &Db, by: isize, cutoff: usize) -> Db {
    match t {
        Db::Bound(i) if *i >= cutoff => Db::Bound((*i as isize + by) as usize),
        Db::Bound(_) | Db::Free(_) | Db::Const(..) => t.clone(),
        Db::App(a, b) => Db::App(Box::new(shift(a, by, cutoff)), Box::new(shift(b, by, cutoff))),
        Db::Pair(a, b) => Db::Pair(Box::new(shift(a, by, cutoff)), Box::new(shift(b, by, cutoff))),
        Db::Fst(a) => Db::Fst(Box::new(shift(a, by, cutoff))),
        Db::Snd(a) => Db::Snd(Box::new(shift(a, by, cutoff))),
        Db::Abs(ty, b) => Db::Abs(ty.clone(), Box::new(shift(b, by, cutoff + 1))),
    }
}

/// Substitutes `s` for index `j` in `t`.
fn subst(t: &Db, j: usize, s: &Db) -> Db {
    match t {
        Db::Bound(i) if *i == j => s.clone(),
        Db::Bound(_) | Db::Free(_) | Db::Const(..) => t.clone(),
        Db::App(a, b) => Db::App(Box::new(subst(a, j, s)), Box::new(subst(b, j, s))),
        Db::Pair(a, b) => Db::Pair(Box::new(subst(a, j, s)), Box::new(subst(b, j, s))),
        Db::Fst(a) => Db::Fst(Box::new(subst(a, j, s))),
        Db::Snd(a) => Db::Snd(Box::new(subst(a, j, s))),
        Db::Abs(ty, b) => Db::Abs(ty.clone(), Box::new(subst(b, j + 1, &shift(s, 1, 0)))),
    }
}

fn beta(body: &Db, arg: &Db) -> Db {
    shift(&subst(body, 0, &shift(arg, 1, 0)), -1, 0)
}

fn normalize_db(t: &Db) -> Db {
    match t {
        Db::Bound(_) | Db::Free(_) | Db::Const(..) => t.clone(),
        Db::Abs(ty, b) => Db::Abs(ty.clone(), Box::new(normalize_db(b))),
        Db::Pair(a, b) => Db::Pair(Box::new(normalize_db(a)), Box::new(normalize_db(b))),
        Db::App(f, a) => match normalize_db(f) {
            Db::Abs(_, body) => normalize_db(&beta(&body, a)),
            nf => Db::App(Box::new(nf), Box::new(normalize_db(a))),
        },
        Db::Fst(p) | Db::Snd(p) => match normalize_db(p) {
            Db::Pair(l, r) => {
                if matches!(t, Db::Fst(_)) {
                    *l
                } else {
                    *r
                }
            }
            np => {
                if matches!(t, Db::Fst(_)) {
                    Db::Fst(Box::new(np))
                } else {
                    Db::Snd(Box::new(np))
                }
            }
        },
    }
}

const BASE_NAMES: [&str; 6] = ["x", "y", "z", "w", "v", "u"];

/// Names binders `x, y, z, w, v, u, x1, y1, ...` in pre-order, skipping
/// free variable names.
fn from_db(t: &Db, env: &mut Vec<String>, next: &mut usize, avoid: &BTreeSet<String>) -> LambdaTerm {
    match t {
        Db::Bound(i) => LambdaTerm::var(env[env.len() - 1 - i].clone()),
        Db::Free(x) => LambdaTerm::var(x.clone()),
        Db::Const(c, ty) => LambdaTerm::constant(c.clone(), ty.clone()),
        Db::App(a, b) => {
            let a = from_db(a, env, next, avoid);
            LambdaTerm::app(a, from_db(b, env, next, avoid))
        }
        Db::Pair(a, b) => {
            let a = from_db(a, env, next, avoid);
            LambdaTerm::pair(a, from_db(b, env, next, avoid))
        }
        Db::Fst(a) => LambdaTerm::Fst(Box::new(from_db(a, env, next, avoid))),
        Db::Snd(a) => LambdaTerm::Snd(Box::new(from_db(a, env, next, avoid))),
        Db::Abs(ty, b) => {
            let name = loop {
                let k = *next;
                *next += 1;
                let base = BASE_NAMES[k % BASE_NAMES.len()];
                let round = k / BASE_NAMES.len();
                let name = if round == 0 { base.to_string() } else { format!("{base}{round}") };
                if !avoid.contains(&name) {
                    break name;
                }
            };
            env.push(name.clone());
            let body = from_db(b, env, next, avoid);
            env.pop();
            LambdaTerm::abs(name, ty.clone(), body)
        }
    }
}

fn canonical(t: &Db, free: &BTreeSet<String>) -> LambdaTerm {
    from_db(t, &mut Vec::new(), &mut 0, free)
}

/// Beta normal form with canonically renamed binders, so that
/// alpha-equivalent results are syntactically equal.
pub fn normalize(t: &LambdaTerm) -> LambdaTerm {
    let db = normalize_db(&to_db(t, &mut Vec::new()));
    canonical(&db, &t.free_vars())
}

/// Renames binders canonically without reducing.
pub fn rename_canonical(t: &LambdaTerm) -> LambdaTerm {
    canonical(&to_db(t, &mut Vec::new()), &t.free_vars())
}

pub fn alpha_eq(a: &LambdaTerm, b: &LambdaTerm) -> bool {
    to_db(a, &mut Vec::new()) == to_db(b, &mut Vec::new())
}

pub fn is_beta_normal(t: &LambdaTerm) -> bool {
    match t {
        LambdaTerm::Var(_) | LambdaTerm::Const(..) => true,
        LambdaTerm::App(f, a) => !matches!(**f, LambdaTerm::Abs(..)) && is_beta_normal(f) && is_beta_normal(a),
        LambdaTerm::Abs(_, _, b) => is_beta_normal(b),
        LambdaTerm::Pair(a, b) => is_beta_normal(a) && is_beta_normal(b),
        LambdaTerm::Fst(p) | LambdaTerm::Snd(p) => !matches!(**p, LambdaTerm::Pair(..)) && is_beta_normal(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_application() {
        let c = LambdaTerm::constant("c", SemType::E);
        let id = LambdaTerm::abs("q", SemType::E, LambdaTerm::var("q"));
        assert_eq!(normalize(&LambdaTerm::app(id, c.clone())), c);
    }

    #[test]
    fn reduction_under_binders_avoids_capture() {
        // (\x.\y.(x y)) y  ~>  \z.(y z) for free y
        let e = SemType::E;
        let f = SemType::arrow(e.clone(), e.clone());
        let t = LambdaTerm::app(
            LambdaTerm::abs(
                "x",
                f.clone(),
                LambdaTerm::abs("y", e.clone(), LambdaTerm::app(LambdaTerm::var("x"), LambdaTerm::var("y"))),
            ),
            LambdaTerm::var("y"),
        );
        let n = normalize(&t);
        let LambdaTerm::Abs(b, _, body) = &n else { panic!("{n}") };
        assert_ne!(b, "y");
        assert_eq!(**body, LambdaTerm::app(LambdaTerm::var("y"), LambdaTerm::var(b.clone())));
    }

    #[test]
    fn alpha_equivalence_is_nameless() {
        let e = SemType::E;
        let a = LambdaTerm::abs("a", e.clone(), LambdaTerm::var("a"));
        let b = LambdaTerm::abs("b", e.clone(), LambdaTerm::var("b"));
        assert!(alpha_eq(&a, &b));
        assert!(!alpha_eq(&a, &LambdaTerm::abs("b", e, LambdaTerm::var("a"))));
        assert_eq!(rename_canonical(&a), rename_canonical(&b));
    }

    #[test]
    fn projections_reduce() {
        let c = LambdaTerm::constant("c", SemType::E);
        let d = LambdaTerm::constant("d", SemType::T);
        let p = LambdaTerm::pair(c.clone(), d.clone());
        assert_eq!(normalize(&LambdaTerm::Fst(Box::new(p.clone()))), c);
        assert_eq!(normalize(&LambdaTerm::Snd(Box::new(p))), d);
    }
}
