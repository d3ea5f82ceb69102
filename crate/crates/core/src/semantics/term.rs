use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{is_ident_char, Cursor, ParseError};

use super::types::{parse_type_at, SemType};

/// Simply-typed lambda terms. Binders carry their type; constants carry
/// theirs. `Pair`/`Fst`/`Snd` only arise from product formulas.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LambdaTerm {
    Var(String),
    Const(String, SemType),
    App(Box<LambdaTerm>, Box<LambdaTerm>),
    Abs(String, SemType, Box<LambdaTerm>),
    Pair(Box<LambdaTerm>, Box<LambdaTerm>),
    Fst(Box<LambdaTerm>),
    Snd(Box<LambdaTerm>),
}

impl LambdaTerm {
    pub fn var(x: impl Into<String>) -> Self {
        LambdaTerm::Var(x.into())
    }

    pub fn constant(c: impl Into<String>, ty: SemType) -> Self {
        LambdaTerm::Const(c.into(), ty)
    }

    pub fn app(f: LambdaTerm, a: LambdaTerm) -> Self {
        LambdaTerm::App(Box::new(f), Box::new(a))
    }

    pub fn abs(x: impl Into<String>, ty: SemType, body: LambdaTerm) -> Self {
        LambdaTerm::Abs(x.into(), ty, Box::new(body))
    }

    pub fn pair(a: LambdaTerm, b: LambdaTerm) -> Self {
        LambdaTerm::Pair(Box::new(a), Box::new(b))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn go<'a>(t: &'a LambdaTerm, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
            match t {
                LambdaTerm::Var(x) => {
                    if !bound.contains(&x.as_str()) {
                        out.insert(x.clone());
                    }
                }
                LambdaTerm::Const(..) => {}
                LambdaTerm::App(a, b) | LambdaTerm::Pair(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                LambdaTerm::Abs(x, _, body) => {
                    bound.push(x);
                    go(body, bound, out);
                    bound.pop();
                }
                LambdaTerm::Fst(a) | LambdaTerm::Snd(a) => go(a, bound, out),
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            LambdaTerm::Var(x) => {
                out.insert(x.clone());
            }
            LambdaTerm::Const(..) => {}
            LambdaTerm::App(a, b) | LambdaTerm::Pair(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            LambdaTerm::Abs(x, _, body) => {
                out.insert(x.clone());
                body.all_names(out);
            }
            LambdaTerm::Fst(a) | LambdaTerm::Snd(a) => a.all_names(out),
        }
    }

    /// Simultaneous capture-avoiding substitution of free variables.
    pub fn substitute(&self, map: &HashMap<String, LambdaTerm>) -> LambdaTerm {
        let mut avoid = BTreeSet::new();
        for t in map.values() {
            avoid.extend(t.free_vars());
        }
        self.subst_inner(map, &avoid)
    }

    fn subst_inner(
        &self,
        map: &HashMap<String, LambdaTerm>,
        avoid: &BTreeSet<String>,
    ) -> LambdaTerm {
        match self {
            LambdaTerm::Var(x) => map.get(x).cloned().unwrap_or_else(|| self.clone()),
            LambdaTerm::Const(..) => self.clone(),
            LambdaTerm::App(a, b) => {
                LambdaTerm::app(a.subst_inner(map, avoid), b.subst_inner(map, avoid))
            }
            LambdaTerm::Pair(a, b) => {
                LambdaTerm::pair(a.subst_inner(map, avoid), b.subst_inner(map, avoid))
            }
            LambdaTerm::Fst(a) => LambdaTerm::Fst(Box::new(a.subst_inner(map, avoid))),
            LambdaTerm::Snd(a) => LambdaTerm::Snd(Box::new(a.subst_inner(map, avoid))),
            LambdaTerm::Abs(x, ty, body) => {
                let mut inner = map.clone();
                inner.remove(x);
                if inner.is_empty() {
                    return self.clone();
                }
                if avoid.contains(x) {
                    let mut used = avoid.clone();
                    body.all_names(&mut used);
                    used.extend(inner.keys().cloned());
                    let fresh = (1..)
                        .map(|i| format!("{x}{i}"))
                        .find(|c| !used.contains(c))
                        .expect("unbounded supply");
                    inner.insert(x.clone(), LambdaTerm::var(fresh.clone()));
                    let mut avoid = avoid.clone();
                    avoid.insert(fresh.clone());
                    return LambdaTerm::abs(fresh, ty.clone(), body.subst_inner(&inner, &avoid));
                }
                LambdaTerm::abs(x.clone(), ty.clone(), body.subst_inner(&inner, avoid))
            }
        }
    }

    /// Every lambda-bound variable occurs exactly once in its scope.
    pub fn is_linear(&self) -> bool {
        match self {
            LambdaTerm::Var(_) | LambdaTerm::Const(..) => true,
            LambdaTerm::App(a, b) | LambdaTerm::Pair(a, b) => a.is_linear() && b.is_linear(),
            LambdaTerm::Fst(a) | LambdaTerm::Snd(a) => a.is_linear(),
            LambdaTerm::Abs(x, _, body) => body.occurrences(x) == 1 && body.is_linear(),
        }
    }

    /// Free occurrences of `x`.
    pub fn occurrences(&self, x: &str) -> usize {
        match self {
            LambdaTerm::Var(y) => usize::from(y == x),
            LambdaTerm::Const(..) => 0,
            LambdaTerm::App(a, b) | LambdaTerm::Pair(a, b) => a.occurrences(x) + b.occurrences(x),
            LambdaTerm::Fst(a) | LambdaTerm::Snd(a) => a.occurrences(x),
            LambdaTerm::Abs(y, _, body) => {
                if y == x {
                    0
                } else {
                    body.occurrences(x)
                }
            }
        }
    }
}

impl fmt::Display for LambdaTerm {
    /// Application is written `(f a)`; abstraction `\x.body` extends to the right.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaTerm::Var(x) | LambdaTerm::Const(x, _) => f.write_str(x),
            LambdaTerm::App(a, b) => {
                if matches!(**a, LambdaTerm::Abs(..)) {
                    write!(f, "(({a}) {b})")
                } else {
                    write!(f, "({a} {b})")
                }
            }
            LambdaTerm::Abs(x, _, body) => write!(f, "\\{x}.{body}"),
            LambdaTerm::Pair(a, b) => write!(f, "<{a}, {b}>"),
            LambdaTerm::Fst(a) => write!(f, "(fst {a})"),
            LambdaTerm::Snd(a) => write!(f, "(snd {a})"),
        }
    }
}

/// Display with binder type annotations, re-parseable by the lexicon syntax.
pub struct Typed<'a>(&'a LambdaTerm);

impl LambdaTerm {
    pub fn typed(&self) -> Typed<'_> {
        Typed(self)
    }
}

impl fmt::Display for Typed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            LambdaTerm::Var(x) | LambdaTerm::Const(x, _) => f.write_str(x),
            LambdaTerm::App(a, b) => {
                if matches!(**a, LambdaTerm::Abs(..)) {
                    write!(f, "(({}) {})", a.typed(), b.typed())
                } else {
                    write!(f, "({} {})", a.typed(), b.typed())
                }
            }
            LambdaTerm::Abs(x, ty, body) => write!(f, "\\{x}:{ty}.{}", body.typed()),
            LambdaTerm::Pair(a, b) => write!(f, "<{}, {}>", a.typed(), b.typed()),
            LambdaTerm::Fst(a) => write!(f, "(fst {})", a.typed()),
            LambdaTerm::Snd(a) => write!(f, "(snd {})", a.typed()),
        }
    }
}

/// Surface syntax before type inference: binder annotations are optional and
/// identifiers are not yet split into variables and constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RawTerm {
    Name(String),
    App(Box<RawTerm>, Box<RawTerm>),
    Abs(String, Option<SemType>, Box<RawTerm>),
    Pair(Box<RawTerm>, Box<RawTerm>),
    Fst(Box<RawTerm>),
    Snd(Box<RawTerm>),
}

pub(crate) fn parse_raw(text: &str) -> Result<RawTerm, ParseError> {
    let mut cur = Cursor::new(text);
    let t = parse_raw_at(&mut cur)?;
    cur.expect_end()?;
    Ok(t)
}

fn parse_raw_at(cur: &mut Cursor) -> Result<RawTerm, ParseError> {
    if let Some(abs) = parse_abs(cur)? {
        return Ok(abs);
    }
    let mut head = parse_raw_atom(cur)?.ok_or_else(|| cur.error("expected a term"))?;
    loop {
        if let Some(abs) = parse_abs(cur)? {
            return Ok(RawTerm::App(Box::new(head), Box::new(abs)));
        }
        match parse_raw_atom(cur)? {
            Some(arg) => head = RawTerm::App(Box::new(head), Box::new(arg)),
            None => return Ok(head),
        }
    }
}

fn parse_abs(cur: &mut Cursor) -> Result<Option<RawTerm>, ParseError> {
    if !cur.eat("\\") {
        return Ok(None);
    }
    let x = cur
        .ident()
        .ok_or_else(|| cur.error("expected a variable after `\\`"))?
        .to_string();
    let ty = if cur.eat(":") {
        Some(parse_type_at(cur)?)
    } else {
        None
    };
    cur.expect(".")?;
    let body = parse_raw_at(cur)?;
    Ok(Some(RawTerm::Abs(x, ty, Box::new(body))))
}

fn parse_raw_atom(cur: &mut Cursor) -> Result<Option<RawTerm>, ParseError> {
    if cur.eat("(") {
        let t = parse_raw_at(cur)?;
        cur.expect(")")?;
        return Ok(Some(t));
    }
    if cur.eat("<") {
        let a = parse_raw_at(cur)?;
        cur.expect(",")?;
        let b = parse_raw_at(cur)?;
        cur.expect(">")?;
        return Ok(Some(RawTerm::Pair(Box::new(a), Box::new(b))));
    }
    for (kw, fst) in [("fst", true), ("snd", false)] {
        let save = cur.clone();
        if cur.eat_keyword(kw) {
            match parse_raw_atom(cur)? {
                Some(a) => {
                    return Ok(Some(if fst {
                        RawTerm::Fst(Box::new(a))
                    } else {
                        RawTerm::Snd(Box::new(a))
                    }))
                }
                None => *cur = save,
            }
        }
    }
    cur.skip_ws();
    let rest = cur.rest();
    if rest.starts_with(|c: char| c.is_ascii_digit()) {
        return Err(cur.error("integer literals are not supported in lexical terms"));
    }
    if !rest.starts_with(is_ident_char) {
        return Ok(None);
    }
    Ok(cur.ident().map(|n| RawTerm::Name(n.to_string())))
}
