//! First-order multiplicative intuitionistic linear logic (MILL1) formulas.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{split_top_level, Cursor, ParseError};

/// First-order terms: variables and string positions. Complex function terms
/// are deliberately absent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FoTerm {
    Var(String),
    Const(u32),
}

impl FoTerm {
    pub fn var(name: impl Into<String>) -> Self {
        FoTerm::Var(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            FoTerm::Var(v) => Some(v),
            FoTerm::Const(_) => None,
        }
    }
}

impl fmt::Display for FoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoTerm::Var(v) => f.write_str(v),
            FoTerm::Const(c) => write!(f, "{c}"),
        }
    }
}

impl From<u32> for FoTerm {
    fn from(c: u32) -> Self {
        FoTerm::Const(c)
    }
}

/// Polarity of a formula occurrence: antecedent occurrences are negative,
/// the succedent positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FoFormula {
    Atom(String, Vec<FoTerm>),
    Impl(Box<FoFormula>, Box<FoFormula>),
    Tensor(Box<FoFormula>, Box<FoFormula>),
    Forall(String, Box<FoFormula>),
    Exists(String, Box<FoFormula>),
}

/// Monotone supply of reserved-prefix variable names (`_v0`, `_v1`, ...).
#[derive(Debug, Clone, Default)]
pub struct Fresh {
    next: usize,
}

impl Fresh {
    pub fn new() -> Self {
        Fresh::default()
    }

    /// Starts numbering after every `_vN` name already used in `formulas`.
    pub fn avoiding<'a>(formulas: impl IntoIterator<Item = &'a FoFormula>) -> Self {
        let mut next = 0;
        for f in formulas {
            for v in f.all_vars() {
                if let Some(n) = v.strip_prefix("_v").and_then(|n| n.parse::<usize>().ok()) {
                    next = next.max(n + 1);
                }
            }
        }
        Fresh { next }
    }

    pub fn var(&mut self) -> String {
        let v = format!("_v{}", self.next);
        self.next += 1;
        v
    }
}

impl FoFormula {
    pub fn atom(pred: impl Into<String>, args: Vec<FoTerm>) -> Self {
        FoFormula::Atom(pred.into(), args)
    }

    pub fn implies(a: FoFormula, b: FoFormula) -> Self {
        FoFormula::Impl(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: FoFormula, b: FoFormula) -> Self {
        FoFormula::Tensor(Box::new(a), Box::new(b))
    }

    pub fn forall(x: impl Into<String>, body: FoFormula) -> Self {
        FoFormula::Forall(x.into(), Box::new(body))
    }

    pub fn exists(x: impl Into<String>, body: FoFormula) -> Self {
        FoFormula::Exists(x.into(), Box::new(body))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, FoFormula::Atom(..))
    }

    /// Variables with at least one free occurrence.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            FoFormula::Atom(_, args) => {
                for t in args {
                    if let FoTerm::Var(v) = t {
                        if !bound.contains(&v.as_str()) {
                            out.insert(v.clone());
                        }
                    }
                }
            }
            FoFormula::Impl(a, b) | FoFormula::Tensor(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            FoFormula::Forall(x, body) | FoFormula::Exists(x, body) => {
                bound.push(x);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_free(&self, x: &str) -> bool {
        match self {
            FoFormula::Atom(_, args) => args.iter().any(|t| t.as_var() == Some(x)),
            FoFormula::Impl(a, b) | FoFormula::Tensor(a, b) => a.is_free(x) || b.is_free(x),
            FoFormula::Forall(y, body) | FoFormula::Exists(y, body) => y != x && body.is_free(x),
        }
    }

    /// Every variable name occurring anywhere, bound or free, binders included.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk_vars(&mut |v| {
            out.insert(v.to_string());
        });
        out
    }

    fn walk_vars(&self, f: &mut impl FnMut(&str)) {
        match self {
            FoFormula::Atom(_, args) => args.iter().filter_map(FoTerm::as_var).for_each(f),
            FoFormula::Impl(a, b) | FoFormula::Tensor(a, b) => {
                a.walk_vars(f);
                b.walk_vars(f);
            }
            FoFormula::Forall(x, body) | FoFormula::Exists(x, body) => {
                f(x);
                body.walk_vars(f);
            }
        }
    }

    /// Binder names in pre-order.
    pub fn binders(&self) -> Vec<&str> {
        let mut out = Vec::new();
        fn walk<'a>(f: &'a FoFormula, out: &mut Vec<&'a str>) {
            match f {
                FoFormula::Atom(..) => {}
                FoFormula::Impl(a, b) | FoFormula::Tensor(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                FoFormula::Forall(x, body) | FoFormula::Exists(x, body) => {
                    out.push(x);
                    walk(body, out);
                }
            }
        }
        walk(self, &mut out);
        out
    }

    /// Capture-avoiding substitution of `t` for the free occurrences of `x`.
    pub fn substitute(&self, x: &str, t: &FoTerm) -> FoFormula {
        match self {
            FoFormula::Atom(p, args) => FoFormula::Atom(
                p.clone(),
                args.iter()
                    .map(|a| match a {
                        FoTerm::Var(v) if v == x => t.clone(),
                        other => other.clone(),
                    })
                    .collect(),
            ),
            FoFormula::Impl(a, b) => FoFormula::implies(a.substitute(x, t), b.substitute(x, t)),
            FoFormula::Tensor(a, b) => FoFormula::tensor(a.substitute(x, t), b.substitute(x, t)),
            FoFormula::Forall(y, body) | FoFormula::Exists(y, body) => {
                let rebuild = |y: String, body: FoFormula| match self {
                    FoFormula::Forall(..) => FoFormula::forall(y, body),
                    _ => FoFormula::exists(y, body),
                };
                if y == x || !body.is_free(x) {
                    return self.clone();
                }
                if t.as_var() == Some(y.as_str()) {
                    // rename the binder away from the incoming variable
                    let mut avoid = body.all_vars();
                    avoid.insert(x.to_string());
                    avoid.insert(y.clone());
                    let fresh = (0..)
                        .map(|i| format!("_r{i}"))
                        .find(|c| !avoid.contains(c))
                        .expect("unbounded supply");
                    let renamed = body.substitute(y, &FoTerm::Var(fresh.clone()));
                    return rebuild(fresh, renamed.substitute(x, t));
                }
                rebuild(y.clone(), body.substitute(x, t))
            }
        }
    }

    /// Applies a term map to every free variable (used for unifiers). Binders
    /// are assumed distinct from the map's domain and range.
    pub fn apply(&self, map: &dyn Fn(&str) -> Option<FoTerm>) -> FoFormula {
        match self {
            FoFormula::Atom(p, args) => FoFormula::Atom(
                p.clone(),
                args.iter()
                    .map(|a| match a {
                        FoTerm::Var(v) => map(v).unwrap_or_else(|| a.clone()),
                        c => c.clone(),
                    })
                    .collect(),
            ),
            FoFormula::Impl(a, b) => FoFormula::implies(a.apply(map), b.apply(map)),
            FoFormula::Tensor(a, b) => FoFormula::tensor(a.apply(map), b.apply(map)),
            FoFormula::Forall(y, body) => {
                let y2 = y.clone();
                FoFormula::forall(y, body.apply(&|v| if v == y2 { None } else { map(v) }))
            }
            FoFormula::Exists(y, body) => {
                let y2 = y.clone();
                FoFormula::exists(y, body.apply(&|v| if v == y2 { None } else { map(v) }))
            }
        }
    }

    /// Renames binders so that no two quantifiers bind the same name and no
    /// binder clashes with a free variable. Names already unique are kept.
    pub fn rectify(&self) -> FoFormula {
        let mut used = self.free_vars();
        self.rectify_with(&mut used)
    }

    /// Rectifies against an externally maintained set of used names.
    pub fn rectify_with(&self, used: &mut BTreeSet<String>) -> FoFormula {
        match self {
            FoFormula::Atom(..) => self.clone(),
            FoFormula::Impl(a, b) => {
                let a = a.rectify_with(used);
                FoFormula::implies(a, b.rectify_with(used))
            }
            FoFormula::Tensor(a, b) => {
                let a = a.rectify_with(used);
                FoFormula::tensor(a, b.rectify_with(used))
            }
            FoFormula::Forall(x, body) | FoFormula::Exists(x, body) => {
                let name = if used.contains(x) {
                    let base = x.trim_end_matches(|c: char| c.is_ascii_digit());
                    (1..)
                        .map(|i| format!("{base}{i}"))
                        .find(|c| !used.contains(c) && !body.all_vars().contains(c))
                        .expect("unbounded supply")
                } else {
                    x.clone()
                };
                used.insert(name.clone());
                let body = if &name == x {
                    body.as_ref().clone()
                } else {
                    body.substitute(x, &FoTerm::Var(name.clone()))
                };
                let body = body.rectify_with(used);
                match self {
                    FoFormula::Forall(..) => FoFormula::forall(name, body),
                    _ => FoFormula::exists(name, body),
                }
            }
        }
    }

    pub fn is_rectified(&self) -> bool {
        let binders = self.binders();
        let free = self.free_vars();
        let mut seen = BTreeSet::new();
        binders
            .iter()
            .all(|b| !free.contains(*b) && seen.insert(*b))
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &FoFormula) -> bool {
        fn go<'a>(
            a: &'a FoFormula,
            b: &'a FoFormula,
            env: &mut Vec<(&'a str, &'a str)>,
        ) -> bool {
            match (a, b) {
                (FoFormula::Atom(p, xs), FoFormula::Atom(q, ys)) => {
                    p == q
                        && xs.len() == ys.len()
                        && xs.iter().zip(ys).all(|(x, y)| match (x, y) {
                            (FoTerm::Var(x), FoTerm::Var(y)) => {
                                let bx = env.iter().rev().find(|(l, _)| l == x);
                                let by = env.iter().rev().find(|(_, r)| r == y);
                                match (bx, by) {
                                    (Some((_, r)), Some((l, _))) => r == y && l == x,
                                    (None, None) => x == y,
                                    _ => false,
                                }
                            }
                            (FoTerm::Const(c), FoTerm::Const(d)) => c == d,
                            _ => false,
                        })
                }
                (FoFormula::Impl(a1, a2), FoFormula::Impl(b1, b2))
                | (FoFormula::Tensor(a1, a2), FoFormula::Tensor(b1, b2)) => {
                    go(a1, b1, env) && go(a2, b2, env)
                }
                (FoFormula::Forall(x, a), FoFormula::Forall(y, b))
                | (FoFormula::Exists(x, a), FoFormula::Exists(y, b)) => {
                    env.push((x, y));
                    let r = go(a, b, env);
                    env.pop();
                    r
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }

    /// Number of logical connectives and quantifiers.
    pub fn size(&self) -> usize {
        match self {
            FoFormula::Atom(..) => 0,
            FoFormula::Impl(a, b) | FoFormula::Tensor(a, b) => 1 + a.size() + b.size(),
            FoFormula::Forall(_, body) | FoFormula::Exists(_, body) => 1 + body.size(),
        }
    }

    /// Renames variables through `map` everywhere, binders included.
    pub fn rename_all(&self, map: &HashMap<String, String>) -> FoFormula {
        let r = |v: &String| map.get(v).cloned().unwrap_or_else(|| v.clone());
        match self {
            FoFormula::Atom(p, args) => FoFormula::Atom(
                p.clone(),
                args.iter()
                    .map(|t| match t {
                        FoTerm::Var(v) => FoTerm::Var(r(v)),
                        c => c.clone(),
                    })
                    .collect(),
            ),
            FoFormula::Impl(a, b) => FoFormula::implies(a.rename_all(map), b.rename_all(map)),
            FoFormula::Tensor(a, b) => FoFormula::tensor(a.rename_all(map), b.rename_all(map)),
            FoFormula::Forall(x, b) => FoFormula::forall(r(x), b.rename_all(map)),
            FoFormula::Exists(x, b) => FoFormula::exists(r(x), b.rename_all(map)),
        }
    }
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_fo(self, f, false)
    }
}

fn write_fo(formula: &FoFormula, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
    match formula {
        FoFormula::Atom(p, args) => {
            f.write_str(p)?;
            if !args.is_empty() {
                f.write_str("(")?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")?;
            }
            Ok(())
        }
        FoFormula::Impl(a, b) | FoFormula::Tensor(a, b) => {
            let sym = if matches!(formula, FoFormula::Impl(..)) { "-o" } else { "*" };
            if nested {
                f.write_str("(")?;
            }
            write_fo(a, f, true)?;
            write!(f, " {sym} ")?;
            write_fo(b, f, true)?;
            if nested {
                f.write_str(")")?;
            }
            Ok(())
        }
        FoFormula::Forall(x, body) | FoFormula::Exists(x, body) => {
            let q = if matches!(formula, FoFormula::Forall(..)) { "forall" } else { "exists" };
            write!(f, "{q} {x}.")?;
            write_fo(body, f, true)
        }
    }
}

/// Parses a MILL1 formula, e.g. `forall z.(np(z,3) -o s(z,4))`, and rectifies it.
///
/// Quantifiers bind tightly: the body is an atom, a parenthesised formula or
/// another quantifier. User variables may not start with `_`.
pub fn parse_foll(text: &str) -> Result<FoFormula, ParseError> {
    let mut cur = Cursor::new(text);
    let f = parse_fo_at(&mut cur)?;
    cur.expect_end()?;
    Ok(f.rectify())
}

fn parse_fo_at(cur: &mut Cursor) -> Result<FoFormula, ParseError> {
    let left = parse_fo_primary(cur)?;
    let ctor: fn(FoFormula, FoFormula) -> FoFormula = if cur.eat("-o") {
        FoFormula::implies
    } else if cur.eat("*") {
        FoFormula::tensor
    } else {
        return Ok(left);
    };
    let right = parse_fo_primary(cur)?;
    cur.skip_ws();
    if cur.rest().starts_with("-o") || cur.rest().starts_with('*') {
        return Err(cur.error("connectives are non-associative; add parentheses"));
    }
    Ok(ctor(left, right))
}

fn parse_fo_primary(cur: &mut Cursor) -> Result<FoFormula, ParseError> {
    if cur.eat("(") {
        let f = parse_fo_at(cur)?;
        cur.expect(")")?;
        return Ok(f);
    }
    for (kw, is_forall) in [("forall", true), ("exists", false)] {
        if cur.eat_keyword(kw) {
            let x = user_var(cur)?;
            cur.expect(".")?;
            let body = parse_fo_primary(cur)?;
            return Ok(if is_forall {
                FoFormula::forall(x, body)
            } else {
                FoFormula::exists(x, body)
            });
        }
    }
    let Some(pred) = cur.ident() else {
        return Err(cur.error("expected an atom, quantifier or `(`"));
    };
    let pred = pred.to_string();
    let mut args = Vec::new();
    if cur.rest().starts_with('(') {
        cur.bump();
        loop {
            if let Some(n) = cur.number() {
                args.push(FoTerm::Const(n));
            } else {
                args.push(FoTerm::Var(user_var(cur)?));
            }
            if cur.eat(")") {
                break;
            }
            cur.expect(",")?;
        }
    }
    Ok(FoFormula::Atom(pred, args))
}

fn user_var(cur: &mut Cursor) -> Result<String, ParseError> {
    let start = cur.pos();
    let Some(v) = cur.ident() else {
        return Err(cur.error("expected a variable"));
    };
    if v.starts_with('_') {
        return Err(ParseError::new(start, "variables starting with `_` are reserved"));
    }
    Ok(v.to_string())
}

/// A MILL1 sequent `A1, ..., An |- C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoSequent {
    pub antecedent: Vec<FoFormula>,
    pub succedent: FoFormula,
}

impl fmt::Display for FoSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.antecedent.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, " |- {}", self.succedent)
    }
}

pub fn parse_fo_sequent(text: &str) -> Result<FoSequent, ParseError> {
    let (lhs, rhs) = split_turnstile(text)?;
    let mut antecedent = Vec::new();
    if !lhs.trim().is_empty() {
        for (off, part) in split_top_level(lhs, ',') {
            antecedent.push(parse_foll(part).map_err(|e| shift(e, off))?);
        }
    }
    let succedent = parse_foll(rhs).map_err(|e| shift(e, lhs.len() + 2))?;
    Ok(FoSequent {
        antecedent,
        succedent,
    })
}

pub(crate) fn split_turnstile(text: &str) -> Result<(&str, &str), ParseError> {
    match text.find("|-") {
        Some(i) => Ok((&text[..i], &text[i + 2..])),
        None => Err(ParseError::new(0, "expected `|-`")),
    }
}

pub(crate) fn shift(mut e: ParseError, by: usize) -> ParseError {
    e.position += by;
    e
}
