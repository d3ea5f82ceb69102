//! Lambek and multimodal formulas.
//!
//! Both dialects share one tree type, [`Formula<M>`], parameterised by the
//! label carried on each binary connective: `()` for the Lambek calculus and
//! [`Mode`] for multimodal grammars.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{Cursor, ParseError};

/// A mode (element of the index set labelling multimodal connectives).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mode(pub String);

impl Mode {
    pub fn new(label: impl Into<String>) -> Self {
        Mode(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Label carried by a binary connective. Decides how the connective prints.
pub trait ModeLabel: Clone + Eq + std::hash::Hash + fmt::Debug {
    /// Text written directly after the connective symbol.
    fn suffix(&self) -> &str;
}

impl ModeLabel for () {
    fn suffix(&self) -> &str {
        ""
    }
}

impl ModeLabel for Mode {
    fn suffix(&self) -> &str {
        &self.0
    }
}

/// A categorial formula. `Over(m, a, b)` is `A/B`; `Under(m, b, a)` is `B\A`
/// (argument on the left, result on the right, as written); `Prod(m, a, b)`
/// is `A*B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula<M> {
    Atom(String),
    Over(M, Box<Formula<M>>, Box<Formula<M>>),
    Under(M, Box<Formula<M>>, Box<Formula<M>>),
    Prod(M, Box<Formula<M>>, Box<Formula<M>>),
}

pub type LambekFormula = Formula<()>;
pub type MMFormula = Formula<Mode>;

impl<M: ModeLabel> Formula<M> {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn over(m: M, result: Self, arg: Self) -> Self {
        Formula::Over(m, Box::new(result), Box::new(arg))
    }

    pub fn under(m: M, arg: Self, result: Self) -> Self {
        Formula::Under(m, Box::new(arg), Box::new(result))
    }

    pub fn prod(m: M, left: Self, right: Self) -> Self {
        Formula::Prod(m, Box::new(left), Box::new(right))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    /// Number of binary connectives.
    pub fn connectives(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Over(_, a, b) | Formula::Under(_, a, b) | Formula::Prod(_, a, b) => {
                1 + a.connectives() + b.connectives()
            }
        }
    }

    /// Atom names in left-to-right order.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Formula::Atom(p) => out.push(p),
            Formula::Over(_, a, b) | Formula::Under(_, a, b) | Formula::Prod(_, a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Every mode label used, in left-to-right order (duplicates kept).
    pub fn labels(&self) -> Vec<&M> {
        let mut out = Vec::new();
        fn walk<'a, M>(f: &'a Formula<M>, out: &mut Vec<&'a M>) {
            match f {
                Formula::Atom(_) => {}
                Formula::Over(m, a, b) | Formula::Under(m, a, b) | Formula::Prod(m, a, b) => {
                    out.push(m);
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn map_modes<N: ModeLabel>(&self, f: &impl Fn(&M) -> N) -> Formula<N> {
        match self {
            Formula::Atom(p) => Formula::Atom(p.clone()),
            Formula::Over(m, a, b) => Formula::over(f(m), a.map_modes(f), b.map_modes(f)),
            Formula::Under(m, a, b) => Formula::under(f(m), a.map_modes(f), b.map_modes(f)),
            Formula::Prod(m, a, b) => Formula::prod(f(m), a.map_modes(f), b.map_modes(f)),
        }
    }

    /// Forgets the modes.
    pub fn to_lambek(&self) -> LambekFormula {
        self.map_modes(&|_| ())
    }
}

impl LambekFormula {
    /// Labels every connective with the same mode.
    pub fn with_mode(&self, mode: &Mode) -> MMFormula {
        self.map_modes(&|_| mode.clone())
    }
}

impl<M: ModeLabel> fmt::Display for Formula<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f, false)
    }
}

fn write_formula<M: ModeLabel>(
    formula: &Formula<M>,
    f: &mut fmt::Formatter<'_>,
    nested: bool,
) -> fmt::Result {
    let (sym, m, a, b) = match formula {
        Formula::Atom(p) => return f.write_str(p),
        Formula::Over(m, a, b) => ('/', m, a, b),
        Formula::Under(m, a, b) => ('\\', m, a, b),
        Formula::Prod(m, a, b) => ('*', m, a, b),
    };
    if nested {
        f.write_str("(")?;
    }
    write_formula(a, f, true)?;
    let suffix = m.suffix();
    if suffix.is_empty() {
        write!(f, "{sym}")?;
    } else {
        write!(f, " {sym}{suffix} ")?;
    }
    write_formula(b, f, true)?;
    if nested {
        f.write_str(")")?;
    }
    Ok(())
}

/// Parses a Lambek formula such as `(np\s)/np`.
pub fn parse_lambek(text: &str) -> Result<LambekFormula, ParseError> {
    let mut cur = Cursor::new(text);
    let f = parse_binary(&mut cur, &|_: &mut Cursor| Ok(()))?;
    cur.expect_end()?;
    Ok(f)
}

/// Parses a multimodal formula such as `(s /a (np \a s)) /a n`. Every
/// connective must carry a mode written directly after the symbol.
pub fn parse_mm(text: &str) -> Result<MMFormula, ParseError> {
    let mut cur = Cursor::new(text);
    let f = parse_mm_at(&mut cur)?;
    cur.expect_end()?;
    Ok(f)
}

fn parse_mm_at(cur: &mut Cursor) -> Result<MMFormula, ParseError> {
    parse_binary(cur, &|cur: &mut Cursor| {
        cur.label_here()
            .map(Mode::new)
            .ok_or_else(|| cur.error("expected a mode directly after the connective"))
    })
}

fn parse_binary<M: ModeLabel>(
    cur: &mut Cursor,
    mode: &impl Fn(&mut Cursor) -> Result<M, ParseError>,
) -> Result<Formula<M>, ParseError> {
    let left = parse_primary(cur, mode)?;
    cur.skip_ws();
    let ctor: fn(M, Formula<M>, Formula<M>) -> Formula<M> = match cur.peek() {
        Some('/') => Formula::over,
        Some('\\') => Formula::under,
        Some('*') => Formula::prod,
        _ => return Ok(left),
    };
    cur.bump();
    let m = mode(cur)?;
    let right = parse_primary(cur, mode)?;
    cur.skip_ws();
    if matches!(cur.peek(), Some('/' | '\\' | '*')) {
        return Err(cur.error("connectives are non-associative; add parentheses"));
    }
    Ok(ctor(m, left, right))
}

fn parse_primary<M: ModeLabel>(
    cur: &mut Cursor,
    mode: &impl Fn(&mut Cursor) -> Result<M, ParseError>,
) -> Result<Formula<M>, ParseError> {
    if cur.eat("(") {
        let f = parse_binary(cur, mode)?;
        cur.expect(")")?;
        return Ok(f);
    }
    match cur.ident() {
        Some(name) => Ok(Formula::Atom(name.to_string())),
        None => Err(cur.error("expected an atom or `(`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(p: &str) -> LambekFormula {
        Formula::atom(p)
    }

    #[test]
    fn parses_transitive_verb() {
        let f = parse_lambek("(np\\s)/np").unwrap();
        assert_eq!(
            f,
            Formula::over((), Formula::under((), a("np"), a("s")), a("np"))
        );
        assert_eq!(f.to_string(), "(np\\s)/np");
    }

    #[test]
    fn parses_atom() {
        assert_eq!(parse_lambek("np").unwrap(), a("np"));
        assert_eq!(a("s").to_string(), "s");
    }

    #[test]
    fn parses_modes() {
        let f = parse_mm("(s /a (np \\a s)) /a n").unwrap();
        assert_eq!(f.to_string(), "(s /a (np \\a s)) /a n");
        assert_eq!(f.to_lambek(), parse_lambek("(s/(np\\s))/n").unwrap());
        assert!(parse_mm("a/a b").is_ok());
        assert!(parse_mm("a / b").is_err());
    }

    #[test]
    fn rejects_unbracketed_chains() {
        let err = parse_lambek("a/b/c").unwrap_err();
        assert!(err.message.contains("non-associative"));
        assert!(parse_lambek("(a").is_err());
        assert!(parse_lambek("").is_err());
    }
}
