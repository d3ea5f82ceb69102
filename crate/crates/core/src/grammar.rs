//! Grammar files: atoms, modes, structural rules, goals and the lexicon.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::formula::{
    parse_foll, parse_lambek, parse_mm, FoFormula, FoTerm, Formula, LambekFormula, MMFormula,
    Mode, ModeLabel,
};
use crate::semantics::{parse_lambda, parse_type, LambdaTerm, SemType, SemanticsError, TypeMap};
use crate::syntax::{Cursor, ParseError};

/// Placeholders in first-order lexical entries, replaced by the word's
/// string positions at lookup time.
pub const POS_LEFT: &str = "posleft";
pub const POS_RIGHT: &str = "posright";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TreePattern {
    Leaf(String),
    Node(Mode, Box<TreePattern>, Box<TreePattern>),
}

impl TreePattern {
    pub fn node(m: Mode, l: TreePattern, r: TreePattern) -> Self {
        TreePattern::Node(m, Box::new(l), Box::new(r))
    }

    /// Leaf variables, left to right.
    pub fn leaves(&self) -> Vec<&str> {
        match self {
            TreePattern::Leaf(x) => vec![x],
            TreePattern::Node(_, l, r) => {
                let mut v = l.leaves();
                v.extend(r.leaves());
                v
            }
        }
    }

    pub fn modes(&self) -> Vec<&Mode> {
        match self {
            TreePattern::Leaf(_) => Vec::new(),
            TreePattern::Node(m, l, r) => {
                let mut v = vec![m];
                v.extend(l.modes());
                v.extend(r.modes());
                v
            }
        }
    }
}

impl fmt::Display for TreePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(p: &TreePattern, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
            match p {
                TreePattern::Leaf(x) => f.write_str(x),
                TreePattern::Node(m, l, r) => {
                    if nested {
                        f.write_str("(")?;
                    }
                    go(l, f, true)?;
                    write!(f, " o{m} ")?;
                    go(r, f, true)?;
                    if nested {
                        f.write_str(")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, f, false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StructuralRule {
    pub name: String,
    pub lhs: TreePattern,
    pub rhs: TreePattern,
}

impl fmt::Display for StructuralRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} => {}", self.name, self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("nonlinear structural rule `{rule}`: {}", vars.join(", "))]
pub struct NonlinearRule {
    pub rule: String,
    pub vars: Vec<String>,
}

/// Checks that both sides use the same leaf variables, each exactly once.
pub fn validate_rule(r: &StructuralRule) -> Result<(), NonlinearRule> {
    let count = |p: &TreePattern| {
        let mut m: BTreeMap<String, usize> = BTreeMap::new();
        for x in p.leaves() {
            *m.entry(x.to_string()).or_default() += 1;
        }
        m
    };
    let (l, r2) = (count(&r.lhs), count(&r.rhs));
    let vars: BTreeSet<String> = l.keys().chain(r2.keys()).cloned().collect();
    let bad: Vec<String> = vars
        .into_iter()
        .filter(|x| l.get(x) != Some(&1) || r2.get(x) != Some(&1))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(NonlinearRule {
            rule: r.name.clone(),
            vars: bad,
        })
    }
}

/// The formula of a lexical entry, in the grammar's dialect. First-order
/// entries may mention [`POS_LEFT`] and [`POS_RIGHT`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexFormula {
    Lambek(LambekFormula),
    Multimodal(MMFormula),
    FirstOrder(FoFormula),
}

impl LexFormula {
    pub fn semantic_type(&self, types: &TypeMap) -> Result<SemType, SemanticsError> {
        match self {
            LexFormula::Lambek(f) => types.of_formula(f),
            LexFormula::Multimodal(f) => types.of_formula(f),
            LexFormula::FirstOrder(f) => types.of_fo(f),
        }
    }

    /// Categorial formula with modes erased, if this is not a first-order entry.
    pub fn to_lambek(&self) -> Option<LambekFormula> {
        match self {
            LexFormula::Lambek(f) => Some(f.clone()),
            LexFormula::Multimodal(f) => Some(f.to_lambek()),
            LexFormula::FirstOrder(_) => None,
        }
    }

    /// Instantiates position placeholders (first-order entries only).
    pub fn at_position(&self, left: u32, right: u32) -> LexFormula {
        match self {
            LexFormula::FirstOrder(f) => LexFormula::FirstOrder(
                f.substitute(POS_LEFT, &FoTerm::Const(left))
                    .substitute(POS_RIGHT, &FoTerm::Const(right)),
            ),
            other => other.clone(),
        }
    }
}

impl fmt::Display for LexFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexFormula::Lambek(x) => x.fmt(f),
            LexFormula::Multimodal(x) => x.fmt(f),
            LexFormula::FirstOrder(x) => x.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub word: String,
    pub formula: LexFormula,
    pub term: Option<LambdaTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrammarDialect {
    Lambek,
    Multimodal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    pub atoms: BTreeSet<String>,
    pub modes: BTreeSet<Mode>,
    pub rules: Vec<StructuralRule>,
    pub goals: Vec<LexFormula>,
    pub lexicon: BTreeMap<String, Vec<LexEntry>>,
    pub types: TypeMap,
    /// `sem` statements, kept for printing.
    pub sem_decls: Vec<(String, SemType)>,
}

#[derive(Debug, Error)]
pub enum GrammarError {
    #[error("cannot read grammar: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {kind}")]
    At { line: usize, kind: GrammarErrorKind },
    #[error("grammar declares no goal formula")]
    NoGoal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarErrorKind {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("undeclared atom `{0}`")]
    UndeclaredAtom(String),
    #[error("undeclared mode `{0}`")]
    UndeclaredMode(String),
    #[error(transparent)]
    Nonlinear(#[from] NonlinearRule),
    #[error("lexical term for `{word}`: {source}")]
    Semantics {
        word: String,
        source: SemanticsError,
    },
    #[error("unknown statement `{0}`")]
    UnknownStatement(String),
    #[error("statement not terminated by `.`")]
    Unterminated,
    #[error("`mode` declarations must precede formulas")]
    LateMode,
    #[error("first-order entry may only have free variables {POS_LEFT} and {POS_RIGHT}, found `{0}`")]
    StrayFreeVariable(String),
}

impl Grammar {
    pub fn dialect(&self) -> GrammarDialect {
        if self.modes.is_empty() {
            GrammarDialect::Lambek
        } else {
            GrammarDialect::Multimodal
        }
    }

    /// Entries for `word` (case-sensitive); empty if unknown.
    pub fn lookup(&self, word: &str) -> &[LexEntry] {
        self.lexicon.get(word).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn entry_count(&self) -> usize {
        self.lexicon.values().map(Vec::len).sum()
    }

    pub fn rule(&self, name: &str) -> Option<&StructuralRule> {
        self.rules.iter().find(|r| r.name == name)
    }

    /// Parses a categorial formula in this grammar's dialect and checks it
    /// against the declarations.
    pub fn parse_formula(&self, text: &str) -> Result<LexFormula, GrammarErrorKind> {
        let f = match self.dialect() {
            GrammarDialect::Lambek => LexFormula::Lambek(parse_lambek(text)?),
            GrammarDialect::Multimodal => LexFormula::Multimodal(parse_mm(text)?),
        };
        self.check_formula(&f)?;
        Ok(f)
    }

    fn check_formula(&self, f: &LexFormula) -> Result<(), GrammarErrorKind> {
        fn cat<M: ModeLabel>(g: &Grammar, f: &Formula<M>) -> Result<(), GrammarErrorKind> {
            for a in f.atoms() {
                if !g.atoms.contains(a) {
                    return Err(GrammarErrorKind::UndeclaredAtom(a.to_string()));
                }
            }
            for m in f.labels() {
                let s = m.suffix();
                if !s.is_empty() && !g.modes.contains(&Mode::new(s)) {
                    return Err(GrammarErrorKind::UndeclaredMode(s.to_string()));
                }
            }
            Ok(())
        }
        match f {
            LexFormula::Lambek(f) => cat(self, f),
            LexFormula::Multimodal(f) => cat(self, f),
            LexFormula::FirstOrder(f) => {
                for p in fo_predicates(f) {
                    if !self.atoms.contains(p) {
                        return Err(GrammarErrorKind::UndeclaredAtom(p.to_string()));
                    }
                }
                for v in f.free_vars() {
                    if v != POS_LEFT && v != POS_RIGHT {
                        return Err(GrammarErrorKind::StrayFreeVariable(v));
                    }
                }
                Ok(())
            }
        }
    }
}

fn fo_predicates(f: &FoFormula) -> Vec<&str> {
    match f {
        FoFormula::Atom(p, _) => vec![p],
        FoFormula::Impl(a, b) | FoFormula::Tensor(a, b) => {
            let mut v = fo_predicates(a);
            v.extend(fo_predicates(b));
            v
        }
        FoFormula::Forall(_, b) | FoFormula::Exists(_, b) => fo_predicates(b),
    }
}

pub fn load_grammar(path: impl AsRef<Path>) -> Result<Grammar, GrammarError> {
    let text = std::fs::read_to_string(path)?;
    parse_grammar(&text)
}

/// Splits the text into `(line, statement)` pairs; statements end with a
/// `.` at the end of a line and may span several lines.
fn statements(text: &str) -> Result<Vec<(usize, String)>, GrammarError> {
    let mut out = Vec::new();
    let mut current: Option<(usize, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let entry = current.get_or_insert_with(|| (i + 1, String::new()));
        if !entry.1.is_empty() {
            entry.1.push(' ');
        }
        entry.1.push_str(line);
        if line.ends_with('.') {
            let (n, mut s) = current.take().expect("statement in progress");
            s.pop();
            out.push((n, s));
        }
    }
    if let Some((line, _)) = current {
        return Err(GrammarError::At {
            line,
            kind: GrammarErrorKind::Unterminated,
        });
    }
    Ok(out)
}

pub fn parse_grammar(text: &str) -> Result<Grammar, GrammarError> {
    let mut g = Grammar {
        atoms: BTreeSet::new(),
        modes: BTreeSet::new(),
        rules: Vec::new(),
        goals: Vec::new(),
        lexicon: BTreeMap::new(),
        types: TypeMap::default(),
        sem_decls: Vec::new(),
    };
    let mut seen_formula = false;
    for (line, stmt) in statements(text)? {
        let at = |kind: GrammarErrorKind| GrammarError::At { line, kind };
        let (kw, body) = match stmt.split_once(char::is_whitespace) {
            Some((k, b)) => (k, b.trim()),
            None => (stmt.as_str(), ""),
        };
        match kw {
            "atom" => {
                for a in comma_idents(body).map_err(at)? {
                    g.atoms.insert(a);
                }
            }
            "mode" => {
                if seen_formula {
                    return Err(at(GrammarErrorKind::LateMode));
                }
                for m in comma_idents(body).map_err(at)? {
                    g.modes.insert(Mode::new(m));
                }
            }
            "sem" => {
                let (atom, ty) = body
                    .split_once(':')
                    .ok_or_else(|| at(ParseError::new(0, "expected `atom: type`").into()))?;
                let ty = parse_type(ty).map_err(|e| at(e.into()))?;
                g.types.insert(atom.trim(), ty.clone());
                g.sem_decls.push((atom.trim().to_string(), ty));
            }
            "rule" => {
                let r = parse_rule(body).map_err(|e| at(e.into()))?;
                for m in r.lhs.modes().into_iter().chain(r.rhs.modes()) {
                    if !g.modes.contains(m) {
                        return Err(at(GrammarErrorKind::UndeclaredMode(m.to_string())));
                    }
                }
                validate_rule(&r).map_err(|e| at(e.into()))?;
                seen_formula = true;
                g.rules.push(r);
            }
            "goal" => {
                seen_formula = true;
                for (_, part) in crate::syntax::split_top_level(body, ',') {
                    let f = g.parse_formula(part.trim()).map_err(at)?;
                    g.goals.push(f);
                }
            }
            "lex" | "flex" => {
                seen_formula = true;
                let mut parts = body.splitn(3, ':');
                let word = parts.next().unwrap_or("").trim().to_string();
                let ftext = parts
                    .next()
                    .ok_or_else(|| at(ParseError::new(0, "expected `word : formula`").into()))?;
                let formula = if kw == "lex" {
                    g.parse_formula(ftext.trim()).map_err(at)?
                } else {
                    let f = LexFormula::FirstOrder(parse_foll(ftext.trim()).map_err(|e| at(e.into()))?);
                    g.check_formula(&f).map_err(at)?;
                    f
                };
                if word.is_empty() || word.contains(char::is_whitespace) {
                    return Err(at(ParseError::new(0, "expected a single word").into()));
                }
                let term = match parts.next().map(str::trim).filter(|t| !t.is_empty()) {
                    None => None,
                    Some(t) => {
                        let sem = |source| GrammarErrorKind::Semantics {
                            word: word.clone(),
                            source,
                        };
                        let ty = formula.semantic_type(&g.types).map_err(|e| at(sem(e)))?;
                        Some(parse_lambda(t, Some(&ty)).map_err(|e| at(sem(e)))?)
                    }
                };
                g.lexicon.entry(word.clone()).or_default().push(LexEntry {
                    word,
                    formula,
                    term,
                });
            }
            other => return Err(at(GrammarErrorKind::UnknownStatement(other.to_string()))),
        }
    }
    if g.goals.is_empty() {
        return Err(GrammarError::NoGoal);
    }
    Ok(g)
}

fn comma_idents(body: &str) -> Result<Vec<String>, GrammarErrorKind> {
    let mut out = Vec::new();
    for (off, part) in crate::syntax::split_top_level(body, ',') {
        let mut cur = Cursor::new(part);
        cur.skip_ws();
        let name = cur
            .label_here()
            .ok_or_else(|| ParseError::new(off, "expected an identifier"))?;
        cur.expect_end().map_err(|e| ParseError::new(off + e.position, e.message))?;
        out.push(name.to_string());
    }
    Ok(out)
}

/// Associativity in both directions for one mode. Mode `a` gets the plain
/// names `assL`/`assR`, other modes a `_mode` suffix.
pub fn associativity(mode: &Mode) -> Vec<StructuralRule> {
    let m = mode.as_str();
    let suffix = if m == "a" { String::new() } else { format!("_{m}") };
    [
        format!("assL{suffix}: (x o{m} y) o{m} z => x o{m} (y o{m} z)"),
        format!("assR{suffix}: x o{m} (y o{m} z) => (x o{m} y) o{m} z"),
    ]
    .iter()
    .map(|r| parse_rule(r).expect("well-formed associativity rule"))
    .collect()
}

/// `name: lhs => rhs`
pub fn parse_rule(text: &str) -> Result<StructuralRule, ParseError> {
    let (name, rest) = text
        .split_once(':')
        .ok_or_else(|| ParseError::new(0, "expected `name: lhs => rhs`"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(ParseError::new(0, "missing rule name"));
    }
    let offset = name.len() + 1;
    let (lhs, rhs) = rest
        .split_once("=>")
        .ok_or_else(|| ParseError::new(offset, "expected `=>`"))?;
    let parse_side = |s: &str, off: usize| -> Result<TreePattern, ParseError> {
        let mut cur = Cursor::new(s);
        let p = parse_pattern(&mut cur).and_then(|p| cur.expect_end().map(|_| p));
        p.map_err(|e| ParseError::new(e.position + off, e.message))
    };
    let l = parse_side(lhs, offset)?;
    let r = parse_side(rhs, offset + lhs.len() + 2)?;
    Ok(StructuralRule {
        name: name.to_string(),
        lhs: l,
        rhs: r,
    })
}

fn parse_pattern(cur: &mut Cursor) -> Result<TreePattern, ParseError> {
    let left = parse_pattern_primary(cur)?;
    cur.skip_ws();
    if cur.peek() != Some('o') {
        return Ok(left);
    }
    cur.bump();
    cur.skip_ws();
    let m = cur
        .label_here()
        .ok_or_else(|| cur.error("expected a mode after `o`"))?;
    let m = Mode::new(m);
    let right = parse_pattern_primary(cur)?;
    cur.skip_ws();
    if cur.peek() == Some('o') {
        return Err(cur.error("structural connectives are non-associative; add parentheses"));
    }
    Ok(TreePattern::node(m, left, right))
}

fn parse_pattern_primary(cur: &mut Cursor) -> Result<TreePattern, ParseError> {
    if cur.eat("(") {
        let p = parse_pattern(cur)?;
        cur.expect(")")?;
        return Ok(p);
    }
    cur.ident()
        .map(|x| TreePattern::Leaf(x.to_string()))
        .ok_or_else(|| cur.error("expected a variable or `(`"))
}

impl fmt::Display for Grammar {
    /// Prints the grammar in the file format; loading the output yields an
    /// equal grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<String>| v.join(", ");
        writeln!(f, "atom {}.", join(self.atoms.iter().cloned().collect()))?;
        if !self.modes.is_empty() {
            writeln!(f, "mode {}.", join(self.modes.iter().map(|m| m.to_string()).collect()))?;
        }
        for (a, t) in &self.sem_decls {
            writeln!(f, "sem {a}: {t}.")?;
        }
        for r in &self.rules {
            writeln!(f, "rule {r}.")?;
        }
        writeln!(f, "goal {}.", join(self.goals.iter().map(|g| g.to_string()).collect()))?;
        for entries in self.lexicon.values() {
            for e in entries {
                let kw = if matches!(e.formula, LexFormula::FirstOrder(_)) { "flex" } else { "lex" };
                write!(f, "{kw} {} : {}", e.word, e.formula)?;
                if let Some(t) = &e.term {
                    write!(f, " : {}", t.typed())?;
                }
                writeln!(f, ".")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "
        # tiny grammar
        atom np, n, s.
        mode a.
        rule assL: (x oa y) oa z => x oa (y oa z).
        goal s.
        lex every  : (s /a (np \\a s)) /a n : \\P.\\Q.(forall \\x.((implies (P x)) (Q x))).
        lex student: n : student.
    ";

    fn rule(text: &str) -> StructuralRule {
        parse_rule(text).unwrap()
    }

    #[test]
    fn loads_small_grammar() {
        let g = parse_grammar(SMALL).unwrap();
        assert_eq!(g.entry_count(), 2);
        assert_eq!(g.dialect(), GrammarDialect::Multimodal);
        assert_eq!(g.lookup("every")[0].formula.to_string(), "(s /a (np \\a s)) /a n");
        assert!(g.lookup("zzz").is_empty());
        assert_eq!(g.rules[0].to_string(), "assL: (x oa y) oa z => x oa (y oa z)");
    }

    #[test]
    fn printed_grammar_reloads_equal() {
        let g = parse_grammar(SMALL).unwrap();
        let again = parse_grammar(&g.to_string()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn empty_lexicon() {
        let g = parse_grammar("atom s.\ngoal s.\n").unwrap();
        assert!(g.lookup("anything").is_empty());
        assert!(matches!(parse_grammar("atom s.\n"), Err(GrammarError::NoGoal)));
    }

    #[test]
    fn rule_linearity() {
        assert!(validate_rule(&rule("assL: (x oa y) oa z => x oa (y oa z)")).is_ok());
        let a = associativity(&Mode::new("a"));
        assert_eq!(a[0], rule("assL: (x oa y) oa z => x oa (y oa z)"));
        assert_eq!(a[1].name, "assR");
        assert_eq!(associativity(&Mode::new("b"))[0].name, "assL_b");
        assert!(validate_rule(&rule("mc: (x o0 y) o1 z => (x o1 z) o0 y")).is_ok());
        let err = validate_rule(&rule("copy: x oa y => x oa x")).unwrap_err();
        assert_eq!(err.vars, vec!["x".to_string(), "y".to_string()]);
        let err = validate_rule(&rule("drop: (x oa y) oa z => x oa y")).unwrap_err();
        assert_eq!(err.vars, vec!["z".to_string()]);
        assert!(err.to_string().starts_with("nonlinear structural rule"));
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_grammar("atom s.\ngoal s.\nlex w : np.\n").unwrap_err();
        let GrammarError::At { line, kind } = err else { panic!() };
        assert_eq!(line, 3);
        assert_eq!(kind, GrammarErrorKind::UndeclaredAtom("np".into()));
        let err = parse_grammar("atom s.\ngoal s.\nlex w : s : \\x.x.\n").unwrap_err();
        assert!(matches!(err, GrammarError::At { line: 3, kind: GrammarErrorKind::Semantics { .. } }));
        let err = parse_grammar("atom s.\nmode a.\ngoal s /b s.\n").unwrap_err();
        assert!(matches!(err, GrammarError::At { kind: GrammarErrorKind::UndeclaredMode(_), .. }));
    }

    #[test]
    fn first_order_entries_instantiate_positions() {
        let g = parse_grammar(
            "atom np, s.\ngoal s.\nflex someone : forall y1.forall y2.((np(posleft,posright) -o s(y1,y2)) -o s(y1,y2)) : \\P.(exists \\x.(P x)).\n",
        )
        .unwrap();
        let e = &g.lookup("someone")[0];
        let f = e.formula.at_position(2, 3);
        assert_eq!(f.to_string(), "forall y1.forall y2.((np(2,3) -o s(y1,y2)) -o s(y1,y2))");
        assert!(parse_grammar("atom np, s.\ngoal s.\nflex w : np(q,posright).\n").is_err());
    }
}
