//! Interactive proof construction: a session holds one proof structure that
//! the user completes link by link and then reduces move by move.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fol::{sentence_sequent, CEdge, FoStructure, FolState};
use crate::formula::{parse_fo_sequent, parse_mm_sequent, MMFormula, Mode, Sequent};
use crate::grammar::{Grammar, LexFormula, StructuralRule};
use crate::mm::{
    apply_step, candidates, contract_step, rewrite_step, tensor_tree, unfold_mm, yield_matches,
    LinkKind, MmRule, MmStep, MmStructure, ProveError,
};
use crate::reading::Engine;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("no session {0}")]
    NotFound(u64),
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error("illegal move: {0}")]
    Illegal(String),
}

impl From<ProveError> for SessionError {
    fn from(e: ProveError) -> Self {
        SessionError::BadRequest(e.to_string())
    }
}

/// Body of a session creation request: either `words` (parsed with the
/// server's grammar) or a bare `sequent`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewSession {
    pub words: Option<String>,
    pub sequent: Option<String>,
    pub engine: Option<Engine>,
    pub goal: Option<String>,
    /// Lexical entry per word; the first entry when absent.
    pub entries: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Move {
    Link { neg: usize, pos: usize },
    Contract { rule: String, par: usize, tensor: usize },
    Rewrite { rule: String, root: usize },
}

impl From<MmStep> for Move {
    fn from(s: MmStep) -> Self {
        match s {
            MmStep::Contract { rule, par, tensor } => Move::Contract { rule, par, tensor },
            MmStep::Rewrite { rule, root } => Move::Rewrite { rule, root },
        }
    }
}

#[derive(Debug, Clone)]
enum State {
    Mm {
        ps: MmStructure,
        /// Abstract structure once reduction has started.
        reduced: Option<MmStructure>,
        trace: Vec<MmStep>,
    },
    Fol(Box<FolState>),
}

#[derive(Debug, Clone)]
pub struct Session {
    pub id: u64,
    pub engine: Engine,
    pub words: Vec<String>,
    rules: Vec<StructuralRule>,
    state: State,
    history: Vec<State>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexView {
    pub id: usize,
    pub label: String,
    pub hyp: Option<usize>,
    pub conc: bool,
    pub freevars: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkView {
    pub id: usize,
    pub kind: String,
    pub rule: Option<String>,
    pub mode: Option<String>,
    pub premisses: Vec<usize>,
    pub conclusions: Vec<usize>,
    pub arrow: Option<usize>,
    pub eigenvar: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureView {
    pub vertices: Vec<VertexView>,
    pub links: Vec<LinkView>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphView {
    pub vertices: BTreeMap<usize, BTreeSet<String>>,
    pub edges: Vec<CEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SessionView {
    pub id: u64,
    pub engine: Engine,
    pub words: Vec<String>,
    pub sequent: String,
    pub complete: bool,
    /// The structure has been reduced to a proof of the sequent.
    pub done: bool,
    pub structure: StructureView,
    pub graph: Option<GraphView>,
    pub trace: Vec<String>,
    pub moves: Vec<Move>,
}

fn mm_view(ps: &MmStructure) -> StructureView {
    StructureView {
        vertices: ps
            .vertices
            .iter()
            .map(|(&id, v)| VertexView {
                id,
                label: v.formula.as_ref().map(|f| f.to_string()).unwrap_or_default(),
                hyp: v.hyp,
                conc: v.conc,
                freevars: BTreeSet::new(),
            })
            .collect(),
        links: ps
            .links
            .iter()
            .map(|(&id, l)| LinkView {
                id,
                kind: if l.kind == LinkKind::Par { "par" } else { "tensor" }.into(),
                rule: l.rule.map(|r| MmRule::name(r).to_string()),
                mode: Some(l.mode.to_string()),
                premisses: l.premisses.clone(),
                conclusions: l.conclusions.clone(),
                arrow: l.arrow,
                eigenvar: None,
            })
            .collect(),
    }
}

fn fol_view(ps: &FoStructure) -> StructureView {
    StructureView {
        vertices: ps
            .occs
            .iter()
            .enumerate()
            .map(|(id, o)| VertexView {
                id,
                label: ps.formula(id).to_string(),
                hyp: o.hyp,
                conc: o.conc,
                freevars: ps.free_vars(id),
            })
            .collect(),
        links: ps
            .links
            .iter()
            .enumerate()
            .map(|(id, l)| LinkView {
                id,
                kind: format!("{:?}", l.rule.kind()).to_lowercase(),
                rule: Some(l.rule.name().to_string()),
                mode: None,
                premisses: l.premisses.clone(),
                conclusions: l.conclusions.clone(),
                arrow: None,
                eigenvar: l.var.clone(),
            })
            .collect(),
    }
}

impl Session {
    pub fn new(id: u64, req: &NewSession, grammar: Option<&Grammar>) -> Result<Self, SessionError> {
        let engine = req.engine.unwrap_or(Engine::Mm);
        let bad = |m: String| SessionError::BadRequest(m);
        let (words, state) = match (&req.words, &req.sequent) {
            (Some(_), Some(_)) | (None, None) => {
                return Err(bad("give exactly one of `words` and `sequent`".into()))
            }
            (None, Some(text)) => {
                let state = match engine {
                    Engine::Mm => {
                        let s = parse_mm_sequent(text).map_err(|e| bad(e.to_string()))?;
                        mm_state(&s)
                    }
                    Engine::Fol => {
                        let s = parse_fo_sequent(text).map_err(|e| bad(e.to_string()))?;
                        State::Fol(Box::new(FolState::new(&s)))
                    }
                };
                (Vec::new(), state)
            }
            (Some(text), None) => {
                let g = grammar.ok_or_else(|| bad("the server has no grammar".into()))?;
                let words: Vec<String> = text.split_whitespace().map(str::to_string).collect();
                if words.is_empty() {
                    return Err(bad("no words".into()));
                }
                let formulas = choose_entries(g, &words, req.entries.as_deref())?;
                let goal = match &req.goal {
                    Some(t) => g.parse_formula(t).map_err(|e| bad(e.to_string()))?,
                    None => g.goals.first().cloned().ok_or_else(|| bad("the grammar has no goal".into()))?,
                };
                let state = match engine {
                    Engine::Mm => {
                        let as_mm = |f: &LexFormula| match f {
                            LexFormula::Multimodal(m) => Ok(m.clone()),
                            other => Err(bad(format!("`{other}` is not a multimodal formula"))),
                        };
                        let antecedent: Vec<MMFormula> =
                            formulas.iter().map(as_mm).collect::<Result<_, _>>()?;
                        mm_state(&Sequent {
                            antecedent,
                            succedent: as_mm(&goal)?,
                        })
                    }
                    Engine::Fol => {
                        let s = sentence_sequent(&formulas, &goal)?;
                        State::Fol(Box::new(FolState::new(&s)))
                    }
                };
                (words, state)
            }
        };
        Ok(Session {
            id,
            engine,
            words,
            rules: grammar.map(|g| g.rules.clone()).unwrap_or_default(),
            state,
            history: Vec::new(),
        })
    }

    /// Moves available now: axiom links while atoms are unlinked, then
    /// contractions and structural rewrites (multimodal engine).
    pub fn moves(&self) -> Vec<Move> {
        match &self.state {
            State::Mm { ps, reduced: None, .. } if !ps.is_complete() => candidates(ps, false)
                .into_iter()
                .filter(|(v, _)| ps.unmatched_negative().contains(v))
                .flat_map(|(neg, ps)| ps.into_iter().map(move |pos| Move::Link { neg, pos }))
                .collect(),
            State::Mm { ps, reduced, .. } => {
                let aps = reduced.clone().unwrap_or_else(|| ps.to_abstract());
                contract_step(&aps)
                    .into_iter()
                    .chain(rewrite_step(&aps, &self.rules))
                    .map(|(s, _)| s.into())
                    .collect()
            }
            State::Fol(st) => {
                let mut out = Vec::new();
                for (o, partners) in st.options() {
                    for (p, _) in partners {
                        let neg_first = st.ps.occs[o].polarity == crate::formula::Polarity::Negative;
                        let (neg, pos) = if neg_first { (o, p) } else { (p, o) };
                        let m = Move::Link { neg, pos };
                        if !out.contains(&m) {
                            out.push(m);
                        }
                    }
                }
                out
            }
        }
    }

    pub fn apply(&mut self, m: &Move) -> Result<(), SessionError> {
        let illegal = |e: String| SessionError::Illegal(e);
        let next = match (&self.state, m) {
            (State::Mm { ps, reduced: None, trace }, Move::Link { neg, pos }) => {
                let mut ps = ps.clone();
                ps.link_atoms(*neg, *pos).map_err(|e| illegal(e.to_string()))?;
                State::Mm { ps, reduced: None, trace: trace.clone() }
            }
            (State::Mm { .. }, Move::Link { .. }) => {
                return Err(illegal("reduction has started; undo to relink".into()))
            }
            (State::Mm { ps, reduced, trace }, step) => {
                if !ps.is_complete() {
                    return Err(illegal("link every atom before reducing".into()));
                }
                let step = match step.clone() {
                    Move::Contract { rule, par, tensor } => MmStep::Contract { rule, par, tensor },
                    Move::Rewrite { rule, root } => MmStep::Rewrite { rule, root },
                    Move::Link { .. } => unreachable!("handled above"),
                };
                let aps = reduced.clone().unwrap_or_else(|| ps.to_abstract());
                let out = apply_step(&aps, &step, &self.rules).map_err(|e| illegal(e.to_string()))?;
                let mut trace = trace.clone();
                trace.push(step);
                State::Mm { ps: ps.clone(), reduced: Some(out), trace }
            }
            (State::Fol(st), Move::Link { neg, pos }) => {
                State::Fol(Box::new(st.link(*neg, *pos).map_err(|e| illegal(e.to_string()))?))
            }
            (State::Fol(_), _) => {
                return Err(illegal("the first-order engine contracts automatically".into()))
            }
        };
        self.history.push(std::mem::replace(&mut self.state, next));
        Ok(())
    }

    pub fn undo(&mut self) -> Result<(), SessionError> {
        self.state = self
            .history
            .pop()
            .ok_or_else(|| SessionError::Illegal("nothing to undo".into()))?;
        Ok(())
    }

    pub fn view(&self) -> SessionView {
        let (sequent, complete, done, structure, graph, trace) = match &self.state {
            State::Mm { ps, reduced, trace } => {
                let shown = reduced.as_ref().unwrap_or(ps);
                let done = ps.is_complete()
                    && tensor_tree(reduced.as_ref().unwrap_or(&ps.to_abstract()))
                        .is_some_and(|t| yield_matches(&t, ps.sequent.antecedent.len()));
                (
                    ps.sequent.to_string(),
                    ps.is_complete(),
                    done,
                    mm_view(shown),
                    None,
                    trace.iter().map(|s| s.to_string()).collect(),
                )
            }
            State::Fol(st) => (
                st.ps.sequent.to_string(),
                st.ps.is_complete(),
                st.ps.is_complete() && st.graph.is_single_vertex(),
                fol_view(&st.ps),
                Some(GraphView {
                    vertices: st.graph.vertices.clone(),
                    edges: st.graph.edges.clone(),
                }),
                Vec::new(),
            ),
        };
        SessionView {
            id: self.id,
            engine: self.engine,
            words: self.words.clone(),
            sequent,
            complete,
            done,
            structure,
            graph,
            trace,
            moves: self.moves(),
        }
    }
}

fn mm_state(s: &Sequent<Mode>) -> State {
    State::Mm {
        ps: unfold_mm(s),
        reduced: None,
        trace: Vec::new(),
    }
}

fn choose_entries(
    g: &Grammar,
    words: &[String],
    entries: Option<&[usize]>,
) -> Result<Vec<LexFormula>, SessionError> {
    if entries.is_some_and(|e| e.len() != words.len()) {
        return Err(SessionError::BadRequest("one entry index per word".into()));
    }
    words
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let es = g.lookup(w);
            if es.is_empty() {
                return Err(ProveError::UnknownWord(w.clone()).into());
            }
            let k = entries.map_or(0, |e| e[i]);
            es.get(k)
                .map(|e| e.formula.clone())
                .ok_or_else(|| SessionError::BadRequest(format!("`{w}` has no entry {k}")))
        })
        .collect()
}

/// All sessions of a server.
#[derive(Debug, Default)]
pub struct SessionStore {
    next: u64,
    sessions: BTreeMap<u64, Session>,
}

impl SessionStore {
    pub fn new() -> Self {
        SessionStore::default()
    }

    pub fn create(&mut self, req: &NewSession, g: Option<&Grammar>) -> Result<SessionView, SessionError> {
        let s = Session::new(self.next + 1, req, g)?;
        self.next += 1;
        let view = s.view();
        self.sessions.insert(s.id, s);
        Ok(view)
    }

    pub fn get(&self, id: u64) -> Result<&Session, SessionError> {
        self.sessions.get(&id).ok_or(SessionError::NotFound(id))
    }

    pub fn get_mut(&mut self, id: u64) -> Result<&mut Session, SessionError> {
        self.sessions.get_mut(&id).ok_or(SessionError::NotFound(id))
    }

    pub fn len(&self) -> usize {
        self.sessions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sessions.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;

    fn seq(s: &str, engine: Engine) -> NewSession {
        NewSession {
            sequent: Some(s.into()),
            engine: Some(engine),
            ..NewSession::default()
        }
    }

    #[test]
    fn mm_session_links_then_contracts() {
        let mut store = SessionStore::new();
        let v = store.create(&seq("a /a b, b |- a", Engine::Mm), None).unwrap();
        assert!(!v.complete);
        let s = store.get_mut(v.id).unwrap();
        while let Some(m) = s.moves().into_iter().next() {
            s.apply(&m).unwrap();
        }
        let v = s.view();
        assert!(v.complete);
        assert!(v.done);
    }

    #[test]
    fn undo_restores() {
        let mut s = Session::new(1, &seq("a |- a", Engine::Mm), None).unwrap();
        let before = s.view();
        let m = s.moves()[0].clone();
        s.apply(&m).unwrap();
        assert_ne!(s.view(), before);
        s.undo().unwrap();
        assert_eq!(s.view(), before);
        assert!(s.undo().is_err());
    }

    #[test]
    fn fol_session_gets_stuck_on_the_quantifier_shift() {
        let s = Session::new(1, &seq("a -o exists x.b(x) |- exists y.(a -o b(y))", Engine::Fol), None)
            .unwrap();
        let first = s.moves();
        assert_eq!(first.len(), 2);
        for m in first {
            let mut t = s.clone();
            t.apply(&m).unwrap();
            assert!(t.moves().is_empty());
            assert!(!t.view().complete);
        }
    }

    #[test]
    fn words_need_a_grammar_and_known_words() {
        let req = NewSession {
            words: Some("x".into()),
            ..NewSession::default()
        };
        assert!(matches!(Session::new(1, &req, None), Err(SessionError::BadRequest(_))));
        let g = parse_grammar("atom np, s.\nmode a.\ngoal s.\nlex x : np.\n").unwrap();
        assert!(Session::new(1, &req, Some(&g)).is_ok());
        let req = NewSession {
            words: Some("y".into()),
            ..NewSession::default()
        };
        assert!(Session::new(1, &req, Some(&g)).is_err());
    }
}
