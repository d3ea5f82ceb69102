//! The batch subcommands. Each one returns the text to print and the exit
//! code instead of printing, so the binary stays a thin shell.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use tlg_core::dot::{fol_to_dot, graph_to_dot, mm_to_dot};
use tlg_core::fol::{
    complete_structures, is_fol_proofnet, prove_fol_sequent, sentence_sequent, switching_oracle,
    to_contraction_graph, FolOptions, FolProof, OracleError, DEFAULT_SWITCHING_CAP,
};
use tlg_core::formula::parse_lambek_sequent;
use tlg_core::grammar::{associativity, Grammar, GrammarError, LexFormula, StructuralRule};
use tlg_core::mm::{
    apply_step, enumerate_matchings, is_mm_proofnet, prove_mm_sequent, unfold_mm, MmOptions,
    MmProof, MmStep, DEFAULT_REWRITE_BUDGET,
};
use tlg_core::nd::{
    curry_howard, deep_from_fol, deep_from_mm, fo_display, mm_display, sequentialize_fol,
    sequentialize_mm, DisplayTree, NdError,
};
use tlg_core::reading::{parse_sentence, AnyProof, Engine, ParseOptions, Reading, ReadingError};
use tlg_core::semantics::{SemType, TypeMap};
use tlg_core::translate::{translate_sequent, PositionedEntry, TranslateError};
use tlg_core::{parse_fo_sequent, FoSequent, MillFormula, Mode, ParseError, Sequent};

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_NONE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Reading(#[from] ReadingError),
    #[error(transparent)]
    Nd(#[from] NdError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    Count,
    NdText,
    NdLatex,
    Dot,
    #[default]
    Sem,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Stage {
    /// The unfolded sequent, no axiom links.
    Unfolded,
    /// The first proof net, or the first complete structure if there is none.
    #[default]
    Net,
    /// That structure after exhaustive contraction.
    Contracted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub engine: Engine,
    /// `none`, `all`, or a comma-separated list of rule names and `ass`.
    pub rules: Option<String>,
    pub format: Format,
    pub max_proofs: Option<usize>,
    pub rewrite_budget: usize,
    pub goal: Option<String>,
    pub oracle: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            engine: Engine::Mm,
            rules: None,
            format: Format::default(),
            max_proofs: None,
            rewrite_budget: DEFAULT_REWRITE_BUDGET,
            goal: None,
            oracle: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReadingReport {
    pub id: usize,
    pub combination: usize,
    pub entries: Vec<usize>,
    pub goal: String,
    pub matching: Vec<(usize, usize)>,
    /// Contraction and rewrite steps (multimodal engine only).
    pub trace: Vec<String>,
    pub term: Option<String>,
    pub semantics: Option<String>,
    pub nd: String,
    #[serde(skip)]
    pub nd_latex: String,
    #[serde(skip)]
    pub dot: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub method: &'static str,
    pub structures: usize,
    pub nets: usize,
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub engine: Engine,
    pub input: String,
    pub count: usize,
    pub budget_exhausted: bool,
    pub readings: Vec<ReadingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn code(&self) -> i32 {
        if self.oracle.as_ref().is_some_and(|o| !o.agrees) {
            EXIT_ERROR
        } else if self.count > 0 {
            EXIT_FOUND
        } else if self.budget_exhausted {
            EXIT_BUDGET
        } else {
            EXIT_NONE
        }
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Count => out.push_str(&format!("{}\n", self.count)),
            Format::Json => {
                out.push_str(&serde_json::to_string_pretty(self).expect("report serializes"));
                out.push('\n');
            }
            _ => {
                out.push_str(&self.headline());
                out.push('\n');
                for r in &self.readings {
                    out.push_str(&self.render_reading(r, format));
                }
                if let Some(o) = &self.oracle {
                    out.push_str(&format!(
                        "oracle ({}): {} of {} complete structures are nets, {}\n",
                        o.method,
                        o.nets,
                        o.structures,
                        if o.agrees { "agrees" } else { "DISAGREES" }
                    ));
                }
            }
        }
        out
    }

    fn headline(&self) -> String {
        let undecided = if self.budget_exhausted { " (rewrite budget exhausted)" } else { "" };
        match self.command {
            "prove" if self.count > 0 => format!("derivable: {} proof net(s){undecided}", self.count),
            "prove" if self.budget_exhausted => format!("undecided{undecided}"),
            "prove" => "underivable".to_string(),
            _ => format!("{} reading(s){undecided}", self.count),
        }
    }

    fn render_reading(&self, r: &ReadingReport, format: Format) -> String {
        let head = format!("reading {} (goal {}, entries {:?})\n", r.id, r.goal, r.entries);
        match format {
            Format::NdText => format!("{head}{}\n", r.nd),
            Format::NdLatex => format!("% {head}{}\n", r.nd_latex),
            Format::Dot => format!("// {head}{}", r.dot),
            _ => {
                let mut s = head;
                if !r.trace.is_empty() {
                    s.push_str(&format!("  trace: {}\n", r.trace.join(", ")));
                }
                if let Some(t) = &r.term {
                    s.push_str(&format!("  term: {t}\n"));
                }
                if let Some(t) = &r.semantics {
                    s.push_str(&format!("  semantics: {t}\n"));
                }
                s
            }
        }
    }
}

fn trace_text(trace: &[MmStep]) -> Vec<String> {
    trace
        .iter()
        .map(|s| match s {
            MmStep::Contract { rule, .. } => format!("{rule} contraction"),
            MmStep::Rewrite { rule, .. } => format!("{rule} rewrite"),
        })
        .collect()
}

/// Resolves `--rules`. Without the flag the grammar's rules apply.
pub fn resolve_rules(
    spec: Option<&str>,
    grammar: Option<&Grammar>,
    modes: &BTreeSet<Mode>,
) -> Result<Vec<StructuralRule>, CliError> {
    let from_grammar = || grammar.map(|g| g.rules.clone()).unwrap_or_default();
    let Some(spec) = spec else {
        return Ok(from_grammar());
    };
    match spec.trim() {
        "none" | "" => return Ok(Vec::new()),
        "all" => return Ok(from_grammar()),
        _ => {}
    }
    let mut out: Vec<StructuralRule> = Vec::new();
    for name in spec.split(',').map(str::trim).filter(|n| !n.is_empty()) {
        if name == "ass" {
            let modes: Vec<Mode> = if modes.is_empty() {
                vec![Mode::new("a")]
            } else {
                modes.iter().cloned().collect()
            };
            for m in &modes {
                out.extend(associativity(m));
            }
            continue;
        }
        let rule = grammar
            .and_then(|g| g.rule(name))
            .ok_or_else(|| CliError::Usage(format!("unknown structural rule `{name}`")))?;
        out.push(rule.clone());
    }
    Ok(out)
}

fn sequent_modes(s: &Sequent<Mode>) -> BTreeSet<Mode> {
    s.antecedent
        .iter()
        .chain(std::iter::once(&s.succedent))
        .flat_map(|f| f.labels().into_iter().cloned())
        .collect()
}

/// Types for bare sequents: known atoms keep their usual type, others are
/// individuals.
fn types_for(atoms: impl IntoIterator<Item = String>) -> TypeMap {
    let mut t = TypeMap::default();
    for a in atoms {
        if t.get(&a).is_none() {
            t.insert(a, SemType::E);
        }
    }
    t
}

fn mill_atoms(f: &MillFormula, out: &mut BTreeSet<String>) {
    match f {
        MillFormula::Atom(p) => {
            out.insert(p.clone());
        }
        MillFormula::Lolli(a, b) | MillFormula::Tensor(a, b) => {
            mill_atoms(a, out);
            mill_atoms(b, out);
        }
    }
}

fn fo_types(s: &FoSequent) -> TypeMap {
    let mut atoms = BTreeSet::new();
    for f in s.antecedent.iter().chain(std::iter::once(&s.succedent)) {
        mill_atoms(&f.into(), &mut atoms);
    }
    types_for(atoms)
}

fn mm_types(s: &Sequent<Mode>) -> TypeMap {
    types_for(
        s.antecedent
            .iter()
            .chain(std::iter::once(&s.succedent))
            .flat_map(|f| f.atoms().into_iter().map(str::to_string)),
    )
}

fn tex_tree(t: &DisplayTree) -> String {
    t.to_latex()
}

fn words_of(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_string).collect()
}

fn reading_report(id: usize, r: &Reading, words: &[String]) -> ReadingReport {
    let (goal, matching, trace, dot) = match &r.proof {
        AnyProof::Mm(p) => (
            p.sequent.succedent.to_string(),
            p.matching.clone(),
            trace_text(&p.trace),
            mm_to_dot(&p.structure, words),
        ),
        AnyProof::Fol(p) => (
            p.sequent.succedent.to_string(),
            p.matching.clone(),
            Vec::new(),
            fol_to_dot(&p.structure, words),
        ),
    };
    ReadingReport {
        id,
        combination: match &r.proof {
            AnyProof::Mm(p) => p.combination,
            AnyProof::Fol(p) => p.combination,
        },
        entries: r.proof.entries().to_vec(),
        goal,
        matching,
        trace,
        term: Some(r.term.to_string()),
        semantics: Some(r.hol.clone()),
        nd: r.nd.to_text(),
        nd_latex: tex_tree(&r.nd),
        dot,
    }
}

/// `tlg parse`: every reading of a sentence under the grammar.
pub fn parse(g: &Grammar, sentence: &str, opts: &Options) -> Result<Output, CliError> {
    let start = Instant::now();
    let words = words_of(sentence);
    if words.is_empty() {
        return Err(CliError::Usage("no words to parse".into()));
    }
    let mut g = g.clone();
    g.rules = resolve_rules(opts.rules.as_deref(), Some(&g), &g.modes)?;
    let goal = opts
        .goal
        .as_deref()
        .map(|t| g.parse_formula(t).map_err(|e| CliError::Usage(e.to_string())))
        .transpose()?;
    let refs: Vec<&str> = words.iter().map(String::as_str).collect();
    let po = ParseOptions {
        max_proofs: opts.max_proofs,
        rewrite_budget: opts.rewrite_budget,
    };
    let outcome = parse_sentence(&g, &refs, opts.engine, goal.as_ref(), &po)?;
    let readings: Vec<ReadingReport> = outcome
        .readings
        .iter()
        .enumerate()
        .map(|(i, r)| reading_report(i, r, &words))
        .collect();
    let report = Report {
        command: "parse",
        engine: opts.engine,
        input: sentence.trim().to_string(),
        count: readings.len(),
        budget_exhausted: outcome.budget_exhausted,
        readings,
        oracle: None,
        elapsed_ms: start.elapsed().as_millis(),
    };
    Ok(Output {
        text: report.render(opts.format),
        code: report.code(),
    })
}

/// A sequent for the first-order engine: first-order syntax, or a Lambek
/// sequent put through the translation.
pub fn fo_sequent(text: &str) -> Result<FoSequent, CliError> {
    match parse_fo_sequent(text) {
        Ok(s) => Ok(s),
        Err(fo_err) => {
            let Ok(l) = parse_lambek_sequent(text) else {
                return Err(fo_err.into());
            };
            let entries: Vec<PositionedEntry> = l
                .antecedent
                .iter()
                .enumerate()
                .map(|(i, f)| PositionedEntry::at_word(LexFormula::Lambek(f.clone()), i))
                .collect();
            Ok(translate_sequent(&entries, &l.succedent)?)
        }
    }
}

fn mm_proof_report(id: usize, p: &MmProof, rules: &[StructuralRule]) -> Result<ReadingReport, CliError> {
    let nd = sequentialize_mm(p, rules)?;
    let term = curry_howard(&deep_from_mm(&nd), &mm_types(&p.sequent)).ok();
    let tree = mm_display(&nd, &p.sequent.antecedent, &[]);
    Ok(ReadingReport {
        id,
        combination: p.combination,
        entries: p.entries.clone(),
        goal: p.sequent.succedent.to_string(),
        matching: p.matching.clone(),
        trace: trace_text(&p.trace),
        term: term.map(|t| t.to_string()),
        semantics: None,
        nd: tree.to_text(),
        nd_latex: tex_tree(&tree),
        dot: mm_to_dot(&p.structure, &[]),
    })
}

fn fol_proof_report(id: usize, p: &FolProof) -> Result<ReadingReport, CliError> {
    let nd = sequentialize_fol(p)?;
    let term = curry_howard(&deep_from_fol(&nd), &fo_types(&p.sequent)).ok();
    let tree = fo_display(&nd, &[]);
    Ok(ReadingReport {
        id,
        combination: p.combination,
        entries: p.entries.clone(),
        goal: p.sequent.succedent.to_string(),
        matching: p.matching.clone(),
        trace: Vec::new(),
        term: term.map(|t| t.to_string()),
        semantics: None,
        nd: tree.to_text(),
        nd_latex: tex_tree(&tree),
        dot: fol_to_dot(&p.structure, &[]),
    })
}

/// Naive enumerate-then-check for the multimodal engine.
fn mm_oracle(s: &Sequent<Mode>, rules: &[StructuralRule], budget: usize, found: usize) -> OracleReport {
    let all = enumerate_matchings(&unfold_mm(s), false);
    let nets = all
        .iter()
        .filter(|(ps, _)| is_mm_proofnet(ps, rules, budget).is_net())
        .count();
    OracleReport {
        method: "naive enumeration",
        structures: all.len(),
        nets,
        agrees: nets == found,
    }
}

fn fol_oracle(s: &FoSequent, found: usize) -> Result<OracleReport, CliError> {
    let all = complete_structures(s);
    let mut nets = 0;
    for ps in &all {
        let mut ps = ps.clone();
        ps.ground();
        if switching_oracle(&ps, DEFAULT_SWITCHING_CAP)?.is_none() {
            nets += 1;
        }
    }
    Ok(OracleReport {
        method: "switching",
        structures: all.len(),
        nets,
        agrees: nets == found,
    })
}

/// `tlg prove`: derivability of a bare sequent.
pub fn prove(sequent: &str, grammar: Option<&Grammar>, opts: &Options) -> Result<Output, CliError> {
    let start = Instant::now();
    let (readings, budget_exhausted, oracle) = match opts.engine {
        Engine::Mm => {
            let s = tlg_core::formula::parse_mm_sequent(sequent)?;
            let rules = resolve_rules(opts.rules.as_deref(), grammar, &sequent_modes(&s))?;
            let mo = MmOptions {
                rewrite_budget: opts.rewrite_budget,
                max_proofs: opts.max_proofs,
                ..MmOptions::default()
            };
            let search = prove_mm_sequent(&s, &rules, &mo);
            let readings = search
                .proofs
                .iter()
                .enumerate()
                .map(|(i, p)| mm_proof_report(i, p, &rules))
                .collect::<Result<Vec<_>, _>>()?;
            let oracle = (opts.oracle && opts.max_proofs.is_none())
                .then(|| mm_oracle(&s, &rules, opts.rewrite_budget, readings.len()));
            (readings, search.budget_exhausted, oracle)
        }
        Engine::Fol => {
            let s = fo_sequent(sequent)?;
            let fo = FolOptions {
                max_proofs: opts.max_proofs,
                ..FolOptions::default()
            };
            let proofs = prove_fol_sequent(&s, &fo);
            let readings = proofs
                .iter()
                .enumerate()
                .map(|(i, p)| fol_proof_report(i, p))
                .collect::<Result<Vec<_>, _>>()?;
            let oracle = if opts.oracle && opts.max_proofs.is_none() {
                Some(fol_oracle(&s, readings.len())?)
            } else {
                None
            };
            (readings, false, oracle)
        }
    };
    let report = Report {
        command: "prove",
        engine: opts.engine,
        input: sequent.trim().to_string(),
        count: readings.len(),
        budget_exhausted,
        readings,
        oracle,
        elapsed_ms: start.elapsed().as_millis(),
    };
    Ok(Output {
        text: report.render(opts.format),
        code: report.code(),
    })
}

/// A sequent given directly (it contains `|-`) or built from words with
/// their first lexical entries and the first goal.
enum Input {
    Mm(Sequent<Mode>),
    Fol(FoSequent),
}

fn input(text: &str, grammar: Option<&Grammar>, opts: &Options) -> Result<(Input, Vec<String>), CliError> {
    if text.contains("|-") {
        let i = match opts.engine {
            Engine::Mm => Input::Mm(tlg_core::formula::parse_mm_sequent(text)?),
            Engine::Fol => Input::Fol(fo_sequent(text)?),
        };
        return Ok((i, Vec::new()));
    }
    let g = grammar.ok_or_else(|| CliError::Usage("words need a --grammar".into()))?;
    let words = words_of(text);
    let mut formulas = Vec::new();
    for w in &words {
        let e = g
            .lookup(w)
            .first()
            .ok_or_else(|| CliError::Usage(format!("unknown word `{w}`")))?;
        formulas.push(e.formula.clone());
    }
    let goal = match &opts.goal {
        Some(t) => g.parse_formula(t).map_err(|e| CliError::Usage(e.to_string()))?,
        None => g
            .goals
            .first()
            .cloned()
            .ok_or_else(|| CliError::Usage("the grammar has no goal".into()))?,
    };
    let i = match opts.engine {
        Engine::Mm => {
            let mm = |f: &LexFormula| match f {
                LexFormula::Multimodal(m) => Ok(m.clone()),
                other => Err(CliError::Usage(format!("`{other}` is not a multimodal formula"))),
            };
            Input::Mm(Sequent {
                antecedent: formulas.iter().map(mm).collect::<Result<_, _>>()?,
                succedent: mm(&goal)?,
            })
        }
        Engine::Fol => Input::Fol(
            sentence_sequent(&formulas, &goal).map_err(|e| CliError::Usage(e.to_string()))?,
        ),
    };
    Ok((i, words))
}

/// `tlg oracle`: checks every complete structure with both the engine's
/// criterion and the independent one, one line per structure.
pub fn oracle(text: &str, grammar: Option<&Grammar>, opts: &Options) -> Result<Output, CliError> {
    let (inp, _) = input(text, grammar, opts)?;
    let mut out = String::new();
    let mut disagreements = 0;
    let mut total = 0;
    match inp {
        Input::Fol(s) => {
            for ps in complete_structures(&s) {
                let mut ps = ps;
                ps.ground();
                let contraction = is_fol_proofnet(&ps);
                let verdict = match switching_oracle(&ps, DEFAULT_SWITCHING_CAP)? {
                    None => "acyclic and connected".to_string(),
                    Some(c) if c.cyclic => format!("cyclic (switching {:?})", c.switching),
                    Some(c) => format!("disconnected (switching {:?})", c.switching),
                };
                total += 1;
                let switching = verdict.starts_with("acyclic");
                if switching != contraction {
                    disagreements += 1;
                }
                out.push_str(&format!(
                    "{:?}: contraction {}, switching {verdict}\n",
                    ps.matching(),
                    if contraction { "net" } else { "stuck" },
                ));
            }
        }
        Input::Mm(s) => {
            let rules = resolve_rules(opts.rules.as_deref(), grammar, &sequent_modes(&s))?;
            let kept: BTreeSet<_> = enumerate_matchings(&unfold_mm(&s), true)
                .into_iter()
                .map(|(_, m)| m)
                .collect();
            for (ps, m) in enumerate_matchings(&unfold_mm(&s), false) {
                let check = is_mm_proofnet(&ps, &rules, opts.rewrite_budget);
                let filtered = !kept.contains(&m);
                total += 1;
                if check.is_net() && filtered {
                    disagreements += 1;
                }
                out.push_str(&format!(
                    "{m:?}: {}, {}\n",
                    match check {
                        tlg_core::mm::NetCheck::Net { .. } => "net",
                        tlg_core::mm::NetCheck::NotNet => "not a net",
                        tlg_core::mm::NetCheck::BudgetExceeded => "budget exhausted",
                    },
                    if filtered { "pruned by the filter" } else { "kept by the filter" },
                ));
            }
        }
    }
    out.push_str(&format!(
        "{total} complete structure(s), {disagreements} disagreement(s)\n"
    ));
    Ok(Output {
        text: out,
        code: if disagreements == 0 { EXIT_FOUND } else { EXIT_NONE },
    })
}

/// `tlg export-dot`: Graphviz for the unfolded sequent, the first proof net
/// (or first complete structure) or its contracted form.
pub fn export_dot(
    text: &str,
    grammar: Option<&Grammar>,
    opts: &Options,
    stage: Stage,
) -> Result<Output, CliError> {
    let (inp, words) = input(text, grammar, opts)?;
    let dot = match inp {
        Input::Mm(s) => {
            let rules = resolve_rules(opts.rules.as_deref(), grammar, &sequent_modes(&s))?;
            let unfolded = unfold_mm(&s);
            if stage == Stage::Unfolded {
                mm_to_dot(&unfolded, &words)
            } else {
                let mo = MmOptions {
                    rewrite_budget: opts.rewrite_budget,
                    max_proofs: Some(1),
                    ..MmOptions::default()
                };
                let net = prove_mm_sequent(&s, &rules, &mo).proofs.into_iter().next();
                let (ps, trace) = match net {
                    Some(p) => (p.structure, p.trace),
                    None => match enumerate_matchings(&unfolded, false).into_iter().next() {
                        Some((ps, _)) => (ps, Vec::new()),
                        None => (unfolded, Vec::new()),
                    },
                };
                match stage {
                    Stage::Contracted => {
                        let mut aps = ps.to_abstract();
                        for step in &trace {
                            aps = apply_step(&aps, step, &rules)
                                .map_err(|e| CliError::Usage(e.to_string()))?;
                        }
                        mm_to_dot(&aps, &words)
                    }
                    _ => mm_to_dot(&ps, &words),
                }
            }
        }
        Input::Fol(s) => {
            let unfolded = tlg_core::fol::unfold_fol(&s);
            if stage == Stage::Unfolded {
                fol_to_dot(&unfolded, &words)
            } else {
                let fo = FolOptions {
                    max_proofs: Some(1),
                    ..FolOptions::default()
                };
                let ps = match prove_fol_sequent(&s, &fo).into_iter().next() {
                    Some(p) => p.structure,
                    None => match complete_structures(&s).into_iter().next() {
                        Some(mut ps) => {
                            ps.ground();
                            ps
                        }
                        None => unfolded,
                    },
                };
                match stage {
                    Stage::Contracted => {
                        let mut g = to_contraction_graph(&ps);
                        g.contract();
                        graph_to_dot(&g)
                    }
                    _ => fol_to_dot(&ps, &words),
                }
            }
        }
    };
    Ok(Output {
        text: dot,
        code: EXIT_FOUND,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tlg_core::grammar::parse_grammar;

    fn modes(ms: &[&str]) -> BTreeSet<Mode> {
        ms.iter().map(|m| Mode::new(*m)).collect()
    }

    #[test]
    fn rule_lists() {
        let g = parse_grammar("atom a.\nmode a.\nrule swap: x oa y => y oa x.\ngoal a.\n").unwrap();
        assert!(resolve_rules(Some("none"), Some(&g), &modes(&[])).unwrap().is_empty());
        assert_eq!(resolve_rules(None, Some(&g), &modes(&[])).unwrap().len(), 1);
        assert!(resolve_rules(None, None, &modes(&["a"])).unwrap().is_empty());
        let names: Vec<String> = resolve_rules(Some("ass,swap"), Some(&g), &modes(&["a"]))
            .unwrap()
            .into_iter()
            .map(|r| r.name)
            .collect();
        assert_eq!(names, ["assL", "assR", "swap"]);
        assert_eq!(resolve_rules(Some("ass"), None, &modes(&["a", "b"])).unwrap().len(), 4);
        assert!(matches!(resolve_rules(Some("nope"), Some(&g), &modes(&[])), Err(CliError::Usage(_))));
    }

    #[test]
    fn fo_sequent_falls_back_to_translation() {
        let s = fo_sequent("a/b, b |- a").unwrap();
        assert_eq!(s.antecedent.len(), 2);
        assert_eq!(s.succedent.to_string(), "a(0,2)");
        assert!(fo_sequent("p(x |- q").is_err());
    }

    #[test]
    fn exit_codes() {
        let mut r = Report {
            command: "prove",
            engine: Engine::Mm,
            input: String::new(),
            count: 0,
            budget_exhausted: false,
            readings: Vec::new(),
            oracle: None,
            elapsed_ms: 0,
        };
        assert_eq!(r.code(), EXIT_NONE);
        r.budget_exhausted = true;
        assert_eq!(r.code(), EXIT_BUDGET);
        r.count = 1;
        assert_eq!(r.code(), EXIT_FOUND);
        r.oracle = Some(OracleReport {
            method: "switching",
            structures: 1,
            nets: 0,
            agrees: false,
        });
        assert_eq!(r.code(), EXIT_ERROR);
        assert_eq!(r.render(Format::Count), "1\n");
    }
}
