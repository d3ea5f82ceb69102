//! Both engines on the bundled grammars: readings, natural deduction and
//! the Lambek translation.

use tlg_core::fol::{prove_fol_sequent, FolOptions};
use tlg_core::formula::{parse_fo_sequent, parse_lambek_sequent, parse_mm_sequent};
use tlg_core::grammar::{associativity, load_grammar, Grammar, LexFormula};
use tlg_core::mm::{prove_mm_sequent, MmOptions};
use tlg_core::nd::{check_fo_nd, check_mm_nd, sequentialize_fol, sequentialize_mm};
use tlg_core::reading::{parse_sentence, AnyProof, Engine, ParseOptions, Reading};
use tlg_core::semantics::alpha_eq;
use tlg_core::translate::{translate_sequent, PositionedEntry};
use tlg_core::{Mode, Sequent};

fn grammar(name: &str) -> Grammar {
    load_grammar(format!("{}/../../grammars/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn readings(g: &Grammar, sentence: &str, engine: Engine) -> Vec<Reading> {
    let words: Vec<&str> = sentence.split_whitespace().collect();
    parse_sentence(g, &words, engine, None, &ParseOptions::default())
        .unwrap()
        .readings
}

const SENTENCES: &[&str] = &[
    "Alyssa ran",
    "Alyssa loves logic",
    "the difficult student slept",
    "Alyssa ran passionately",
    "the student who ran slept",
    "the student whom Alyssa aced slept",
    "everyone loves logic",
    "every student aced some exam",
];

#[test]
fn engines_find_the_same_meanings() {
    let g = grammar("lambek.tlg");
    for s in SENTENCES {
        let mm = readings(&g, s, Engine::Mm);
        let fol = readings(&g, s, Engine::Fol);
        assert!(!mm.is_empty(), "{s}");
        assert_eq!(mm.len(), fol.len(), "{s}");
        for r in &mm {
            assert!(fol.iter().any(|f| alpha_eq(&f.semantics, &r.semantics)), "{s}: {}", r.hol);
        }
    }
}

#[test]
fn simple_meanings() {
    let g = grammar("lambek.tlg");
    let hol = |s: &str| readings(&g, s, Engine::Mm)[0].hol.clone();
    assert_eq!(hol("Alyssa ran"), "run(alyssa)");
    assert_eq!(hol("Alyssa loves logic"), "love(alyssa,logic)");
}

#[test]
fn word_order_matters() {
    let g = grammar("lambek.tlg");
    assert!(readings(&g, "ran Alyssa", Engine::Mm).is_empty());
    assert!(readings(&g, "ran Alyssa", Engine::Fol).is_empty());
    assert!(readings(&g, "student the", Engine::Mm).is_empty());
}

#[test]
fn every_reading_sequentializes_to_a_checked_proof() {
    let g = grammar("lambek.tlg");
    for s in SENTENCES {
        for engine in [Engine::Mm, Engine::Fol] {
            for r in readings(&g, s, engine) {
                match &r.proof {
                    AnyProof::Mm(p) => {
                        let nd = sequentialize_mm(p, &g.rules).unwrap();
                        assert_eq!(check_mm_nd(&nd, &p.sequent, &g.rules), Ok(()), "{s}");
                    }
                    AnyProof::Fol(p) => {
                        let nd = sequentialize_fol(p).unwrap();
                        assert_eq!(check_fo_nd(&nd, &p.sequent), Ok(()), "{s}");
                    }
                }
            }
        }
    }
}

#[test]
fn de_re_grammar_mixes_formula_kinds() {
    let g = grammar("dere.tlg");
    let rs = readings(&g, "Alyssa believes someone committed_perjury", Engine::Fol);
    assert_eq!(rs.len(), 2);
    assert!(!alpha_eq(&rs[0].semantics, &rs[1].semantics));
    for r in &rs {
        let AnyProof::Fol(p) = &r.proof else { panic!("fol engine") };
        assert_eq!(check_fo_nd(&sequentialize_fol(p).unwrap(), &p.sequent), Ok(()));
    }
}

fn mm_derivable(text: &str, ass: bool) -> bool {
    let s = parse_mm_sequent(text).unwrap();
    let rules = if ass { associativity(&Mode::new("a")) } else { Vec::new() };
    !prove_mm_sequent(&s, &rules, &MmOptions::default()).proofs.is_empty()
}

fn translated(text: &str) -> bool {
    let s: Sequent<()> = parse_lambek_sequent(text).unwrap();
    let entries: Vec<PositionedEntry> = s
        .antecedent
        .iter()
        .enumerate()
        .map(|(i, f)| PositionedEntry::at_word(LexFormula::Lambek(f.clone()), i))
        .collect();
    let fo = translate_sequent(&entries, &s.succedent).unwrap();
    !prove_fol_sequent(&fo, &FolOptions::default()).is_empty()
}

#[test]
fn translation_decides_associative_lambek() {
    let cases = [
        ("a/b, b/c |- a/c", "a /a b, b /a c |- a /a c", true),
        ("a |- b/(a\\b)", "a |- b /a (a \\a b)", true),
        ("a/b, b |- a", "a /a b, b |- a", true),
        ("b, a/b |- a", "b, a /a b |- a", false),
        ("a*b |- b*a", "a *a b |- b *a a", false),
    ];
    for (lambek, mm, expected) in cases {
        assert_eq!(mm_derivable(mm, true), expected, "{mm}");
        assert_eq!(translated(lambek), expected, "{lambek}");
    }
    assert!(!mm_derivable("a /a b, b /a c |- a /a c", false));
}

#[test]
fn fol_counts() {
    let count = |t: &str| prove_fol_sequent(&parse_fo_sequent(t).unwrap(), &FolOptions::default()).len();
    assert_eq!(count("a -o b |- a -o b"), 1);
    assert_eq!(count("a, a -o b |- b"), 1);
    assert_eq!(count("a -o exists x.b(x) |- exists y.(a -o b(y))"), 0);
    assert_eq!(count("exists y.(a -o b(y)) |- a -o exists x.b(x)"), 1);
    assert_eq!(count("forall x.p(x) |- p(c)"), 1);
    assert_eq!(count("p(c) |- forall x.p(x)"), 0);
}
