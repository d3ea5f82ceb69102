//! Type-logical grammar workbench: multimodal and first-order linear logic
//! proof nets, the Lambek-to-MILL1 translation, and Curry-Howard semantics.

pub mod dot;
pub mod fol;
pub mod formula;
pub mod grammar;
pub mod mm;
pub mod nd;
pub mod reading;
pub mod semantics;
pub mod session;
pub mod syntax;
pub mod translate;

pub use formula::{
    parse_fo_sequent, parse_foll, parse_formula, parse_lambek, parse_mm, AnyFormula, Dialect,
    FoFormula, FoSequent, FoTerm, Formula, LambekFormula, MMFormula, MillFormula, Mode,
    Polarity, Sequent,
};
pub use syntax::ParseError;
