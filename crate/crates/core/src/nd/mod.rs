//! Natural deduction: sequentialization of proof nets, the deep structure
//! shared by both engines, Curry-Howard terms and rendering.

mod deep;
mod fol;
mod mm;
mod render;

use thiserror::Error;

pub use deep::{curry_howard, deep_from_fol, deep_from_mm, word_types, word_var, DeepNd, DeepRule};
pub use fol::{check_fo_nd, sequentialize_fol, sequentialize_structure, FoNd, FoNdRule};
pub use mm::{
    check_mm_nd, sequentialize_matching, sequentialize_mm, MmNd, MmNdRule, DEFAULT_ND_BUDGET,
};
pub use render::{
    deep_display, fo_display, fo_formula_tex, mill_formula_tex, mm_display, mm_formula_tex,
    DisplayTree,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NdError {
    #[error("malformed proof structure: {0}")]
    Malformed(String),
    #[error("cannot sequentialize: {0}")]
    Stuck(String),
    #[error("not supported by the sequentializer: {0}")]
    Unsupported(String),
    #[error("structural search budget exhausted")]
    Budget,
    #[error("invalid natural deduction proof: {0}")]
    Invalid(String),
}
