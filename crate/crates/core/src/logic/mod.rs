//! The epistemic voting logic: syntax, semantics, rewriting and defining
//! formulas.

pub mod characteristic;
pub mod concepts;
pub mod formula;
pub mod parser;
pub mod rewrite;
pub mod semantics;

pub use characteristic::{characteristic_formula, CharacteristicFormula, Classes};
pub use concepts::{build_concept_formula, Concept};
pub use formula::Formula;
pub use parser::parse;
pub use rewrite::{expand_abbreviations, reduce_announcements};
pub use semantics::{
    check_axioms, denotation, denotation_rule_free, evaluate, valid_on, AxiomReport,
};
