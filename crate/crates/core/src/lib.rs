//! Strategic voting under uncertainty about other voters' preferences.
//!
//! Knowledge is modelled by profile models: finite S5 Kripke structures
//! whose states carry preference profiles. On top of them the crate
//! computes manipulations and their epistemic variants, the maximin game
//! between information sets, public-announcement updates, and the truth of
//! formulas in an epistemic language with profile atoms.

pub mod conditional;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod logic;
pub mod model;
pub mod random;
pub mod strategy;
pub mod voting;

pub use error::{AnalysisError, FormatError, FormulaError, LogicError, ModelError, UpdateError};
pub use model::{
    hypercube, Candidate, Election, InformationSet, KnowledgeProfile, Preference, Profile,
    ProfileModel, StateId, Voter, DEFAULT_SIZE_LIMIT,
};
pub use voting::{Plurality, VotingRule};
