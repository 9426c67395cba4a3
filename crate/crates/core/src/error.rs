use thiserror::Error;

use crate::model::Voter;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("an election needs at least one candidate")]
    NoCandidates,
    #[error("an election needs at least one voter")]
    NoVoters,
    #[error("invalid candidate id `{0}` (expected [a-z0-9_]+)")]
    InvalidCandidateId(String),
    #[error("duplicate candidate `{0}`")]
    DuplicateCandidate(String),
    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),
    #[error("`{0}` is not a linear order over all candidates")]
    NotAPermutation(String),
    #[error("profile lists {found} voters, expected {expected}")]
    IncompleteProfile { expected: usize, found: usize },
    #[error("not a partition: {0}")]
    Partition(String),
    #[error("partition refers to unknown state {0}")]
    DanglingState(String),
    #[error("duplicate state label `{0}`")]
    DuplicateState(String),
    #[error(
        "voter {voter} cannot distinguish {s} and {t} but her preference differs between them"
    )]
    OwnPreferenceViolation { voter: Voter, s: String, t: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("a model needs at least one state")]
    EmptyModel,
    #[error("{what} exceed the size limit of {limit}")]
    SizeLimit { what: &'static str, limit: usize },
}

/// Error in the line-oriented model format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Model {
        line: usize,
        #[source]
        source: ModelError,
    },
    #[error("{0}")]
    Invalid(#[from] ModelError),
}

/// Error raised while parsing a formula; offsets are byte positions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown voter {voter} at byte {offset}")]
    UnknownVoter { offset: usize, voter: usize },
    #[error("unknown candidate `{name}` at byte {offset}")]
    UnknownCandidate { offset: usize, name: String },
    #[error("incomplete profile or preference at byte {offset}: {message}")]
    IncompleteProfileAtom { offset: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("states {a} and {b} are bisimilar, so no formula separates them")]
    Indistinguishable { a: String, b: String },
    #[error("the formula mentions a winner, which needs a voting rule")]
    RuleRequired,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("the min of an empty candidate set is undefined")]
    EmptySet,
    #[error("the rule is not top-only, so votes cannot be grouped by top candidate")]
    NotTopOnly,
    #[error("conditional profile does not fit the model: {0}")]
    IllFormed(String),
    #[error("payoff grids need exactly two voters, the model has {0}")]
    NotTwoVoters(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UpdateError {
    #[error("no state satisfies the announcement")]
    EmptyResult,
    #[error("the announcement is false at the point {0}")]
    FalseAtPoint(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}
