use std::fmt;

use itertools::Itertools;

use crate::model::{Candidate, Election, Preference, Profile, Voter};

/// Formulas of the epistemic voting logic.
///
/// The primitive language is profile atoms, negation, conjunction, knowledge
/// and public announcement. `Pref`, `Prefers` and `Wins` are abbreviations
/// for disjunctions of profile atoms; they are kept as atoms and evaluated
/// directly, and [`super::expand_abbreviations`] unfolds them. Disjunction,
/// implication and equivalence are built from negation and conjunction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    /// "The profile is exactly this one."
    Profile(Profile),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Know(Voter, Box<Formula>),
    /// `[φ]ψ`: after announcing φ, ψ holds.
    Announce(Box<Formula>, Box<Formula>),
    /// Voter's preference is exactly this order.
    Pref(Voter, Preference),
    /// Voter strictly prefers the first candidate to the second.
    Prefers(Voter, Candidate, Candidate),
    /// The candidate wins under the voting rule.
    Wins(Candidate),
}

impl Formula {
    pub fn bottom() -> Formula {
        Formula::Top.negate()
    }

    pub fn negate(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        self.negate().and(other.negate()).negate()
    }

    pub fn implies(self, other: Formula) -> Formula {
        self.and(other.negate()).negate()
    }

    pub fn iff(self, other: Formula) -> Formula {
        self.clone().implies(other.clone()).and(other.implies(self))
    }

    pub fn know(voter: Voter, f: Formula) -> Formula {
        Formula::Know(voter, Box::new(f))
    }

    /// `K̂_i φ = ¬K_i¬φ`: the voter considers φ possible.
    pub fn possible(voter: Voter, f: Formula) -> Formula {
        Formula::know(voter, f.negate()).negate()
    }

    pub fn announce(announced: Formula, then: Formula) -> Formula {
        Formula::Announce(Box::new(announced), Box::new(then))
    }

    /// Conjunction of all items; `Top` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Disjunction of all items; `⊥` when empty. A single item is returned
    /// unchanged.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or_else(Formula::bottom)
    }

    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::Top
                | Formula::Profile(_)
                | Formula::Pref(..)
                | Formula::Prefers(..)
                | Formula::Wins(_)
        )
    }

    fn any(&self, pred: &impl Fn(&Formula) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Formula::Not(a) | Formula::Know(_, a) => a.any(pred),
            Formula::And(a, b) | Formula::Announce(a, b) => a.any(pred) || b.any(pred),
            _ => false,
        }
    }

    pub fn has_announcements(&self) -> bool {
        self.any(&|f| matches!(f, Formula::Announce(..)))
    }

    pub fn has_knowledge(&self) -> bool {
        self.any(&|f| matches!(f, Formula::Know(..)))
    }

    /// True if evaluation needs a voting rule.
    pub fn uses_winner(&self) -> bool {
        self.any(&|f| matches!(f, Formula::Wins(_)))
    }

    pub fn has_abbreviations(&self) -> bool {
        self.any(&|f| {
            matches!(
                f,
                Formula::Pref(..) | Formula::Prefers(..) | Formula::Wins(_)
            )
        })
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Not(a) | Formula::Know(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Announce(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }

    /// Nesting depth of connectives.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Not(a) | Formula::Know(_, a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Announce(a, b) => 1 + a.depth().max(b.depth()),
            _ => 0,
        }
    }

    /// Renders in the concrete syntax accepted by [`super::parse`].
    pub fn display<'a>(&'a self, election: &'a Election) -> Display<'a> {
        Display {
            formula: self,
            election,
        }
    }
}

pub struct Display<'a> {
    formula: &'a Formula,
    election: &'a Election,
}

impl Display<'_> {
    fn sub<'b>(&'b self, f: &'b Formula) -> Display<'b> {
        Display {
            formula: f,
            election: self.election,
        }
    }
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.election;
        let name = |c: Candidate| e.candidate_name(c);
        match self.formula {
            Formula::Top => write!(f, "true"),
            Formula::Profile(p) => write!(
                f,
                "profile{{{}}}",
                p.iter()
                    .map(|(v, o)| format!("{}: {}", v, e.fmt_order(o)))
                    .join("; ")
            ),
            Formula::Pref(v, o) => write!(f, "pref {}({})", v, e.fmt_order(o)),
            Formula::Prefers(v, a, b) => write!(f, "{}: {}>{}", v, name(*a), name(*b)),
            Formula::Wins(c) => write!(f, "wins {}", name(*c)),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Top => write!(f, "false"),
                Formula::And(a, b) => match (a.as_ref(), b.as_ref()) {
                    (Formula::Not(x), Formula::Not(y)) => {
                        write!(f, "({} | {})", self.sub(x), self.sub(y))
                    }
                    (x, Formula::Not(y)) => write!(f, "({} -> {})", self.sub(x), self.sub(y)),
                    _ => write!(f, "~{}", self.sub(inner)),
                },
                _ => write!(f, "~{}", self.sub(inner)),
            },
            Formula::And(a, b) => write!(f, "({} & {})", self.sub(a), self.sub(b)),
            Formula::Know(v, a) => write!(f, "K{} {}", v, self.sub(a)),
            Formula::Announce(a, b) => write!(f, "[{}] {}", self.sub(a), self.sub(b)),
        }
    }
}
