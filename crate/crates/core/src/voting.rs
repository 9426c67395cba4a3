//! Resolute voting rules and the classical game-theoretic notions:
//! manipulation, dominant preference and equilibrium profile.

use itertools::Itertools;

use crate::error::{AnalysisError, ModelError};
use crate::model::{Candidate, Election, Preference, Profile, Voter};

/// A resolute voting rule: every profile has exactly one winner.
///
/// Implementations must be deterministic and total.
pub trait VotingRule: Sync {
    fn winner(&self, profile: &Profile) -> Candidate;

    /// True if the winner depends only on each voter's top candidate.
    fn is_top_only(&self) -> bool {
        false
    }
}

/// Plurality with a fixed tie-breaking order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plurality {
    tiebreak: Preference,
}

impl Plurality {
    pub fn new(tiebreak: Preference) -> Self {
        Plurality { tiebreak }
    }

    pub fn tiebreak(&self) -> &Preference {
        &self.tiebreak
    }
}

impl VotingRule for Plurality {
    fn winner(&self, profile: &Profile) -> Candidate {
        let m = self.tiebreak.ranking().len();
        let mut tally = vec![0usize; m];
        for pref in &profile.0 {
            tally[pref.top().0] += 1;
        }
        let best = tally.iter().copied().max().unwrap_or(0);
        // first tied candidate in tie-breaking order
        *self
            .tiebreak
            .ranking()
            .iter()
            .find(|c| tally[c.0] == best)
            .expect("tiebreak ranks every candidate")
    }

    fn is_top_only(&self) -> bool {
        true
    }
}

/// Plurality winner under tie-breaking order `tiebreak`.
pub fn plurality_winner(tiebreak: &Preference, profile: &Profile) -> Candidate {
    Plurality::new(tiebreak.clone()).winner(profile)
}

/// Looks up a built-in rule by name. Only `plurality` ships.
pub fn rule_by_name(name: &str, tiebreak: Option<&Preference>) -> Result<Plurality, String> {
    match name {
        "plurality" => tiebreak
            .map(|tb| Plurality::new(tb.clone()))
            .ok_or_else(|| "plurality needs a `tiebreak:` line in the model".to_string()),
        other => Err(format!(
            "unknown voting rule `{other}` (available: plurality)"
        )),
    }
}

/// Voter `i` with sincere preference `truth` gains strictly by replacing her
/// vote in `votes` with `alt`.
pub fn improves(
    rule: &dyn VotingRule,
    truth: &Preference,
    votes: &Profile,
    voter: Voter,
    alt: &Preference,
) -> bool {
    let before = rule.winner(votes);
    let after = rule.winner(&votes.with(voter, alt.clone()));
    truth.prefers(after, before)
}

/// `alt` is a manipulation by `voter` of the sincere profile `profile`.
pub fn is_manipulation(
    rule: &dyn VotingRule,
    profile: &Profile,
    voter: Voter,
    alt: &Preference,
) -> bool {
    improves(rule, profile.pref(voter), profile, voter, alt)
}

/// All manipulations of `profile` available to `voter`.
pub fn manipulations(
    rule: &dyn VotingRule,
    election: &Election,
    profile: &Profile,
    voter: Voter,
) -> Vec<Preference> {
    election
        .all_orders()
        .into_iter()
        .filter(|alt| is_manipulation(rule, profile, voter, alt))
        .collect()
}

/// Whether `alt` is a dominant preference for a voter whose sincere
/// preference is `truth`, quantifying over every profile of votes.
///
/// Weak dominance: at least as good against every profile, strictly better
/// against one. Strong dominance: strictly better against every profile.
/// The voter's own entry in each profile varies too, so `alt` is compared
/// with every ballot she could have cast.
pub fn dominant_preference(
    rule: &dyn VotingRule,
    election: &Election,
    voter: Voter,
    truth: &Preference,
    alt: &Preference,
    strong: bool,
    limit: usize,
) -> Result<bool, ModelError> {
    dominance(rule, election, voter, truth, alt, strong, limit, false)
}

/// Like [`dominant_preference`], but `alt` is only compared with the sincere
/// ballot `truth`: others' votes range over everything, the voter's own
/// baseline vote is fixed.
pub fn dominant_over_sincere(
    rule: &dyn VotingRule,
    election: &Election,
    voter: Voter,
    truth: &Preference,
    alt: &Preference,
    strong: bool,
    limit: usize,
) -> Result<bool, ModelError> {
    dominance(rule, election, voter, truth, alt, strong, limit, true)
}

#[allow(clippy::too_many_arguments)]
fn dominance(
    rule: &dyn VotingRule,
    election: &Election,
    voter: Voter,
    truth: &Preference,
    alt: &Preference,
    strong: bool,
    limit: usize,
    sincere_baseline: bool,
) -> Result<bool, ModelError> {
    let mut strict_somewhere = false;
    for other in election.all_profiles(limit)? {
        if sincere_baseline && other.pref(voter) != truth {
            continue;
        }
        let base = rule.winner(&other);
        let dev = rule.winner(&other.with(voter, alt.clone()));
        let strict = truth.prefers(dev, base);
        if strong && !strict {
            return Ok(false);
        }
        if !truth.weakly_prefers(dev, base) {
            return Ok(false);
        }
        strict_somewhere |= strict;
    }
    Ok(strict_somewhere)
}

/// No voter gains by a unilateral deviation from `votes`, payoffs taken
/// w.r.t. `truth`.
pub fn is_equilibrium(
    rule: &dyn VotingRule,
    election: &Election,
    truth: &Profile,
    votes: &Profile,
) -> bool {
    let orders = election.all_orders();
    election.voters().all(|v| {
        orders
            .iter()
            .all(|alt| !improves(rule, truth.pref(v), votes, v, alt))
    })
}

/// The profile is an equilibrium when voted sincerely: no voter has a
/// manipulation of it.
pub fn is_equilibrium_profile(
    rule: &dyn VotingRule,
    election: &Election,
    profile: &Profile,
) -> bool {
    is_equilibrium(rule, election, profile, profile)
}

/// Every vote profile that is an equilibrium w.r.t. `truth`.
///
/// With `by_top`, votes range over one representative order per top
/// candidate, which identifies all ballots under a top-only rule.
pub fn enumerate_equilibria(
    rule: &dyn VotingRule,
    election: &Election,
    truth: &Profile,
    by_top: bool,
    limit: usize,
) -> Result<Vec<Profile>, AnalysisError> {
    let candidates = if by_top {
        if !rule.is_top_only() {
            return Err(AnalysisError::NotTopOnly);
        }
        let strategies: Vec<Preference> = election
            .candidates()
            .map(|c| election.top_representative(c))
            .collect();
        let fits = strategies
            .len()
            .checked_pow(election.num_voters() as u32)
            .is_some_and(|c| c <= limit);
        if !fits {
            return Err(ModelError::SizeLimit {
                what: "vote profiles",
                limit,
            }
            .into());
        }
        (0..election.num_voters())
            .map(|_| strategies.iter().cloned())
            .multi_cartesian_product()
            .map(Profile)
            .collect()
    } else {
        election.all_profiles(limit)?
    };
    Ok(candidates
        .into_iter()
        .filter(|votes| is_equilibrium(rule, election, truth, votes))
        .collect())
}
