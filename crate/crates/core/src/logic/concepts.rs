//! Strategic notions written as formulas of the logic.
//!
//! Winners under a profile are computed when the formula is built, so the
//! result mentions only profile and comparison atoms. A comparison
//! `F(▷') ≻_i F(▷'')` becomes the atom `i: x>y` for the two winners, read
//! against voter `i`'s preference at the state of evaluation, or `false`
//! when the winners coincide.

use std::collections::BTreeSet;

use crate::conditional::{ConditionalProfile, VirtualVoter};
use crate::error::LogicError;
use crate::model::{Candidate, Election, Preference, Profile, ProfileModel, StateId, Voter};
use crate::voting::VotingRule;

use super::characteristic::Classes;
use super::Formula;

/// The notions that have a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Concept {
    /// Voter has some manipulation of the profile.
    HasManipulation { voter: Voter, profile: Profile },
    /// `alt` manipulates the profile for the voter.
    HasManipulationWith {
        voter: Voter,
        profile: Profile,
        alt: Preference,
    },
    /// `alt` is a dominant preference for the voter, given her preference at
    /// the state of evaluation.
    DominantManipulation { voter: Voter, alt: Preference },
    /// In every profile the voter considers possible, she has some
    /// manipulation.
    KnowsDeDicto { voter: Voter },
    /// One ballot manipulates every profile the voter considers possible.
    KnowsDeRe { voter: Voter },
    /// No voter has a manipulation of the profile.
    EquilibriumProfile { profile: Profile },
    /// The conditional profile is an equilibrium. Valid on the model exactly
    /// when it is.
    ConditionalEquilibrium { profile: ConditionalProfile },
}

/// `F(▷') ≻_i F(▷'')`.
fn better(voter: Voter, x: Candidate, y: Candidate) -> Formula {
    if x == y {
        Formula::bottom()
    } else {
        Formula::Prefers(voter, x, y)
    }
}

/// `F(▷') ⪰_i F(▷'')`.
fn at_least(voter: Voter, x: Candidate, y: Candidate) -> Formula {
    if x == y {
        Formula::Top
    } else {
        Formula::Prefers(voter, x, y)
    }
}

fn manipulates(
    rule: &dyn VotingRule,
    voter: Voter,
    profile: &Profile,
    alt: &Preference,
) -> Formula {
    better(
        voter,
        rule.winner(&profile.with(voter, alt.clone())),
        rule.winner(profile),
    )
}

fn has_manipulation(
    rule: &dyn VotingRule,
    e: &Election,
    voter: Voter,
    profile: &Profile,
) -> Formula {
    Formula::disj(
        e.all_orders()
            .iter()
            .map(|alt| manipulates(rule, voter, profile, alt)),
    )
}

/// Builds the formula for `concept`. Quantifying over all profiles is
/// subject to `limit`.
pub fn build_concept_formula(
    concept: &Concept,
    model: &ProfileModel,
    rule: &dyn VotingRule,
    limit: usize,
) -> Result<Formula, LogicError> {
    let e = model.election();
    Ok(match concept {
        Concept::HasManipulation { voter, profile } => has_manipulation(rule, e, *voter, profile),
        Concept::HasManipulationWith {
            voter,
            profile,
            alt,
        } => manipulates(rule, *voter, profile, alt),
        Concept::DominantManipulation { voter, alt } => {
            let profiles = e.all_profiles(limit)?;
            let pairs: Vec<(Candidate, Candidate)> = profiles
                .iter()
                .map(|p| (rule.winner(&p.with(*voter, alt.clone())), rule.winner(p)))
                .collect();
            let never_worse = Formula::conj(pairs.iter().map(|&(x, y)| at_least(*voter, x, y)));
            let once_better = Formula::disj(pairs.iter().map(|&(x, y)| better(*voter, x, y)));
            never_worse.and(once_better)
        }
        Concept::KnowsDeDicto { voter } => {
            let body = Formula::conj(e.all_profiles(limit)?.into_iter().map(|p| {
                let m = has_manipulation(rule, e, *voter, &p);
                Formula::Profile(p).implies(m)
            }));
            Formula::know(*voter, body)
        }
        Concept::KnowsDeRe { voter } => {
            let profiles = e.all_profiles(limit)?;
            Formula::disj(e.all_orders().iter().map(|alt| {
                let body = Formula::conj(profiles.iter().map(|p| {
                    Formula::Profile(p.clone()).implies(manipulates(rule, *voter, p, alt))
                }));
                Formula::know(*voter, body)
            }))
        }
        Concept::EquilibriumProfile { profile } => Formula::conj(
            e.voters()
                .map(|v| has_manipulation(rule, e, v, profile).negate()),
        ),
        Concept::ConditionalEquilibrium { profile } => {
            conditional_equilibrium(model, rule, profile)?
        }
    })
}

/// For each virtual voter `(k, B)` and ballot `alt`: some winner `y` that
/// deviating to `alt` makes possible in `B` is weakly worse than every
/// winner in `B` under the profile. That is, the worst winner does not
/// improve. Blocks are named by their characteristic formulas, and the
/// winner at a state by the combination of blocks containing it.
fn conditional_equilibrium(
    model: &ProfileModel,
    rule: &dyn VotingRule,
    cp: &ConditionalProfile,
) -> Result<Formula, LogicError> {
    let e = model.election();
    let classes = Classes::new(model);
    let voters: Vec<Voter> = e.voters().collect();
    let block_formula: Vec<Vec<Formula>> = voters
        .iter()
        .map(|&v| {
            model
                .partition(v)
                .blocks()
                .iter()
                .map(|b| classes.define(model, b))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;

    // the distinct block combinations that occur at some state
    let combos: BTreeSet<Vec<usize>> = model
        .states()
        .map(|s: StateId| {
            voters
                .iter()
                .map(|&v| model.partition(v).block_of(s))
                .collect()
        })
        .collect();
    let combo_formula = |j: &[usize]| {
        Formula::conj(
            voters
                .iter()
                .zip(j)
                .map(|(v, &b)| block_formula[v.index()][b].clone()),
        )
    };
    let votes = |j: &[usize]| {
        Profile(
            voters
                .iter()
                .zip(j)
                .map(|(&voter, &block)| cp.choice(VirtualVoter { voter, block }).clone())
                .collect(),
        )
    };
    // Ω_x: the winner under `cp` is x
    let outcome = |x: Candidate, deviation: Option<(Voter, &Preference)>| {
        Formula::disj(combos.iter().filter_map(|j| {
            let mut p = votes(j);
            if let Some((k, alt)) = deviation {
                p = p.with(k, alt.clone());
            }
            (rule.winner(&p) == x).then(|| combo_formula(j))
        }))
    };
    let plain: Vec<Formula> = e.candidates().map(|x| outcome(x, None)).collect();

    let mut conjuncts = Vec::new();
    for &k in &voters {
        for (b, phi_b) in block_formula[k.index()].iter().enumerate() {
            let _ = b;
            let per_alt = e.all_orders().into_iter().map(|alt| {
                Formula::disj(e.candidates().map(|y| {
                    let reachable = Formula::possible(k, outcome(y, Some((k, &alt))));
                    let no_worse = Formula::know(
                        k,
                        Formula::disj(
                            e.candidates()
                                .map(|x| plain[x.0].clone().and(at_least(k, x, y))),
                        ),
                    );
                    reachable.and(no_worse)
                }))
            });
            conjuncts.push(phi_b.clone().implies(Formula::conj(per_alt)));
        }
    }
    Ok(Formula::conj(conjuncts))
}
