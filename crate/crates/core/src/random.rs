//! Seeded generators for models, formulas and conditional profiles.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::conditional::{strategy_set, ConditionalProfile};
use crate::logic::Formula;
use crate::model::{Candidate, Election, Preference, Profile, ProfileModel, StateId, Voter};

pub fn random_order<R: Rng + ?Sized>(rng: &mut R, election: &Election) -> Preference {
    let mut ranking: Vec<_> = election.candidates().collect();
    ranking.shuffle(rng);
    Preference::new(election, ranking).expect("a shuffle is a permutation")
}

pub fn random_profile<R: Rng + ?Sized>(rng: &mut R, election: &Election) -> Profile {
    Profile(
        election
            .voters()
            .map(|_| random_order(rng, election))
            .collect(),
    )
}

/// A valid model with `1..=max_states` states labelled `s0, s1, ...`.
///
/// Each voter's partition refines the grouping of states by her own
/// preference; within a group states are assigned to random blocks.
pub fn random_model<R: Rng + ?Sized>(
    rng: &mut R,
    election: &Election,
    max_states: usize,
) -> ProfileModel {
    let k = rng.gen_range(1..=max_states.max(1));
    // draw profiles from a small pool so that states often share preferences
    let pool: Vec<Profile> = (0..rng.gen_range(1..=k))
        .map(|_| random_profile(rng, election))
        .collect();
    let valuation: Vec<Profile> = (0..k)
        .map(|_| {
            let mut p = pool.choose(rng).expect("pool is nonempty").clone();
            if rng.gen_bool(0.3) {
                let v = Voter(rng.gen_range(1..=election.num_voters()));
                p = p.with(v, random_order(rng, election));
            }
            p
        })
        .collect();
    let partitions = election
        .voters()
        .map(|v| {
            let mut groups: Vec<(Preference, Vec<StateId>)> = Vec::new();
            for (s, p) in valuation.iter().enumerate() {
                match groups.iter_mut().find(|(o, _)| o == p.pref(v)) {
                    Some((_, g)) => g.push(s),
                    None => groups.push((p.pref(v).clone(), vec![s])),
                }
            }
            let mut blocks = Vec::new();
            for (_, g) in groups {
                let parts = rng.gen_range(1..=g.len());
                let mut split: Vec<Vec<StateId>> = vec![Vec::new(); parts];
                for s in g {
                    split[rng.gen_range(0..parts)].push(s);
                }
                blocks.extend(split.into_iter().filter(|b| !b.is_empty()));
            }
            Some(blocks)
        })
        .collect();
    let labels = (0..k).map(|s| format!("s{s}")).collect();
    ProfileModel::new(election.clone(), labels, partitions, valuation)
        .expect("generated models are valid")
}

/// A random formula of connective depth at most `depth`. Profile atoms are
/// drawn mostly from `model`'s valuation so that they are not trivially
/// false.
pub fn random_formula<R: Rng + ?Sized>(
    rng: &mut R,
    model: &ProfileModel,
    depth: usize,
    announcements: bool,
    winners: bool,
) -> Formula {
    let e = model.election();
    if depth == 0 || rng.gen_bool(0.25) {
        let voter = Voter(rng.gen_range(1..=e.num_voters()));
        let kinds = if winners { 5 } else { 4 };
        return match rng.gen_range(0..kinds) {
            0 => {
                if rng.gen_bool(0.1) {
                    Formula::Top
                } else if rng.gen_bool(0.8) {
                    Formula::Profile(model.profile(rng.gen_range(0..model.num_states())).clone())
                } else {
                    Formula::Profile(random_profile(rng, e))
                }
            }
            1 => {
                let o = if rng.gen_bool(0.7) {
                    model
                        .profile(rng.gen_range(0..model.num_states()))
                        .pref(voter)
                        .clone()
                } else {
                    random_order(rng, e)
                };
                Formula::Pref(voter, o)
            }
            2 | 3 => {
                let o = random_order(rng, e);
                let r = o.ranking();
                if r.len() < 2 {
                    Formula::Top
                } else {
                    Formula::Prefers(voter, r[0], r[1])
                }
            }
            _ => Formula::Wins(Candidate(rng.gen_range(0..e.num_candidates()))),
        };
    }
    let d = depth - 1;
    let kinds = if announcements { 4 } else { 3 };
    match rng.gen_range(0..kinds) {
        0 => random_formula(rng, model, d, announcements, winners).negate(),
        1 => random_formula(rng, model, d, announcements, winners).and(random_formula(
            rng,
            model,
            d,
            announcements,
            winners,
        )),
        2 => {
            let voter = Voter(rng.gen_range(1..=e.num_voters()));
            Formula::know(voter, random_formula(rng, model, d, announcements, winners))
        }
        _ => Formula::announce(
            random_formula(rng, model, d, announcements, winners),
            random_formula(rng, model, d, announcements, winners),
        ),
    }
}

/// A conditional profile choosing uniformly from the strategy set.
pub fn random_conditional_profile<R: Rng + ?Sized>(
    rng: &mut R,
    model: &ProfileModel,
    by_top: bool,
) -> ConditionalProfile {
    let strategies = strategy_set(model.election(), by_top);
    let choices = model
        .election()
        .voters()
        .map(|v| {
            (0..model.partition(v).num_blocks())
                .map(|_| {
                    strategies
                        .choose(rng)
                        .expect("strategies are nonempty")
                        .clone()
                })
                .collect()
        })
        .collect();
    ConditionalProfile::new(model, choices).expect("shape matches the model")
}
