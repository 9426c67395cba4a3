//! Manipulation under uncertainty: knowledge of manipulation (de dicto and
//! de re), dominant manipulation of an information set, and pessimistic
//! (maximin) manipulation.
//!
//! Throughout, a deviation by voter `i` is evaluated against the profiles of
//! `i`'s information set at the point, with every other voter voting
//! sincerely. Because `i` knows her own preference, it is the same in all of
//! those profiles and serves as the yardstick for comparing winners.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::AnalysisError;
use crate::model::{Candidate, KnowledgeProfile, Preference, Profile, Voter};
use crate::voting::{is_manipulation, VotingRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum KnowledgeMode {
    DeDicto,
    DeRe,
}

/// The `≻_i`-worst candidate of `cs`.
pub fn min_candidate(
    pref: &Preference,
    cs: impl IntoIterator<Item = Candidate>,
) -> Result<Candidate, AnalysisError> {
    cs.into_iter()
        .max_by_key(|&c| pref.position(c))
        .ok_or(AnalysisError::EmptySet)
}

/// Result of [`knows_manipulation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnowledgeVerdict {
    pub holds: bool,
    /// De dicto: the manipulations of each profile in the information set.
    pub per_profile: Vec<(Profile, Vec<Preference>)>,
    /// De re: the ballots that manipulate every profile of the information set.
    pub common: Vec<Preference>,
}

/// Whether `voter` knows, de dicto or de re, that she can manipulate.
pub fn knows_manipulation(
    kp: KnowledgeProfile<'_>,
    rule: &dyn VotingRule,
    voter: Voter,
    mode: KnowledgeMode,
) -> KnowledgeVerdict {
    let election = kp.model.election();
    let orders = election.all_orders();
    let per_profile: Vec<(Profile, Vec<Preference>)> = kp
        .profiles_of(voter)
        .into_iter()
        .map(|p| {
            let ms = orders
                .iter()
                .filter(|alt| is_manipulation(rule, &p, voter, alt))
                .cloned()
                .collect();
            (p, ms)
        })
        .collect();
    let common: Vec<Preference> = orders
        .iter()
        .filter(|alt| per_profile.iter().all(|(_, ms)| ms.contains(alt)))
        .cloned()
        .collect();
    let holds = match mode {
        KnowledgeMode::DeDicto => per_profile.iter().all(|(_, ms)| !ms.is_empty()),
        KnowledgeMode::DeRe => !common.is_empty(),
    };
    KnowledgeVerdict {
        holds,
        per_profile,
        common,
    }
}

/// `alt` is weakly better than the sincere vote against every profile of the
/// voter's information set and strictly better against at least one.
pub fn dominant_manipulation_of_infoset(
    kp: KnowledgeProfile<'_>,
    rule: &dyn VotingRule,
    voter: Voter,
    alt: &Preference,
) -> bool {
    let truth = kp.profile().pref(voter);
    let mut strict = false;
    for p in kp.profiles_of(voter) {
        let base = rule.winner(&p);
        let dev = rule.winner(&p.with(voter, alt.clone()));
        if !truth.weakly_prefers(dev, base) {
            return false;
        }
        strict |= truth.prefers(dev, base);
    }
    strict
}

/// The worst winner over the information set when the voter casts `alt`
/// (others sincere) beats the worst sincere winner.
pub fn pessimistic_manipulation(
    kp: KnowledgeProfile<'_>,
    rule: &dyn VotingRule,
    voter: Voter,
    alt: &Preference,
) -> bool {
    let truth = kp.profile().pref(voter);
    let profiles = kp.profiles_of(voter);
    let sincere = min_candidate(truth, profiles.iter().map(|p| rule.winner(p)));
    let deviated = min_candidate(
        truth,
        profiles
            .iter()
            .map(|p| rule.winner(&p.with(voter, alt.clone()))),
    );
    match (deviated, sincere) {
        (Ok(d), Ok(s)) => truth.prefers(d, s),
        _ => false,
    }
}

/// Labels of [`ManipulationReport`], weakest first. The derived `Ord` is the
/// strength order used to pick the headline kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ManipulationKind {
    None,
    HasManipulation,
    Pessimistic,
    DominantOfInfoset,
    KnowsDeDicto,
    KnowsDeRe,
}

impl ManipulationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ManipulationKind::None => "none",
            ManipulationKind::HasManipulation => "has_manipulation",
            ManipulationKind::Pessimistic => "pessimistic",
            ManipulationKind::DominantOfInfoset => "dominant_of_infoset",
            ManipulationKind::KnowsDeDicto => "knows_de_dicto",
            ManipulationKind::KnowsDeRe => "knows_de_re",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManipulationReport {
    pub voter: Voter,
    pub kind: ManipulationKind,
    pub labels: BTreeSet<ManipulationKind>,
    /// Manipulations of the point's profile.
    pub manipulations: Vec<Preference>,
    pub knowledge: KnowledgeVerdict,
    pub dominant: Vec<Preference>,
    pub pessimistic: Vec<Preference>,
}

/// Runs every check for every alternative ballot of `voter`.
pub fn classify(
    kp: KnowledgeProfile<'_>,
    rule: &dyn VotingRule,
    voter: Voter,
) -> ManipulationReport {
    let election = kp.model.election();
    let orders = election.all_orders();
    let point_profile = kp.profile();
    let manipulations: Vec<Preference> = orders
        .iter()
        .filter(|alt| is_manipulation(rule, point_profile, voter, alt))
        .cloned()
        .collect();
    let knowledge = knows_manipulation(kp, rule, voter, KnowledgeMode::DeDicto);
    let de_dicto = knowledge.holds;
    let de_re = !knowledge.common.is_empty();
    let dominant: Vec<Preference> = orders
        .iter()
        .filter(|alt| dominant_manipulation_of_infoset(kp, rule, voter, alt))
        .cloned()
        .collect();
    let pessimistic: Vec<Preference> = orders
        .iter()
        .filter(|alt| pessimistic_manipulation(kp, rule, voter, alt))
        .cloned()
        .collect();

    let mut labels = BTreeSet::new();
    let flags = [
        (!manipulations.is_empty(), ManipulationKind::HasManipulation),
        (!pessimistic.is_empty(), ManipulationKind::Pessimistic),
        (!dominant.is_empty(), ManipulationKind::DominantOfInfoset),
        (de_dicto, ManipulationKind::KnowsDeDicto),
        (de_re, ManipulationKind::KnowsDeRe),
    ];
    for (on, kind) in flags {
        if on {
            labels.insert(kind);
        }
    }
    let kind = labels
        .iter()
        .next_back()
        .copied()
        .unwrap_or(ManipulationKind::None);
    ManipulationReport {
        voter,
        kind,
        labels,
        manipulations,
        knowledge,
        dominant,
        pessimistic,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{hypercube, Election, ProfileModel, DEFAULT_SIZE_LIMIT};
    use crate::voting::{dominant_over_sincere, dominant_preference, Plurality};

    fn setup() -> (Election, Plurality) {
        let e = Election::new(["a", "b", "c"], 2).unwrap();
        let tb = e.parse_order("b>a>c", '>').unwrap();
        (e, Plurality::new(tb))
    }

    fn order(e: &Election, s: &str) -> Preference {
        e.parse_order(s, '>').unwrap()
    }

    /// t: 1 a>b>c, 2 c>b>a; u: 1 c>b>a, 2 c>b>a; voter 2 confuses them.
    fn two_state(e: &Election) -> ProfileModel {
        let t = Profile(vec![order(e, "a>b>c"), order(e, "c>b>a")]);
        let u = Profile(vec![order(e, "c>b>a"), order(e, "c>b>a")]);
        ProfileModel::new(
            e.clone(),
            vec!["t".into(), "u".into()],
            vec![None, Some(vec![vec![0, 1]])],
            vec![t, u],
        )
        .unwrap()
    }

    #[test]
    fn min_candidate_cases() {
        let (e, _) = setup();
        let c = |n| e.candidate(n).unwrap();
        assert_eq!(
            min_candidate(&order(&e, "c>b>a"), [c("a"), c("c")]),
            Ok(c("a"))
        );
        assert_eq!(min_candidate(&order(&e, "c>b>a"), [c("b")]), Ok(c("b")));
        assert_eq!(
            min_candidate(&order(&e, "a>b>c"), e.candidates()),
            Ok(c("c"))
        );
        assert_eq!(
            min_candidate(&order(&e, "a>b>c"), []),
            Err(AnalysisError::EmptySet)
        );
    }

    #[test]
    fn pessimistic_vote_for_b() {
        let (e, rule) = setup();
        let m = two_state(&e);
        let vote_b = order(&e, "b>c>a");
        for point in [0, 1] {
            let kp = KnowledgeProfile::new(&m, point).unwrap();
            assert!(pessimistic_manipulation(kp, &rule, Voter(2), &vote_b));
            // at u the vote for b turns a c win into a b win
            assert!(!dominant_manipulation_of_infoset(
                kp,
                &rule,
                Voter(2),
                &vote_b
            ));
            let sincere = kp.profile().pref(Voter(2)).clone();
            assert!(!pessimistic_manipulation(kp, &rule, Voter(2), &sincere));
        }
    }

    #[test]
    fn singleton_information_sets_collapse_to_manipulation() {
        let (e, rule) = setup();
        for p in e.all_profiles(DEFAULT_SIZE_LIMIT).unwrap() {
            let m = ProfileModel::new(
                e.clone(),
                vec!["x".into()],
                vec![None, None],
                vec![p.clone()],
            )
            .unwrap();
            let kp = KnowledgeProfile::new(&m, 0).unwrap();
            for v in e.voters() {
                let has = !crate::voting::manipulations(&rule, &e, &p, v).is_empty();
                assert_eq!(
                    knows_manipulation(kp, &rule, v, KnowledgeMode::DeDicto).holds,
                    has
                );
                assert_eq!(
                    knows_manipulation(kp, &rule, v, KnowledgeMode::DeRe).holds,
                    has
                );
                for alt in e.all_orders() {
                    let manip = is_manipulation(&rule, &p, v, &alt);
                    assert_eq!(dominant_manipulation_of_infoset(kp, &rule, v, &alt), manip);
                    assert_eq!(pessimistic_manipulation(kp, &rule, v, &alt), manip);
                }
            }
        }
    }

    #[test]
    fn hypercube_dominance_matches_sincere_baseline_dominance() {
        let (e, rule) = setup();
        let h = hypercube(&e, DEFAULT_SIZE_LIMIT).unwrap();
        for s in h.states() {
            let kp = KnowledgeProfile::new(&h, s).unwrap();
            for v in e.voters() {
                let truth = kp.profile().pref(v);
                for alt in e.all_orders() {
                    let of_infoset = dominant_manipulation_of_infoset(kp, &rule, v, &alt);
                    let l = DEFAULT_SIZE_LIMIT;
                    assert_eq!(
                        of_infoset,
                        dominant_over_sincere(&rule, &e, v, truth, &alt, false, l).unwrap()
                    );
                    if of_infoset {
                        assert!(dominant_preference(&rule, &e, v, truth, &alt, false, l).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn hypercube_report_never_claims_knowledge() {
        let (e, rule) = setup();
        let h = hypercube(&e, DEFAULT_SIZE_LIMIT).unwrap();
        for s in h.states() {
            let kp = KnowledgeProfile::new(&h, s).unwrap();
            for v in e.voters() {
                let r = classify(kp, &rule, v);
                assert!(!r.labels.contains(&ManipulationKind::KnowsDeDicto));
                assert!(!r.labels.contains(&ManipulationKind::KnowsDeRe));
            }
        }
    }
}
