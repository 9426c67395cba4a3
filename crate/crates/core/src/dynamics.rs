//! Public announcements: restricting a model to the states where a formula
//! holds, carrying conditional profiles along, and checking which strategic
//! properties survive.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conditional::{
    is_conditional_equilibrium, ConditionalProfile, EquilibriumVerdict, VirtualVoter,
};
use crate::error::{AnalysisError, UpdateError};
use crate::logic::{denotation, Formula};
use crate::model::{Election, KnowledgeProfile, Preference, ProfileModel, StateId, Voter};
use crate::random::{random_conditional_profile, random_formula, random_model};
use crate::strategy::{dominant_manipulation_of_infoset, knows_manipulation, KnowledgeMode};
use crate::voting::VotingRule;

/// The model after an announcement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpdateResult {
    pub model: ProfileModel,
    /// Old state of each new state, in order.
    pub survived: Vec<StateId>,
    pub dropped: Vec<StateId>,
    /// The point's new index, if a point was given and survived.
    pub point: Option<StateId>,
    pub point_survives: bool,
}

/// Restricts `model` to the states where `keep` is set. With a point, the
/// announcement must be true there.
pub fn update_with_mask(
    model: &ProfileModel,
    keep: &[bool],
    point: Option<StateId>,
) -> Result<UpdateResult, UpdateError> {
    if let Some(p) = point {
        if !keep[p] {
            return Err(UpdateError::FalseAtPoint(model.label(p).to_string()));
        }
    }
    let (updated, survived) = model.restrict(keep).map_err(|_| UpdateError::EmptyResult)?;
    debug_assert!(updated.validate().is_ok());
    let dropped = model.states().filter(|&s| !keep[s]).collect();
    let point = point.map(|p| survived.iter().position(|&s| s == p).expect("point kept"));
    Ok(UpdateResult {
        model: updated,
        survived,
        dropped,
        point,
        point_survives: point.is_some(),
    })
}

/// `M|φ`, pointed or not.
pub fn update(
    model: &ProfileModel,
    rule: &dyn VotingRule,
    phi: &Formula,
    point: Option<StateId>,
) -> Result<UpdateResult, UpdateError> {
    update_with_mask(model, &denotation(model, rule, phi), point)
}

/// The conditional profile on the updated model: each surviving block keeps
/// the ballot of the block it came from.
pub fn update_conditional_profile(
    model: &ProfileModel,
    cp: &ConditionalProfile,
    u: &UpdateResult,
) -> ConditionalProfile {
    let choices = model
        .election()
        .voters()
        .map(|voter| {
            u.model
                .partition(voter)
                .blocks()
                .iter()
                .map(|b| {
                    let block = model.partition(voter).block_of(u.survived[b[0]]);
                    cp.choice(VirtualVoter { voter, block }).clone()
                })
                .collect()
        })
        .collect();
    ConditionalProfile::new(&u.model, choices).expect("one ballot per surviving block")
}

/// Properties whose preservation under announcements can be checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Property {
    /// The voter knows (in the given mode) that she can manipulate.
    KnowsManipulation {
        voter: Voter,
        mode: KnowledgeMode,
    },
    /// `alt` is a dominant manipulation of the voter's information set, or
    /// with `None`, some ballot is.
    DominantManipulation {
        voter: Voter,
        alt: Option<Preference>,
    },
    ConditionalEquilibrium {
        profile: ConditionalProfile,
    },
    NotConditionalEquilibrium {
        profile: ConditionalProfile,
    },
}

impl Property {
    fn pointed(&self) -> bool {
        matches!(
            self,
            Property::KnowsManipulation { .. } | Property::DominantManipulation { .. }
        )
    }
}

/// Whether a property holds, with the evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub holds: bool,
    /// Ballots supporting the property: the common manipulations (de re), all
    /// manipulations of some possible profile (de dicto), or the dominant
    /// manipulations.
    pub ballots: Vec<Preference>,
    /// For equilibrium properties, a profitable deviation if there is one.
    pub blocking: Option<(VirtualVoter, Preference)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preservation {
    pub before: Evidence,
    pub after: Evidence,
    pub update: UpdateResult,
    /// The updated conditional profile, for equilibrium properties.
    pub updated_profile: Option<ConditionalProfile>,
}

impl Preservation {
    pub fn preserved(&self) -> bool {
        !self.before.holds || self.after.holds
    }
}

fn evidence(
    model: &ProfileModel,
    rule: &dyn VotingRule,
    property: &Property,
    point: Option<StateId>,
    cp: Option<&ConditionalProfile>,
) -> Evidence {
    match property {
        Property::KnowsManipulation { voter, mode } => {
            let kp = KnowledgeProfile::new(model, point.expect("pointed")).expect("point in model");
            let verdict = knows_manipulation(kp, rule, *voter, *mode);
            let ballots = match mode {
                KnowledgeMode::DeRe => verdict.common,
                KnowledgeMode::DeDicto => {
                    let mut all: Vec<Preference> = Vec::new();
                    for (_, ms) in verdict.per_profile {
                        for m in ms {
                            if !all.contains(&m) {
                                all.push(m);
                            }
                        }
                    }
                    all
                }
            };
            Evidence {
                holds: verdict.holds,
                ballots,
                blocking: None,
            }
        }
        Property::DominantManipulation { voter, alt } => {
            let kp = KnowledgeProfile::new(model, point.expect("pointed")).expect("point in model");
            let candidates = match alt {
                Some(a) => vec![a.clone()],
                None => model.election().all_orders(),
            };
            let ballots: Vec<Preference> = candidates
                .into_iter()
                .filter(|a| dominant_manipulation_of_infoset(kp, rule, *voter, a))
                .collect();
            Evidence {
                holds: !ballots.is_empty(),
                ballots,
                blocking: None,
            }
        }
        Property::ConditionalEquilibrium { .. } | Property::NotConditionalEquilibrium { .. } => {
            let verdict = is_conditional_equilibrium(model, rule, cp.expect("conditional profile"));
            let blocking = match verdict {
                EquilibriumVerdict::Equilibrium => None,
                EquilibriumVerdict::Blocked {
                    virtual_voter, alt, ..
                } => Some((virtual_voter, alt)),
            };
            let is_eq = blocking.is_none();
            Evidence {
                holds: if matches!(property, Property::ConditionalEquilibrium { .. }) {
                    is_eq
                } else {
                    !is_eq
                },
                ballots: Vec::new(),
                blocking,
            }
        }
    }
}

/// Evaluates `property` before and after announcing `phi`. Knowledge and
/// dominance are evaluated at `point`, which must survive.
pub fn check_preservation(
    model: &ProfileModel,
    rule: &dyn VotingRule,
    phi: &Formula,
    property: &Property,
    point: Option<StateId>,
) -> Result<Preservation, UpdateError> {
    check_preservation_with_mask(model, rule, &denotation(model, rule, phi), property, point)
}

fn check_preservation_with_mask(
    model: &ProfileModel,
    rule: &dyn VotingRule,
    keep: &[bool],
    property: &Property,
    point: Option<StateId>,
) -> Result<Preservation, UpdateError> {
    if property.pointed() && point.is_none() {
        return Err(AnalysisError::IllFormed("this property needs a point".into()).into());
    }
    let cp = match property {
        Property::ConditionalEquilibrium { profile }
        | Property::NotConditionalEquilibrium { profile } => {
            ConditionalProfile::new(model, profile.clone().into_choices())?;
            Some(profile)
        }
        _ => None,
    };
    let u = update_with_mask(model, keep, point)?;
    let updated_profile = cp.map(|cp| update_conditional_profile(model, cp, &u));
    let before = evidence(model, rule, property, point, cp);
    let after = evidence(&u.model, rule, property, u.point, updated_profile.as_ref());
    Ok(Preservation {
        before,
        after,
        update: u,
        updated_profile,
    })
}

/// Failures of preservation to look for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HuntTarget {
    /// Knowledge of manipulation held at the point and was lost.
    KnowledgeLost(KnowledgeMode),
    /// A dominant manipulation of the information set stopped being one.
    DominantLost,
    /// A conditional equilibrium became a non-equilibrium.
    EquilibriumLost,
    /// A non-equilibrium became a conditional equilibrium.
    NonEquilibriumLost,
}

impl HuntTarget {
    pub fn name(self) -> &'static str {
        match self {
            HuntTarget::KnowledgeLost(KnowledgeMode::DeDicto) => "knowledge_de_dicto_not_preserved",
            HuntTarget::KnowledgeLost(KnowledgeMode::DeRe) => "knowledge_de_re_not_preserved",
            HuntTarget::DominantLost => "dominant_manipulation_not_preserved",
            HuntTarget::EquilibriumLost => "conditional_equilibrium_not_preserved",
            HuntTarget::NonEquilibriumLost => "not_equilibrium_not_preserved",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HuntConfig {
    pub seed: u64,
    /// Number of (model, announcement) pairs to try.
    pub budget: usize,
    pub max_states: usize,
    /// Connective depth of announced formulas.
    pub max_depth: usize,
}

impl Default for HuntConfig {
    fn default() -> Self {
        HuntConfig {
            seed: 0,
            budget: 1000,
            max_states: 4,
            max_depth: 2,
        }
    }
}

/// A (model, announcement) pair on which a property is not preserved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub model: ProfileModel,
    pub announcement: Formula,
    pub point: Option<StateId>,
    pub property: Property,
    pub preservation: Preservation,
    /// 1-based index of the try that found it.
    pub attempt: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HuntOutcome {
    Found(Box<Counterexample>),
    /// Nothing found. `held_before` counts the checked instances where the
    /// property held before the update.
    BudgetExhausted {
        tried: usize,
        held_before: usize,
    },
}

/// Random search for a failure of preservation.
///
/// Each try draws a model with at most `max_states` states and an
/// announcement, then checks every point and voter (and, for dominance,
/// every ballot) where the property applies; equilibrium targets draw one
/// conditional profile over top-candidate ballots per try. The search is
/// sequential, so the first witness is a function of the seed.
pub fn search_counterexample(
    election: &Election,
    rule: &dyn VotingRule,
    target: HuntTarget,
    config: HuntConfig,
) -> HuntOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut held_before = 0;
    for attempt in 1..=config.budget {
        let model = random_model(&mut rng, election, config.max_states);
        let depth = rng.gen_range(0..=config.max_depth);
        let phi = random_formula(&mut rng, &model, depth, false, true);
        let keep = denotation(&model, rule, &phi);
        if !keep.iter().any(|&k| k) {
            continue;
        }
        let mut properties: Vec<(Property, Option<StateId>)> = Vec::new();
        match target {
            HuntTarget::KnowledgeLost(mode) => {
                for s in model.states().filter(|&s| keep[s]) {
                    for voter in election.voters() {
                        properties.push((Property::KnowsManipulation { voter, mode }, Some(s)));
                    }
                }
            }
            HuntTarget::DominantLost => {
                for s in model.states().filter(|&s| keep[s]) {
                    for voter in election.voters() {
                        for alt in election.all_orders() {
                            properties.push((
                                Property::DominantManipulation {
                                    voter,
                                    alt: Some(alt),
                                },
                                Some(s),
                            ));
                        }
                    }
                }
            }
            HuntTarget::EquilibriumLost => {
                let profile = random_conditional_profile(&mut rng, &model, rule.is_top_only());
                properties.push((Property::ConditionalEquilibrium { profile }, None));
            }
            HuntTarget::NonEquilibriumLost => {
                let profile = random_conditional_profile(&mut rng, &model, rule.is_top_only());
                properties.push((Property::NotConditionalEquilibrium { profile }, None));
            }
        }
        for (property, point) in properties {
            let preservation = check_preservation_with_mask(&model, rule, &keep, &property, point)
                .expect("announcement is nonempty and true at the point");
            held_before += usize::from(preservation.before.holds);
            if !preservation.preserved() {
                return HuntOutcome::Found(Box::new(Counterexample {
                    model,
                    announcement: phi,
                    point,
                    property,
                    preservation,
                    attempt,
                }));
            }
        }
    }
    HuntOutcome::BudgetExhausted {
        tried: config.budget,
        held_before,
    }
}
