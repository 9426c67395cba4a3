//! Formulas that pick out exactly one set of states of a given model.
//!
//! States are grouped into bisimulation classes by partition refinement,
//! starting from equal profiles and splitting on the classes each voter
//! considers possible. Every class carries a formula true at exactly its
//! members, so any union of classes is definable.

use std::collections::BTreeSet;
use std::collections::HashMap;

use crate::error::LogicError;
use crate::model::{InformationSet, ProfileModel, StateId, Voter};

use super::Formula;

/// A formula true at exactly the states of `target` in the model it was
/// built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicFormula {
    pub target: InformationSet,
    pub formula: Formula,
}

/// The coarsest bisimulation of a model, with a defining formula per class.
#[derive(Clone, Debug)]
pub struct Classes {
    pub class_of: Vec<usize>,
    pub formulas: Vec<Formula>,
    /// Refinement rounds until the classes stabilized.
    pub rounds: usize,
}

impl Classes {
    pub fn new(model: &ProfileModel) -> Self {
        let mut class_of = Vec::with_capacity(model.num_states());
        let mut formulas = Vec::new();
        let mut seen: HashMap<_, usize> = HashMap::new();
        for s in model.states() {
            let p = model.profile(s);
            let c = *seen.entry(p).or_insert_with(|| {
                formulas.push(Formula::Profile(p.clone()));
                formulas.len() - 1
            });
            class_of.push(c);
        }

        let voters: Vec<Voter> = model.election().voters().collect();
        let mut rounds = 0;
        loop {
            // per voter, the set of classes each block meets
            let seen_by: Vec<Vec<BTreeSet<usize>>> = voters
                .iter()
                .map(|&v| {
                    model
                        .partition(v)
                        .blocks()
                        .iter()
                        .map(|b| b.iter().map(|&t| class_of[t]).collect())
                        .collect()
                })
                .collect();
            let view = |s: StateId, k: usize| &seen_by[k][model.partition(voters[k]).block_of(s)];

            let mut next_of = Vec::with_capacity(model.num_states());
            let mut signatures: HashMap<(usize, Vec<&BTreeSet<usize>>), usize> = HashMap::new();
            let mut members: Vec<Vec<StateId>> = Vec::new();
            for s in model.states() {
                let sig = (class_of[s], (0..voters.len()).map(|k| view(s, k)).collect());
                let c = *signatures.entry(sig).or_insert_with(|| {
                    members.push(Vec::new());
                    members.len() - 1
                });
                members[c].push(s);
                next_of.push(c);
            }
            if members.len() == formulas.len() {
                break;
            }
            rounds += 1;

            let old_size = |c: usize| class_of.iter().filter(|&&x| x == c).count();
            let next_formulas = members
                .iter()
                .map(|ms| {
                    let s = ms[0];
                    let old = class_of[s];
                    if ms.len() == old_size(old) {
                        return formulas[old].clone();
                    }
                    let mut f = formulas[old].clone();
                    for (k, &v) in voters.iter().enumerate() {
                        let split = model
                            .states()
                            .filter(|&t| class_of[t] == old)
                            .any(|t| view(t, k) != view(s, k));
                        if !split {
                            continue;
                        }
                        let seen = view(s, k);
                        let each = seen
                            .iter()
                            .map(|&d| Formula::possible(v, formulas[d].clone()));
                        let only = Formula::know(
                            v,
                            Formula::disj(seen.iter().map(|&d| formulas[d].clone())),
                        );
                        f = f.and(Formula::conj(each).and(only));
                    }
                    f
                })
                .collect();
            class_of = next_of;
            formulas = next_formulas;
        }
        Classes {
            class_of,
            formulas,
            rounds,
        }
    }

    pub fn num_classes(&self) -> usize {
        self.formulas.len()
    }

    /// A formula true at exactly `states`, or the pair of bisimilar states
    /// that no formula can separate.
    pub fn define(&self, model: &ProfileModel, states: &[StateId]) -> Result<Formula, LogicError> {
        let mut inside = vec![false; model.num_states()];
        for &s in states {
            inside[s] = true;
        }
        let mut picked = BTreeSet::new();
        for &s in states {
            picked.insert(self.class_of[s]);
        }
        for t in model.states() {
            if !inside[t] && picked.contains(&self.class_of[t]) {
                let s = states
                    .iter()
                    .find(|&&s| self.class_of[s] == self.class_of[t])
                    .expect("picked from states");
                return Err(LogicError::Indistinguishable {
                    a: model.label(*s).to_string(),
                    b: model.label(t).to_string(),
                });
            }
        }
        Ok(Formula::disj(
            picked.into_iter().map(|c| self.formulas[c].clone()),
        ))
    }
}

/// A formula true at exactly the states of `info`.
pub fn characteristic_formula(
    model: &ProfileModel,
    info: &InformationSet,
) -> Result<CharacteristicFormula, LogicError> {
    let formula = Classes::new(model).define(model, &info.states)?;
    Ok(CharacteristicFormula {
        target: info.clone(),
        formula,
    })
}
