//! Candidates, voters, preferences, profiles and profile models.
//!
//! A [`ProfileModel`] is a finite S5 Kripke structure whose states carry
//! profiles. Every voter's indistinguishability relation is stored as a
//! partition of the state set, so reflexivity, symmetry and transitivity hold
//! by construction. The only semantic side condition is that a voter cannot
//! confuse two states in which her own preference differs.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::ModelError;

/// Default cap on the number of states / profiles any exhaustive construction
/// may produce.
pub const DEFAULT_SIZE_LIMIT: usize = 1_000_000;

/// Index of a candidate in its [`Election`]'s candidate list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Candidate(pub usize);

/// A voter, numbered `1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Voter(pub usize);

impl Voter {
    /// Zero-based position, for indexing per-voter vectors.
    pub fn index(self) -> usize {
        self.0 - 1
    }

    pub fn from_index(index: usize) -> Self {
        Voter(index + 1)
    }
}

impl fmt::Display for Voter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index of a state in a [`ProfileModel`] (file order).
pub type StateId = usize;

/// The fixed set of candidates and the number of voters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Election {
    candidates: Vec<String>,
    voters: usize,
}

fn valid_candidate_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

impl Election {
    pub fn new<S: Into<String>>(
        candidates: impl IntoIterator<Item = S>,
        voters: usize,
    ) -> Result<Self, ModelError> {
        let candidates: Vec<String> = candidates.into_iter().map(Into::into).collect();
        if candidates.is_empty() {
            return Err(ModelError::NoCandidates);
        }
        if voters == 0 {
            return Err(ModelError::NoVoters);
        }
        let mut seen = BTreeSet::new();
        for c in &candidates {
            if !valid_candidate_id(c) {
                return Err(ModelError::InvalidCandidateId(c.clone()));
            }
            if !seen.insert(c.as_str()) {
                return Err(ModelError::DuplicateCandidate(c.clone()));
            }
        }
        Ok(Election { candidates, voters })
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn num_voters(&self) -> usize {
        self.voters
    }

    pub fn candidates(&self) -> impl Iterator<Item = Candidate> {
        (0..self.candidates.len()).map(Candidate)
    }

    pub fn voters(&self) -> impl Iterator<Item = Voter> {
        (1..=self.voters).map(Voter)
    }

    pub fn has_voter(&self, voter: Voter) -> bool {
        (1..=self.voters).contains(&voter.0)
    }

    pub fn candidate_name(&self, c: Candidate) -> &str {
        &self.candidates[c.0]
    }

    pub fn candidate_names(&self) -> &[String] {
        &self.candidates
    }

    pub fn candidate(&self, name: &str) -> Option<Candidate> {
        self.candidates
            .iter()
            .position(|c| c == name)
            .map(Candidate)
    }

    /// True when every candidate id is a single character, so that strings
    /// of candidates can be written without separators.
    pub fn compact_names(&self) -> bool {
        self.candidates.iter().all(|c| c.len() == 1)
    }

    /// m! linear orders, lexicographic in candidate order.
    pub fn num_orders(&self) -> usize {
        (1..=self.candidates.len()).product()
    }

    /// Number of profiles, `(m!)^n`, or `None` on overflow.
    pub fn num_profiles(&self) -> Option<usize> {
        let orders = self.num_orders();
        (0..self.voters).try_fold(1usize, |acc, _| acc.checked_mul(orders))
    }

    /// All linear orders over the candidates, lexicographic in candidate order.
    pub fn all_orders(&self) -> Vec<Preference> {
        self.candidates()
            .permutations(self.num_candidates())
            .map(Preference)
            .collect()
    }

    /// The order with `top` first and the remaining candidates in candidate
    /// order; stands for "a vote for `top`" under top-only rules.
    pub fn top_representative(&self, top: Candidate) -> Preference {
        let mut ranking = vec![top];
        ranking.extend(self.candidates().filter(|&c| c != top));
        Preference(ranking)
    }

    /// All `(m!)^n` profiles, voter 1 varying slowest.
    pub fn all_profiles(&self, limit: usize) -> Result<Vec<Profile>, ModelError> {
        let count = self.num_profiles().filter(|&c| c <= limit);
        let Some(_) = count else {
            return Err(ModelError::SizeLimit {
                what: "profiles",
                limit,
            });
        };
        let orders = self.all_orders();
        Ok((0..self.voters)
            .map(|_| orders.iter().cloned())
            .multi_cartesian_product()
            .map(Profile)
            .collect())
    }

    pub fn parse_order(&self, text: &str, sep: char) -> Result<Preference, ModelError> {
        let mut ranking = Vec::new();
        for name in text.split(sep).map(str::trim) {
            let c = self
                .candidate(name)
                .ok_or_else(|| ModelError::UnknownCandidate(name.to_string()))?;
            ranking.push(c);
        }
        Preference::new(self, ranking)
    }

    pub fn fmt_order(&self, p: &Preference) -> String {
        p.ranking()
            .iter()
            .map(|&c| self.candidate_name(c))
            .join(">")
    }

    pub fn fmt_profile(&self, p: &Profile) -> String {
        p.iter()
            .map(|(v, o)| format!("{}: {}", v, self.fmt_order(o)))
            .join(" ; ")
    }
}

/// A strict linear order over candidates, best first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Preference(Vec<Candidate>);

impl Preference {
    pub fn new(election: &Election, ranking: Vec<Candidate>) -> Result<Self, ModelError> {
        let m = election.num_candidates();
        let distinct: BTreeSet<_> = ranking.iter().collect();
        if ranking.len() != m || distinct.len() != m || ranking.iter().any(|c| c.0 >= m) {
            return Err(ModelError::NotAPermutation(
                ranking
                    .iter()
                    .map(|&c| {
                        if c.0 < m {
                            election.candidate_name(c).to_string()
                        } else {
                            format!("#{}", c.0)
                        }
                    })
                    .join(">"),
            ));
        }
        Ok(Preference(ranking))
    }

    pub fn ranking(&self) -> &[Candidate] {
        &self.0
    }

    pub fn top(&self) -> Candidate {
        self.0[0]
    }

    pub fn position(&self, c: Candidate) -> usize {
        self.0
            .iter()
            .position(|&x| x == c)
            .expect("candidate not ranked")
    }

    /// `m - 1 - position`: the best candidate is worth `m - 1`, the worst 0.
    pub fn rank_value(&self, c: Candidate) -> usize {
        self.0.len() - 1 - self.position(c)
    }

    /// Strict preference `a ≻ b`.
    pub fn prefers(&self, a: Candidate, b: Candidate) -> bool {
        self.position(a) < self.position(b)
    }

    /// Weak preference `a ⪰ b`.
    pub fn weakly_prefers(&self, a: Candidate, b: Candidate) -> bool {
        self.position(a) <= self.position(b)
    }
}

/// One preference per voter; index 0 holds voter 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Profile(pub Vec<Preference>);

impl Profile {
    pub fn new(election: &Election, prefs: Vec<Preference>) -> Result<Self, ModelError> {
        if prefs.len() != election.num_voters() {
            return Err(ModelError::IncompleteProfile {
                expected: election.num_voters(),
                found: prefs.len(),
            });
        }
        Ok(Profile(prefs))
    }

    pub fn pref(&self, voter: Voter) -> &Preference {
        &self.0[voter.index()]
    }

    /// The substituted profile `(▷_{-i}, alt)`.
    pub fn with(&self, voter: Voter, alt: Preference) -> Profile {
        let mut prefs = self.0.clone();
        prefs[voter.index()] = alt;
        Profile(prefs)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Voter, &Preference)> {
        self.0
            .iter()
            .enumerate()
            .map(|(i, p)| (Voter::from_index(i), p))
    }
}

/// A partition of the state set, blocks sorted by their least state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<StateId>>,
    block_of: Vec<usize>,
}

impl Partition {
    fn new(num_states: usize, mut blocks: Vec<Vec<StateId>>) -> Result<Self, ModelError> {
        let mut block_of = vec![usize::MAX; num_states];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(ModelError::Partition("empty block".into()));
            }
            block.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        for (bi, block) in blocks.iter().enumerate() {
            for &s in block {
                if s >= num_states {
                    return Err(ModelError::DanglingState(format!("#{s}")));
                }
                if block_of[s] != usize::MAX {
                    return Err(ModelError::Partition(format!(
                        "state #{s} occurs in two blocks"
                    )));
                }
                block_of[s] = bi;
            }
        }
        if let Some(s) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(ModelError::Partition(format!("state #{s} is not covered")));
        }
        Ok(Partition { blocks, block_of })
    }

    fn singletons(num_states: usize) -> Self {
        Partition {
            blocks: (0..num_states).map(|s| vec![s]).collect(),
            block_of: (0..num_states).collect(),
        }
    }

    pub fn blocks(&self) -> &[Vec<StateId>] {
        &self.blocks
    }

    pub fn block_of(&self, s: StateId) -> usize {
        self.block_of[s]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn same_block(&self, s: StateId, t: StateId) -> bool {
        self.block_of[s] == self.block_of[t]
    }
}

/// The block `[s]_{~i}` of a voter's partition, with its index in that
/// partition's block order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InformationSet {
    pub voter: Voter,
    pub index: usize,
    pub states: Vec<StateId>,
}

/// Finite states, one partition per voter, and a profile per state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileModel {
    election: Election,
    labels: Vec<String>,
    partitions: Vec<Partition>,
    valuation: Vec<Profile>,
}

impl ProfileModel {
    /// Builds and validates a model. `partitions[i]` holds voter `i+1`'s blocks
    /// as state indices; `None` means all singletons.
    pub fn new(
        election: Election,
        labels: Vec<String>,
        partitions: Vec<Option<Vec<Vec<StateId>>>>,
        valuation: Vec<Profile>,
    ) -> Result<Self, ModelError> {
        let model = Self::kripke(election, labels, partitions, valuation)?;
        model.validate()?;
        Ok(model)
    }

    /// Builds a structure whose relations are partitions but whose valuation
    /// need not respect voters' own preferences. Such structures are plain
    /// S5 Kripke models; [`ProfileModel::validate`] rejects them.
    pub fn kripke(
        election: Election,
        labels: Vec<String>,
        partitions: Vec<Option<Vec<Vec<StateId>>>>,
        valuation: Vec<Profile>,
    ) -> Result<Self, ModelError> {
        if labels.is_empty() {
            return Err(ModelError::EmptyModel);
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(ModelError::DuplicateState(l.clone()));
            }
        }
        if valuation.len() != labels.len() {
            return Err(ModelError::Partition(format!(
                "{} states but {} profiles",
                labels.len(),
                valuation.len()
            )));
        }
        for p in &valuation {
            if p.0.len() != election.num_voters() {
                return Err(ModelError::IncompleteProfile {
                    expected: election.num_voters(),
                    found: p.0.len(),
                });
            }
            for o in &p.0 {
                Preference::new(&election, o.0.clone())?;
            }
        }
        if partitions.len() != election.num_voters() {
            return Err(ModelError::Partition(format!(
                "{} voters but {} partitions",
                election.num_voters(),
                partitions.len()
            )));
        }
        let n_states = labels.len();
        let partitions = partitions
            .into_iter()
            .map(|p| match p {
                Some(blocks) => Partition::new(n_states, blocks),
                None => Ok(Partition::singletons(n_states)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ProfileModel {
            election,
            labels,
            partitions,
            valuation,
        })
    }

    /// Checks the own-preference condition: `s ~_i t` implies
    /// `π(s)_i = π(t)_i`. Partition structure is checked at construction.
    pub fn validate(&self) -> Result<(), ModelError> {
        for voter in self.election.voters() {
            for block in self.partition(voter).blocks() {
                let first = block[0];
                for &t in &block[1..] {
                    if self.valuation[first].pref(voter) != self.valuation[t].pref(voter) {
                        return Err(ModelError::OwnPreferenceViolation {
                            voter,
                            s: self.labels[first].clone(),
                            t: self.labels[t].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn election(&self) -> &Election {
        &self.election
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.labels.len()
    }

    pub fn label(&self, s: StateId) -> &str {
        &self.labels[s]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn state(&self, label: &str) -> Result<StateId, ModelError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| ModelError::UnknownState(label.to_string()))
    }

    pub fn profile(&self, s: StateId) -> &Profile {
        &self.valuation[s]
    }

    pub fn valuation(&self) -> &[Profile] {
        &self.valuation
    }

    pub fn partition(&self, voter: Voter) -> &Partition {
        &self.partitions[voter.index()]
    }

    pub fn information_set(&self, voter: Voter, s: StateId) -> Result<InformationSet, ModelError> {
        if s >= self.num_states() {
            return Err(ModelError::UnknownState(format!("#{s}")));
        }
        let partition = self.partition(voter);
        let index = partition.block_of(s);
        Ok(InformationSet {
            voter,
            index,
            states: partition.blocks()[index].clone(),
        })
    }

    /// All information sets of a voter, in block order.
    pub fn information_sets(&self, voter: Voter) -> Vec<InformationSet> {
        self.partition(voter)
            .blocks()
            .iter()
            .enumerate()
            .map(|(index, states)| InformationSet {
                voter,
                index,
                states: states.clone(),
            })
            .collect()
    }

    /// `π([s]_{~i})`: the distinct profiles of an information set, in order of
    /// first occurrence.
    pub fn profiles_of(&self, info: &InformationSet) -> Vec<Profile> {
        let mut out: Vec<Profile> = Vec::new();
        for &s in &info.states {
            let p = &self.valuation[s];
            if !out.contains(p) {
                out.push(p.clone());
            }
        }
        out
    }

    /// The submodel on the states where `keep` is set, relations intersected.
    /// Returns the model and, for each new state, its index in `self`.
    pub fn restrict(&self, keep: &[bool]) -> Result<(ProfileModel, Vec<StateId>), ModelError> {
        let survivors: Vec<StateId> = self.states().filter(|&s| keep[s]).collect();
        if survivors.is_empty() {
            return Err(ModelError::EmptyModel);
        }
        let mut new_index = vec![usize::MAX; self.num_states()];
        for (ni, &s) in survivors.iter().enumerate() {
            new_index[s] = ni;
        }
        let partitions = self
            .partitions
            .iter()
            .map(|p| {
                let blocks: Vec<Vec<StateId>> = p
                    .blocks()
                    .iter()
                    .map(|b| {
                        b.iter()
                            .filter(|&&s| keep[s])
                            .map(|&s| new_index[s])
                            .collect::<Vec<_>>()
                    })
                    .filter(|b| !b.is_empty())
                    .collect();
                Partition::new(survivors.len(), blocks)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let model = ProfileModel {
            election: self.election.clone(),
            labels: survivors.iter().map(|&s| self.labels[s].clone()).collect(),
            partitions,
            valuation: survivors
                .iter()
                .map(|&s| self.valuation[s].clone())
                .collect(),
        };
        Ok((model, survivors))
    }

    /// Block lists per voter, as accepted by [`ProfileModel::new`].
    pub fn partition_blocks(&self) -> Vec<Option<Vec<Vec<StateId>>>> {
        self.partitions
            .iter()
            .map(|p| Some(p.blocks().to_vec()))
            .collect()
    }
}

/// A profile model pointed at an actual state.
#[derive(Clone, Copy, Debug)]
pub struct KnowledgeProfile<'a> {
    pub model: &'a ProfileModel,
    pub point: StateId,
}

impl<'a> KnowledgeProfile<'a> {
    pub fn new(model: &'a ProfileModel, point: StateId) -> Result<Self, ModelError> {
        if point >= model.num_states() {
            return Err(ModelError::UnknownState(format!("#{point}")));
        }
        Ok(KnowledgeProfile { model, point })
    }

    pub fn profile(&self) -> &'a Profile {
        self.model.profile(self.point)
    }

    pub fn information_set(&self, voter: Voter) -> InformationSet {
        self.model
            .information_set(voter, self.point)
            .expect("point is a state")
    }

    pub fn profiles_of(&self, voter: Voter) -> Vec<Profile> {
        self.model.profiles_of(&self.information_set(voter))
    }
}

/// The hypercube model: one state per profile, each voter knowing exactly
/// her own preference. States are labelled `h0, h1, ...` in
/// [`Election::all_profiles`] order.
pub fn hypercube(election: &Election, limit: usize) -> Result<ProfileModel, ModelError> {
    let profiles = election
        .all_profiles(limit)
        .map_err(|_| ModelError::SizeLimit {
            what: "hypercube states",
            limit,
        })?;
    let labels = (0..profiles.len()).map(|k| format!("h{k}")).collect();
    let partitions = election
        .voters()
        .map(|v| {
            let mut blocks: Vec<(Preference, Vec<StateId>)> = Vec::new();
            for (s, p) in profiles.iter().enumerate() {
                match blocks.iter_mut().find(|(o, _)| o == p.pref(v)) {
                    Some((_, b)) => b.push(s),
                    None => blocks.push((p.pref(v).clone(), vec![s])),
                }
            }
            Some(blocks.into_iter().map(|(_, b)| b).collect())
        })
        .collect();
    ProfileModel::new(election.clone(), labels, partitions, profiles)
}
