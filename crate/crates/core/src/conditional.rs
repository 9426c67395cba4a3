//! The Bayesian game induced by a profile model.
//!
//! Each pair of a voter and one of her information sets is a *virtual voter*.
//! A conditional profile assigns a ballot to every virtual voter; at each
//! state the ballots of the blocks containing it form the cast profile. A
//! virtual voter's payoff is the rank value, under the voter's own (known)
//! preference, of the worst winner over the states of her block. A
//! conditional equilibrium is a conditional profile in which no virtual voter
//! can raise that payoff by changing her ballot while everyone else keeps
//! playing the conditional profile.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{AnalysisError, ModelError};
use crate::model::{Candidate, Election, Preference, Profile, ProfileModel, StateId, Voter};
use crate::voting::VotingRule;

/// A pair of a voter and one block of her partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VirtualVoter {
    pub voter: Voter,
    pub block: usize,
}

/// One ballot per information set, per voter.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConditionalProfile {
    choices: Vec<Vec<Preference>>,
}

impl ConditionalProfile {
    /// `choices[i][b]` is voter `i+1`'s ballot on her block `b`.
    pub fn new(model: &ProfileModel, choices: Vec<Vec<Preference>>) -> Result<Self, AnalysisError> {
        let e = model.election();
        if choices.len() != e.num_voters() {
            return Err(AnalysisError::IllFormed(format!(
                "{} voters, {} conditional preferences",
                e.num_voters(),
                choices.len()
            )));
        }
        for (v, c) in e.voters().zip(&choices) {
            let blocks = model.partition(v).num_blocks();
            if c.len() != blocks {
                return Err(AnalysisError::IllFormed(format!(
                    "voter {v} has {blocks} information sets, {} ballots given",
                    c.len()
                )));
            }
            for p in c {
                Preference::new(e, p.ranking().to_vec())?;
            }
        }
        Ok(ConditionalProfile { choices })
    }

    /// Every virtual voter votes her sincere preference.
    pub fn sincere(model: &ProfileModel) -> Self {
        let choices = model
            .election()
            .voters()
            .map(|v| {
                model
                    .partition(v)
                    .blocks()
                    .iter()
                    .map(|b| model.profile(b[0]).pref(v).clone())
                    .collect()
            })
            .collect();
        ConditionalProfile { choices }
    }

    pub fn choice(&self, vv: VirtualVoter) -> &Preference {
        &self.choices[vv.voter.index()][vv.block]
    }

    pub fn choices(&self, voter: Voter) -> &[Preference] {
        &self.choices[voter.index()]
    }

    pub fn with_choice(&self, vv: VirtualVoter, alt: Preference) -> Self {
        let mut next = self.clone();
        next.choices[vv.voter.index()][vv.block] = alt;
        next
    }

    pub(crate) fn from_choices_unchecked(choices: Vec<Vec<Preference>>) -> Self {
        ConditionalProfile { choices }
    }

    pub fn into_choices(self) -> Vec<Vec<Preference>> {
        self.choices
    }
}

/// All virtual voters: voters in order, blocks in partition order.
pub fn virtual_voters(model: &ProfileModel) -> Vec<VirtualVoter> {
    model
        .election()
        .voters()
        .flat_map(|voter| {
            (0..model.partition(voter).num_blocks()).map(move |block| VirtualVoter { voter, block })
        })
        .collect()
}

/// The ballots cast at state `s`.
pub fn induced_votes(model: &ProfileModel, cp: &ConditionalProfile, s: StateId) -> Profile {
    Profile(
        model
            .election()
            .voters()
            .map(|v| {
                let block = model.partition(v).block_of(s);
                cp.choice(VirtualVoter { voter: v, block }).clone()
            })
            .collect(),
    )
}

/// Winner at every state, in state order.
pub fn winners(
    model: &ProfileModel,
    rule: &dyn VotingRule,
    cp: &ConditionalProfile,
) -> Vec<Candidate> {
    model
        .states()
        .map(|s| rule.winner(&induced_votes(model, cp, s)))
        .collect()
}

fn worst_value(
    model: &ProfileModel,
    vv: VirtualVoter,
    winner_at: impl Fn(StateId) -> Candidate,
) -> usize {
    let block = &model.partition(vv.voter).blocks()[vv.block];
    let truth = model.profile(block[0]).pref(vv.voter);
    block
        .iter()
        .map(|&s| truth.rank_value(winner_at(s)))
        .min()
        .expect("blocks are nonempty")
}

/// Maximin payoff of a virtual voter: the rank value of the worst winner over
/// her block.
pub fn payoff(
    model: &ProfileModel,
    rule: &dyn VotingRule,
    cp: &ConditionalProfile,
    vv: VirtualVoter,
) -> usize {
    worst_value(model, vv, |s| rule.winner(&induced_votes(model, cp, s)))
}

/// Winners per state and payoffs per virtual voter of one conditional profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PayoffTable {
    pub winners: Vec<Candidate>,
    /// `payoffs[i][b]` for voter `i+1`, block `b`.
    pub payoffs: Vec<Vec<usize>>,
}

pub fn payoff_table(
    model: &ProfileModel,
    rule: &dyn VotingRule,
    cp: &ConditionalProfile,
) -> PayoffTable {
    let w = winners(model, rule, cp);
    let payoffs = model
        .election()
        .voters()
        .map(|voter| {
            (0..model.partition(voter).num_blocks())
                .map(|block| worst_value(model, VirtualVoter { voter, block }, |s| w[s]))
                .collect()
        })
        .collect();
    PayoffTable {
        winners: w,
        payoffs,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquilibriumVerdict {
    Equilibrium,
    Blocked {
        virtual_voter: VirtualVoter,
        alt: Preference,
        before: usize,
        after: usize,
    },
}

impl EquilibriumVerdict {
    pub fn is_equilibrium(&self) -> bool {
        matches!(self, EquilibriumVerdict::Equilibrium)
    }
}

/// Tests every virtual voter against every alternative ballot. A deviation
/// by `(i, B)` only changes the votes at states of `B`, so only those
/// winners are recomputed.
pub fn is_conditional_equilibrium(
    model: &ProfileModel,
    rule: &dyn VotingRule,
    cp: &ConditionalProfile,
) -> EquilibriumVerdict {
    let orders = model.election().all_orders();
    let w = winners(model, rule, cp);
    for vv in virtual_voters(model) {
        let block = &model.partition(vv.voter).blocks()[vv.block];
        let before = worst_value(model, vv, |s| w[s]);
        let votes: Vec<Profile> = block.iter().map(|&s| induced_votes(model, cp, s)).collect();
        for alt in &orders {
            if alt == cp.choice(vv) {
                continue;
            }
            let deviated: Vec<Candidate> = votes
                .iter()
                .map(|p| rule.winner(&p.with(vv.voter, alt.clone())))
                .collect();
            let after = worst_value(model, vv, |s| {
                deviated[block.iter().position(|&t| t == s).expect("state in block")]
            });
            if after > before {
                return EquilibriumVerdict::Blocked {
                    virtual_voter: vv,
                    alt: alt.clone(),
                    before,
                    after,
                };
            }
        }
    }
    EquilibriumVerdict::Equilibrium
}

/// Ballots a virtual voter may choose from: all orders, or one representative
/// per top candidate.
pub fn strategy_set(election: &Election, by_top: bool) -> Vec<Preference> {
    if by_top {
        election
            .candidates()
            .map(|c| election.top_representative(c))
            .collect()
    } else {
        election.all_orders()
    }
}

/// Number of conditional profiles, or `None` on overflow.
pub fn count_conditional_profiles(model: &ProfileModel, by_top: bool) -> Option<usize> {
    let per = strategy_set(model.election(), by_top).len();
    virtual_voters(model)
        .iter()
        .try_fold(1usize, |acc, _| acc.checked_mul(per))
}

/// All conditional profiles in enumeration order: voter 1 varies slowest,
/// and within a voter the first block varies slowest.
pub fn conditional_profiles(
    model: &ProfileModel,
    by_top: bool,
    limit: usize,
) -> Result<impl Iterator<Item = ConditionalProfile> + '_, AnalysisError> {
    if !count_conditional_profiles(model, by_top).is_some_and(|c| c <= limit) {
        return Err(ModelError::SizeLimit {
            what: "conditional profiles",
            limit,
        }
        .into());
    }
    let strategies = strategy_set(model.election(), by_top);
    let shape: Vec<usize> = model
        .election()
        .voters()
        .map(|v| model.partition(v).num_blocks())
        .collect();
    let slots = shape.iter().sum::<usize>();
    Ok((0..slots)
        .map(move |_| strategies.clone().into_iter())
        .multi_cartesian_product()
        .map(move |flat| {
            let mut it = flat.into_iter();
            let choices = shape
                .iter()
                .map(|&k| it.by_ref().take(k).collect())
                .collect();
            ConditionalProfile::from_choices_unchecked(choices)
        }))
}

fn check_rule(rule: &dyn VotingRule, by_top: bool) -> Result<(), AnalysisError> {
    if by_top && !rule.is_top_only() {
        return Err(AnalysisError::NotTopOnly);
    }
    Ok(())
}

/// Every conditional equilibrium, in enumeration order.
pub fn enumerate_conditional_equilibria(
    model: &ProfileModel,
    rule: &dyn VotingRule,
    by_top: bool,
    limit: usize,
) -> Result<Vec<ConditionalProfile>, AnalysisError> {
    check_rule(rule, by_top)?;
    Ok(conditional_profiles(model, by_top, limit)?
        .filter(|cp| is_conditional_equilibrium(model, rule, cp).is_equilibrium())
        .collect())
}

fn separator(election: &Election) -> &'static str {
    if election.compact_names() {
        ""
    } else {
        "/"
    }
}

/// A voter's conditional preference as text: tops (`ac`) under `by_top`,
/// otherwise full orders joined by `/`.
pub fn fmt_conditional_preference(
    election: &Election,
    choices: &[Preference],
    by_top: bool,
) -> String {
    if by_top {
        choices
            .iter()
            .map(|p| election.candidate_name(p.top()))
            .join(separator(election))
    } else {
        choices.iter().map(|p| election.fmt_order(p)).join("/")
    }
}

pub fn fmt_conditional_profile(
    model: &ProfileModel,
    cp: &ConditionalProfile,
    by_top: bool,
) -> String {
    let e = model.election();
    format!(
        "({})",
        e.voters()
            .map(|v| fmt_conditional_preference(e, cp.choices(v), by_top))
            .join(",")
    )
}

/// Winners at each state, e.g. `bbc`.
pub fn fmt_winners(election: &Election, winners: &[Candidate]) -> String {
    winners
        .iter()
        .map(|&c| election.candidate_name(c))
        .join(if election.compact_names() { "" } else { "," })
}

/// Payoffs as `ij.k`: one digit group per voter, one digit per block.
pub fn fmt_payoffs(payoffs: &[Vec<usize>]) -> String {
    let wide = payoffs.iter().flatten().any(|&v| v > 9);
    payoffs
        .iter()
        .map(|vs| vs.iter().join(if wide { ":" } else { "" }))
        .join(".")
}

/// Parses `(ac,bc)`, `(a/c,b/c)` or `(a>b>c/c>b>a, ...)`. A single item may
/// be a full order or a candidate, which stands for its top representative.
pub fn parse_conditional_profile(
    model: &ProfileModel,
    text: &str,
) -> Result<ConditionalProfile, AnalysisError> {
    let e = model.election();
    let body = text.trim();
    let body = body
        .strip_prefix('(')
        .and_then(|b| b.strip_suffix(')'))
        .unwrap_or(body);
    let mut choices = Vec::new();
    for part in body.split(',') {
        let part = part.trim();
        let items: Vec<String> = if part.contains('/') {
            part.split('/').map(|s| s.trim().to_string()).collect()
        } else if part.contains('>') || !e.compact_names() {
            vec![part.to_string()]
        } else {
            part.chars().map(String::from).collect()
        };
        let mut prefs = Vec::new();
        for item in items {
            let p = if item.contains('>') {
                e.parse_order(&item, '>')?
            } else {
                let c = e
                    .candidate(&item)
                    .ok_or_else(|| ModelError::UnknownCandidate(item.clone()))?;
                e.top_representative(c)
            };
            prefs.push(p);
        }
        choices.push(prefs);
    }
    ConditionalProfile::new(model, choices)
}

/// One cell of a two-voter grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridCell {
    pub winners: String,
    pub payoffs: String,
    pub equilibrium: bool,
}

/// The winners and payoff grids of a two-voter model: voter 1's conditional
/// preferences as rows, voter 2's as columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PayoffGrid {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub cells: Vec<Vec<GridCell>>,
}

impl PayoffGrid {
    fn render(&self, cell: impl Fn(&GridCell) -> String) -> String {
        let texts: Vec<Vec<String>> = self
            .cells
            .iter()
            .map(|r| r.iter().map(&cell).collect())
            .collect();
        let row_w = self.rows.iter().map(String::len).max().unwrap_or(0).max(3);
        let col_w = texts
            .iter()
            .flatten()
            .map(String::len)
            .chain(self.columns.iter().map(String::len))
            .max()
            .unwrap_or(0);
        let line = |label: &str, items: &[String]| {
            let mut l = format!("{label:<row_w$} |");
            for t in items {
                l.push_str(&format!(" {t:<col_w$}"));
            }
            format!("{}\n", l.trim_end())
        };
        let mut out = line("1\\2", &self.columns);
        for (label, row) in self.rows.iter().zip(&texts) {
            out.push_str(&line(label, row));
        }
        out
    }

    pub fn render_winners(&self) -> String {
        self.render(|c| c.winners.clone())
    }

    /// Payoff entries, equilibria suffixed with `*`.
    pub fn render_payoffs(&self) -> String {
        self.render(|c| format!("{}{}", c.payoffs, if c.equilibrium { "*" } else { "" }))
    }
}

pub fn payoff_matrix(
    model: &ProfileModel,
    rule: &dyn VotingRule,
    by_top: bool,
    limit: usize,
) -> Result<PayoffGrid, AnalysisError> {
    let e = model.election();
    if e.num_voters() != 2 {
        return Err(AnalysisError::NotTwoVoters(e.num_voters()));
    }
    check_rule(rule, by_top)?;
    if !count_conditional_profiles(model, by_top).is_some_and(|c| c <= limit) {
        return Err(ModelError::SizeLimit {
            what: "conditional profiles",
            limit,
        }
        .into());
    }
    let strategies = strategy_set(e, by_top);
    let options = |v: Voter| -> Vec<Vec<Preference>> {
        (0..model.partition(v).num_blocks())
            .map(|_| strategies.iter().cloned())
            .multi_cartesian_product()
            .collect()
    };
    let row_opts = options(Voter(1));
    let col_opts = options(Voter(2));
    let cells = row_opts
        .iter()
        .map(|r| {
            col_opts
                .iter()
                .map(|c| {
                    let cp = ConditionalProfile::from_choices_unchecked(vec![r.clone(), c.clone()]);
                    let table = payoff_table(model, rule, &cp);
                    GridCell {
                        winners: fmt_winners(e, &table.winners),
                        payoffs: fmt_payoffs(&table.payoffs),
                        equilibrium: is_conditional_equilibrium(model, rule, &cp).is_equilibrium(),
                    }
                })
                .collect()
        })
        .collect();
    Ok(PayoffGrid {
        rows: row_opts
            .iter()
            .map(|r| fmt_conditional_preference(e, r, by_top))
            .collect(),
        columns: col_opts
            .iter()
            .map(|c| fmt_conditional_preference(e, c, by_top))
            .collect(),
        cells,
    })
}

/// Machine-readable summary of one conditional profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileRecord {
    pub profile: String,
    pub winners: Vec<String>,
    pub payoffs: Vec<Vec<usize>>,
    pub equilibrium: bool,
}

pub fn profile_record(
    model: &ProfileModel,
    rule: &dyn VotingRule,
    cp: &ConditionalProfile,
    by_top: bool,
) -> ProfileRecord {
    let e = model.election();
    let table = payoff_table(model, rule, cp);
    ProfileRecord {
        profile: fmt_conditional_profile(model, cp, by_top),
        winners: table
            .winners
            .iter()
            .map(|&c| e.candidate_name(c).to_string())
            .collect(),
        payoffs: table.payoffs,
        equilibrium: is_conditional_equilibrium(model, rule, cp).is_equilibrium(),
    }
}
