//! Fixture loading and from-scratch oracles shared by the integration tests.
//! The oracles only read the model's raw data (rankings, blocks, ballots)
//! and never call the library's rule, payoff or equilibrium code.

#![allow(dead_code)]

use std::path::PathBuf;

use epivote::conditional::ConditionalProfile;
use epivote::io::{parse_model, ModelDoc};
use epivote::{Candidate, Plurality, Preference, ProfileModel};

pub const FIXTURES: [&str; 5] = [
    "two_voters_sincere",
    "two_voters_shared",
    "two_state_uncertain",
    "three_state_stu",
    "three_state_tuv",
];

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn load(name: &str) -> (ModelDoc, Plurality) {
    let path = fixtures_dir().join(format!("{name}.model"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let doc = parse_model(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let rule = Plurality::new(doc.tiebreak.clone().expect("fixtures carry a tiebreak"));
    (doc, rule)
}

/// A rendered grid split into cells: `(row label, cells)`, header first.
pub type Table = Vec<(String, Vec<String>)>;

pub fn parse_table(text: &str) -> Table {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (label, rest) = l.split_once('|').expect("grid lines have a bar");
            (
                label.trim().to_string(),
                rest.split_whitespace().map(String::from).collect(),
            )
        })
        .collect()
}

pub fn expected_text(name: &str, kind: &str) -> String {
    let path = fixtures_dir().join(format!("expected/{name}.{kind}.txt"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Erratum {
    pub fixture: String,
    pub kind: String,
    pub row: String,
    pub column: String,
    pub transcribed: String,
    pub corrected: String,
}

pub fn errata() -> Vec<Erratum> {
    let text =
        std::fs::read_to_string(fixtures_dir().join("expected/errata.txt")).expect("errata file");
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            assert_eq!(f.len(), 5, "bad errata line {l:?}");
            let (fixture, kind) = f[0].split_once('.').expect("grid is fixture.kind");
            Erratum {
                fixture: fixture.into(),
                kind: kind.into(),
                row: f[1].into(),
                column: f[2].into(),
                transcribed: f[3].into(),
                corrected: f[4].into(),
            }
        })
        .collect()
}

pub fn cell<'a>(table: &'a Table, row: &str, column: &str) -> &'a str {
    let col = table[0]
        .1
        .iter()
        .position(|c| c == column)
        .expect("column exists");
    let (_, cells) = table
        .iter()
        .skip(1)
        .find(|(r, _)| r == row)
        .expect("row exists");
    &cells[col]
}

fn cell_mut<'a>(table: &'a mut Table, row: &str, column: &str) -> &'a mut String {
    let col = table[0]
        .1
        .iter()
        .position(|c| c == column)
        .expect("column exists");
    let (_, cells) = table
        .iter_mut()
        .skip(1)
        .find(|(r, _)| r == row)
        .expect("row exists");
    &mut cells[col]
}

/// The transcribed grid with the listed errata applied, and how many were.
pub fn expected_table(name: &str, kind: &str) -> (Table, usize) {
    let mut table = parse_table(&expected_text(name, kind));
    let mut applied = 0;
    for e in errata()
        .iter()
        .filter(|e| e.fixture == name && e.kind == kind)
    {
        let c = cell_mut(&mut table, &e.row, &e.column);
        let star = if c.ends_with('*') { "*" } else { "" };
        assert_eq!(
            c.trim_end_matches('*'),
            e.transcribed,
            "erratum does not match the transcription"
        );
        *c = format!("{}{star}", e.corrected);
        applied += 1;
    }
    (table, applied)
}

/// Rank value of `c` under `ranking`: top gets `m-1`, bottom 0.
pub fn rank(pref: &Preference, c: Candidate) -> usize {
    let r = pref.ranking();
    r.len() - 1 - r.iter().position(|&x| x == c).expect("candidate is ranked")
}

/// Payoff entry implied by a winners string (one candidate name per state),
/// computed directly from the blocks and true rankings.
pub fn payoffs_from_winners(doc: &ModelDoc, winners: &str) -> String {
    let m = &doc.model;
    let e = m.election();
    let w: Vec<Candidate> = winners
        .chars()
        .map(|ch| e.candidate(&ch.to_string()).expect("winner is a candidate"))
        .collect();
    assert_eq!(w.len(), m.num_states());
    e.voters()
        .map(|v| {
            m.partition(v)
                .blocks()
                .iter()
                .map(|b| {
                    let truth = m.profile(b[0]).pref(v);
                    b.iter()
                        .map(|&s| rank(truth, w[s]))
                        .min()
                        .unwrap()
                        .to_string()
                })
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join(".")
}

/// Plurality from first principles: most first places, ties to the earliest
/// candidate of `tiebreak`.
pub fn plurality(tiebreak: &[Candidate], tops: &[Candidate]) -> Candidate {
    let best = tiebreak
        .iter()
        .map(|c| tops.iter().filter(|&t| t == c).count())
        .max()
        .unwrap();
    *tiebreak
        .iter()
        .find(|c| tops.iter().filter(|t| t == c).count() == best)
        .unwrap()
}

/// All rankings of `0..m`, generated independently of the library.
pub fn permutations(m: usize) -> Vec<Vec<Candidate>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, Candidate(m - 1));
            out.push(q);
        }
    }
    out
}

/// Winners at every state when each voter casts `ballots[v][block]`.
fn all_winners(
    model: &ProfileModel,
    tiebreak: &[Candidate],
    ballots: &[Vec<Vec<Candidate>>],
) -> Vec<Candidate> {
    model
        .states()
        .map(|s| {
            let tops: Vec<Candidate> = model
                .election()
                .voters()
                .map(|v| ballots[v.index()][model.partition(v).block_of(s)][0])
                .collect();
            plurality(tiebreak, &tops)
        })
        .collect()
}

/// Conditional equilibrium by brute force: for every virtual voter and
/// every ranking, recompute every winner of the model and compare the
/// worst outcome over the block.
pub fn brute_force_equilibrium(
    model: &ProfileModel,
    tiebreak: &Preference,
    cp: &ConditionalProfile,
) -> bool {
    let e = model.election();
    let tb = tiebreak.ranking();
    let ballots: Vec<Vec<Vec<Candidate>>> = e
        .voters()
        .map(|v| cp.choices(v).iter().map(|p| p.ranking().to_vec()).collect())
        .collect();
    let base = all_winners(model, tb, &ballots);
    let alternatives = permutations(e.num_candidates());
    for v in e.voters() {
        for (b, block) in model.partition(v).blocks().iter().enumerate() {
            let truth = model.profile(block[0]).pref(v);
            let worst = |w: &[Candidate]| block.iter().map(|&s| rank(truth, w[s])).min().unwrap();
            let before = worst(&base);
            for alt in &alternatives {
                let mut dev = ballots.clone();
                dev[v.index()][b] = alt.clone();
                if worst(&all_winners(model, tb, &dev)) > before {
                    return false;
                }
            }
        }
    }
    true
}

/// Every valid model with `k` states over `election`, up to the order of
/// states: valuations are nondecreasing in the profile index, and each
/// voter's partition is any refinement of the grouping by her own ranking.
pub fn all_models(election: &epivote::Election, k: usize) -> Vec<ProfileModel> {
    use itertools::Itertools;
    let profiles = election.all_profiles(epivote::DEFAULT_SIZE_LIMIT).unwrap();
    let mut out = Vec::new();
    for idx in (0..profiles.len()).combinations_with_replacement(k) {
        let valuation: Vec<_> = idx.iter().map(|&i| profiles[i].clone()).collect();
        let per_voter: Vec<Vec<Vec<Vec<usize>>>> = election
            .voters()
            .map(|v| {
                set_partitions(k)
                    .into_iter()
                    .filter(|blocks| {
                        blocks.iter().all(|b| {
                            b.iter()
                                .all(|&s| valuation[s].pref(v) == valuation[b[0]].pref(v))
                        })
                    })
                    .collect()
            })
            .collect();
        for parts in per_voter.into_iter().multi_cartesian_product() {
            let labels = (0..k).map(|s| format!("s{s}")).collect();
            let model = ProfileModel::new(
                election.clone(),
                labels,
                parts.into_iter().map(Some).collect(),
                valuation.clone(),
            )
            .expect("refinements of the own-preference grouping are valid");
            out.push(model);
        }
    }
    out
}

/// All set partitions of `0..k`.
pub fn set_partitions(k: usize) -> Vec<Vec<Vec<usize>>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in set_partitions(k - 1) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].push(k - 1);
            out.push(q);
        }
        let mut q = p;
        q.push(vec![k - 1]);
        out.push(q);
    }
    out
}
