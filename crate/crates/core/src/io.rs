//! The line-oriented text format for profile models.
//!
//! ```text
//! # comments run to end of line
//! candidates: a b c
//! voters: 2
//! tiebreak: b a c
//! state s = 1: a>b>c ; 2: c>b>a
//! state t = 1: a>b>c ; 2: c>b>a
//! state u = 1: c>b>a ; 2: c>b>a
//! indist 1: {s t} {u}
//! indist 2: {s} {t u}
//! point: t
//! ```
//!
//! `tiebreak`, `point` and `indist` lines are optional; a missing `indist`
//! line means the voter can tell every state apart.

use std::fmt::Write as _;

use itertools::Itertools;

use crate::error::{FormatError, ModelError};
use crate::model::{Election, Preference, Profile, ProfileModel, StateId};

/// A parsed model file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelDoc {
    pub model: ProfileModel,
    pub tiebreak: Option<Preference>,
    pub point: Option<StateId>,
}

fn valid_label(label: &str) -> bool {
    !label.is_empty()
        && label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | '\''))
}

struct LineParser {
    candidates: Option<Vec<String>>,
    voters: Option<usize>,
    election: Option<Election>,
    tiebreak: Option<(usize, String)>,
    point: Option<(usize, String)>,
    labels: Vec<String>,
    valuation: Vec<Profile>,
    indist: Vec<Option<(usize, Vec<Vec<String>>)>>,
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

impl LineParser {
    fn election(&mut self, line: usize) -> Result<&Election, FormatError> {
        if self.election.is_none() {
            let (Some(c), Some(v)) = (&self.candidates, self.voters) else {
                return Err(syntax(line, "`candidates:` and `voters:` must come first"));
            };
            let e = Election::new(c.clone(), v)
                .map_err(|source| FormatError::Model { line, source })?;
            self.indist = vec![None; v];
            self.election = Some(e);
        }
        Ok(self.election.as_ref().unwrap())
    }

    fn order(&mut self, line: usize, text: &str) -> Result<Preference, FormatError> {
        let e = self.election(line)?;
        e.parse_order(text, '>')
            .map_err(|source| FormatError::Model { line, source })
    }

    fn state(&mut self, line: usize, rest: &str) -> Result<(), FormatError> {
        let (label, body) = rest
            .split_once('=')
            .ok_or_else(|| syntax(line, "expected `state LABEL = 1: order ; 2: order ...`"))?;
        let label = label.trim();
        if !valid_label(label) {
            return Err(syntax(line, format!("invalid state label `{label}`")));
        }
        if self.labels.iter().any(|l| l == label) {
            return Err(FormatError::Model {
                line,
                source: ModelError::DuplicateState(label.to_string()),
            });
        }
        let n = self.election(line)?.num_voters();
        let mut prefs: Vec<Option<Preference>> = vec![None; n];
        for entry in body.split(';') {
            let (voter, order) = entry.split_once(':').ok_or_else(|| {
                syntax(
                    line,
                    format!("expected `voter: order`, found `{}`", entry.trim()),
                )
            })?;
            let voter: usize = voter
                .trim()
                .parse()
                .map_err(|_| syntax(line, format!("bad voter `{}`", voter.trim())))?;
            if voter == 0 || voter > n {
                return Err(syntax(line, format!("unknown voter {voter}")));
            }
            if prefs[voter - 1].is_some() {
                return Err(syntax(line, format!("voter {voter} listed twice")));
            }
            prefs[voter - 1] = Some(self.order(line, order.trim())?);
        }
        let prefs: Vec<Preference> = prefs
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| syntax(line, format!("voter {} missing", i + 1))))
            .collect::<Result<_, _>>()?;
        self.labels.push(label.to_string());
        self.valuation.push(Profile(prefs));
        Ok(())
    }

    fn indist(&mut self, line: usize, rest: &str) -> Result<(), FormatError> {
        let (voter, blocks) = rest
            .split_once(':')
            .ok_or_else(|| syntax(line, "expected `indist VOTER: {s t} {u}`"))?;
        let n = self.election(line)?.num_voters();
        let voter: usize = voter
            .trim()
            .parse()
            .map_err(|_| syntax(line, format!("bad voter `{}`", voter.trim())))?;
        if voter == 0 || voter > n {
            return Err(syntax(line, format!("unknown voter {voter}")));
        }
        if self.indist[voter - 1].is_some() {
            return Err(syntax(
                line,
                format!("second `indist` line for voter {voter}"),
            ));
        }
        let mut parsed = Vec::new();
        let mut rest = blocks.trim();
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('{') else {
                return Err(syntax(line, format!("expected `{{`, found `{rest}`")));
            };
            let close = body.find('}').ok_or_else(|| syntax(line, "unclosed `{`"))?;
            parsed.push(body[..close].split_whitespace().map(String::from).collect());
            rest = body[close + 1..].trim_start();
        }
        self.indist[voter - 1] = Some((line, parsed));
        Ok(())
    }

    fn finish(self, last_line: usize, checked: bool) -> Result<ModelDoc, FormatError> {
        let mut this = self;
        let election = this.election(last_line)?.clone();
        if this.labels.is_empty() {
            return Err(syntax(last_line, "no `state` lines"));
        }
        let labels = this.labels;
        let lookup = |line: usize, label: &str| {
            labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| FormatError::Model {
                    line,
                    source: ModelError::DanglingState(label.to_string()),
                })
        };
        let mut partitions = Vec::new();
        for entry in &this.indist {
            partitions.push(match entry {
                None => None,
                Some((line, blocks)) => Some(
                    blocks
                        .iter()
                        .map(|b| {
                            b.iter()
                                .map(|l| lookup(*line, l))
                                .collect::<Result<Vec<_>, _>>()
                        })
                        .collect::<Result<Vec<_>, _>>()?,
                ),
            });
        }
        let tiebreak = match this.tiebreak {
            Some((line, text)) => Some(
                election
                    .parse_order(&text.split_whitespace().join(">"), '>')
                    .map_err(|source| FormatError::Model { line, source })?,
            ),
            None => None,
        };
        let point = match &this.point {
            Some((line, label)) => Some(lookup(*line, label)?),
            None => None,
        };
        let model = if checked {
            ProfileModel::new(election, labels, partitions, this.valuation)?
        } else {
            ProfileModel::kripke(election, labels, partitions, this.valuation)?
        };
        Ok(ModelDoc {
            model,
            tiebreak,
            point,
        })
    }
}

/// Parses the model format. Errors carry 1-based line numbers.
pub fn parse_model(src: &str) -> Result<ModelDoc, FormatError> {
    parse(src, true)
}

/// Like [`parse_model`], but accepts structures in which a voter confuses
/// states with different own preferences (see [`ProfileModel::kripke`]).
pub fn parse_structure(src: &str) -> Result<ModelDoc, FormatError> {
    parse(src, false)
}

fn parse(src: &str, checked: bool) -> Result<ModelDoc, FormatError> {
    let mut p = LineParser {
        candidates: None,
        voters: None,
        election: None,
        tiebreak: None,
        point: None,
        labels: Vec::new(),
        valuation: Vec::new(),
        indist: Vec::new(),
    };
    let mut last = 0;
    for (k, raw) in src.lines().enumerate() {
        let line = k + 1;
        last = line;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if let Some(rest) = text.strip_prefix("candidates:") {
            if p.candidates.is_some() || p.election.is_some() {
                return Err(syntax(line, "duplicate `candidates:`"));
            }
            p.candidates = Some(rest.split_whitespace().map(String::from).collect());
        } else if let Some(rest) = text.strip_prefix("voters:") {
            if p.voters.is_some() {
                return Err(syntax(line, "duplicate `voters:`"));
            }
            p.voters = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| syntax(line, format!("bad voter count `{}`", rest.trim())))?,
            );
        } else if let Some(rest) = text.strip_prefix("tiebreak:") {
            if p.tiebreak.is_some() {
                return Err(syntax(line, "duplicate `tiebreak:`"));
            }
            p.tiebreak = Some((line, rest.trim().to_string()));
        } else if let Some(rest) = text.strip_prefix("point:") {
            if p.point.is_some() {
                return Err(syntax(line, "duplicate `point:`"));
            }
            p.point = Some((line, rest.trim().to_string()));
        } else if let Some(rest) = text.strip_prefix("state ") {
            p.state(line, rest)?;
        } else if let Some(rest) = text.strip_prefix("indist ") {
            p.indist(line, rest)?;
        } else {
            return Err(syntax(line, format!("unrecognised line `{text}`")));
        }
    }
    p.finish(last.max(1), checked)
}

/// Canonical serialization; `parse_model(&write_model(d)) == d`.
pub fn write_model(doc: &ModelDoc) -> String {
    let m = &doc.model;
    let e = m.election();
    let mut out = String::new();
    writeln!(out, "candidates: {}", e.candidate_names().join(" ")).unwrap();
    writeln!(out, "voters: {}", e.num_voters()).unwrap();
    if let Some(tb) = &doc.tiebreak {
        writeln!(
            out,
            "tiebreak: {}",
            tb.ranking().iter().map(|&c| e.candidate_name(c)).join(" ")
        )
        .unwrap();
    }
    for s in m.states() {
        writeln!(
            out,
            "state {} = {}",
            m.label(s),
            e.fmt_profile(m.profile(s))
        )
        .unwrap();
    }
    for v in e.voters() {
        let blocks = m
            .partition(v)
            .blocks()
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(|&s| m.label(s)).join(" ")))
            .join(" ");
        writeln!(out, "indist {}: {}", v, blocks).unwrap();
    }
    if let Some(p) = doc.point {
        writeln!(out, "point: {}", m.label(p)).unwrap();
    }
    out
}
