//! `epivote`: command-line front end for profile models.
//!
//! Exit codes: 0 success (or the checked property holds), 1 the checked
//! property fails, 2 usage, parse or validation error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use epivote::conditional::{
    conditional_profiles, enumerate_conditional_equilibria, fmt_conditional_profile, fmt_payoffs,
    fmt_winners, parse_conditional_profile, payoff_matrix, payoff_table, profile_record,
};
use epivote::dynamics::{
    check_preservation, search_counterexample, update, HuntConfig, HuntOutcome, HuntTarget,
    Property,
};
use epivote::io::{parse_model, parse_structure, write_model, ModelDoc};
use epivote::logic::{
    check_axioms, denotation, denotation_rule_free, expand_abbreviations, parse,
    reduce_announcements, Formula,
};
use epivote::strategy::{classify, KnowledgeMode};
use epivote::voting::rule_by_name;
use epivote::{
    hypercube, Election, KnowledgeProfile, Plurality, Preference, StateId, Voter,
    DEFAULT_SIZE_LIMIT,
};

/// Write a line to stdout, propagating errors such as a closed pipe.
macro_rules! out {
    ($($t:tt)*) => { writeln!(io::stdout(), $($t)*)? };
}

macro_rules! outp {
    ($($t:tt)*) => { write!(io::stdout(), $($t)*)? };
}

#[derive(Parser)]
#[command(
    name = "epivote",
    version,
    about = "Strategic voting on epistemic profile models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at the point, or at every state.
    Check {
        model: PathBuf,
        #[arg(long)]
        formula: String,
        /// Evaluate at this state instead of the file's point.
        #[arg(long)]
        at: Option<String>,
        /// Print the verdict at every state.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        rule: RuleArg,
    },
    /// List conditional equilibria, or print the winners and payoff grids.
    Equilibria {
        model: PathBuf,
        /// One ballot per top candidate.
        #[arg(long)]
        by_top: bool,
        /// Print the winners and payoff grids (two voters only).
        #[arg(long)]
        matrix: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        rule: RuleArg,
    },
    /// Classify each voter's manipulation opportunities at the point.
    Manipulations {
        model: PathBuf,
        #[arg(long)]
        voter: Option<usize>,
        #[arg(long)]
        at: Option<String>,
        #[command(flatten)]
        rule: RuleArg,
    },
    /// Announce a formula and write the updated model.
    Update {
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        at: Option<String>,
        /// Ignore the point: the formula need not hold there.
        #[arg(long)]
        unpointed: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        rule: RuleArg,
    },
    /// Write the model of all profiles in which each voter knows only her
    /// own preference.
    Hypercube {
        #[command(flatten)]
        election: ElectionArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rewrite a formula without announcements.
    Reduce {
        #[arg(long)]
        formula: String,
        /// Take the election (and tiebreak) from this model.
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        election: ElectionArgs,
        /// Also expand derived atoms into profile atoms.
        #[arg(long)]
        expand: bool,
    },
    /// Check the axioms P and N on a model file.
    Axioms { model: PathBuf },
    /// Check whether a property survives an announcement.
    Preserve {
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum)]
        property: PropertyKind,
        #[arg(long)]
        voter: Option<usize>,
        /// Ballot for `dominant`; without it, any ballot counts.
        #[arg(long)]
        alt: Option<String>,
        /// Conditional profile for the equilibrium properties, e.g. `(ac,b)`.
        #[arg(long)]
        profile: Option<String>,
        #[arg(long)]
        at: Option<String>,
        #[command(flatten)]
        rule: RuleArg,
    },
    /// Search random models and announcements for a property that is lost.
    Hunt {
        #[arg(long, value_enum)]
        property: HuntKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long, default_value_t = 4)]
        max_states: usize,
        #[arg(long, default_value_t = 2)]
        max_depth: usize,
        #[command(flatten)]
        election: ElectionArgs,
    },
}

#[derive(Args)]
struct RuleArg {
    /// Voting rule; plurality uses the model's tiebreak.
    #[arg(long, default_value = "plurality")]
    rule: String,
}

#[derive(Args)]
struct ElectionArgs {
    /// Comma-separated candidate names.
    #[arg(long, default_value = "a,b,c")]
    candidates: String,
    #[arg(long, default_value_t = 2)]
    voters: usize,
    /// Tiebreak order, e.g. `b>a>c`; defaults to the candidate order.
    #[arg(long)]
    tiebreak: Option<String>,
}

impl ElectionArgs {
    fn election(&self) -> Result<Election> {
        Ok(Election::new(
            self.candidates.split(',').map(str::trim),
            self.voters,
        )?)
    }

    fn tiebreak(&self, e: &Election) -> Result<Preference> {
        match &self.tiebreak {
            Some(t) => Ok(e.parse_order(&t.replace(',', ">"), '>')?),
            None => Ok(Preference::new(e, e.candidates().collect())?),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PropertyKind {
    KnowsDeDicto,
    KnowsDeRe,
    Dominant,
    Equilibrium,
    NotEquilibrium,
}

// Variant names follow the target names printed by the hunt.
#[allow(clippy::enum_variant_names)]
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HuntKind {
    KnowledgeDeDictoNotPreserved,
    KnowledgeDeReNotPreserved,
    DominantManipulationNotPreserved,
    ConditionalEquilibriumNotPreserved,
    NotEquilibriumNotPreserved,
}

impl HuntKind {
    fn target(self) -> HuntTarget {
        match self {
            HuntKind::KnowledgeDeDictoNotPreserved => {
                HuntTarget::KnowledgeLost(KnowledgeMode::DeDicto)
            }
            HuntKind::KnowledgeDeReNotPreserved => HuntTarget::KnowledgeLost(KnowledgeMode::DeRe),
            HuntKind::DominantManipulationNotPreserved => HuntTarget::DominantLost,
            HuntKind::ConditionalEquilibriumNotPreserved => HuntTarget::EquilibriumLost,
            HuntKind::NotEquilibriumNotPreserved => HuntTarget::NonEquilibriumLost,
        }
    }
}

fn load(path: &Path) -> Result<ModelDoc> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_model(&text).with_context(|| format!("parsing {}", path.display()))
}

fn rule(doc: &ModelDoc, arg: &RuleArg) -> Result<Plurality> {
    rule_by_name(&arg.rule, doc.tiebreak.as_ref()).map_err(|e| anyhow!(e))
}

fn point(doc: &ModelDoc, at: Option<&str>) -> Result<Option<StateId>> {
    match at {
        Some(label) => Ok(Some(doc.model.state(label)?)),
        None => Ok(doc.point),
    }
}

fn required_point(doc: &ModelDoc, at: Option<&str>) -> Result<StateId> {
    point(doc, at)?.ok_or_else(|| anyhow!("no point: add `point:` to the model or pass --at"))
}

fn voter(e: &Election, v: usize) -> Result<Voter> {
    let v = Voter(v);
    if !e.has_voter(v) {
        bail!("no voter {v}");
    }
    Ok(v)
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            outp!("{text}");
            Ok(())
        }
    }
}

fn orders(e: &Election, prefs: &[Preference]) -> String {
    if prefs.is_empty() {
        "-".into()
    } else {
        prefs
            .iter()
            .map(|p| e.fmt_order(p))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn status(holds: bool) -> ExitCode {
    if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_check(
    path: &Path,
    src: &str,
    at: Option<&str>,
    all: bool,
    rule_arg: &RuleArg,
) -> Result<ExitCode> {
    let doc = load(path)?;
    let m = &doc.model;
    let phi = parse(src, m.election())?;
    let truth = match &doc.tiebreak {
        Some(_) => denotation(m, &rule(&doc, rule_arg)?, &phi),
        None => denotation_rule_free(m, &phi).context("the model has no `tiebreak:` line")?,
    };
    let p = point(&doc, at)?;
    if all || p.is_none() {
        for s in m.states() {
            out!("{}: {}", m.label(s), truth[s]);
        }
    }
    Ok(match p {
        Some(s) => {
            if !all {
                out!("{}", truth[s]);
            }
            status(truth[s])
        }
        None => status(truth.iter().all(|&x| x)),
    })
}

fn cmd_equilibria(
    path: &Path,
    by_top: bool,
    matrix: bool,
    format: Format,
    rule_arg: &RuleArg,
) -> Result<ExitCode> {
    let doc = load(path)?;
    let m = &doc.model;
    let rule = rule(&doc, rule_arg)?;
    match (matrix, format) {
        (true, Format::Text) => {
            let grid = payoff_matrix(m, &rule, by_top, DEFAULT_SIZE_LIMIT)?;
            out!("winners");
            outp!("{}", grid.render_winners());
            out!();
            out!("payoffs");
            outp!("{}", grid.render_payoffs());
        }
        (_, Format::Records) => {
            for cp in conditional_profiles(m, by_top, DEFAULT_SIZE_LIMIT)? {
                out!(
                    "{}",
                    serde_json::to_string(&profile_record(m, &rule, &cp, by_top))?
                );
            }
        }
        (false, Format::Text) => {
            let eq = enumerate_conditional_equilibria(m, &rule, by_top, DEFAULT_SIZE_LIMIT)?;
            for cp in &eq {
                let table = payoff_table(m, &rule, cp);
                out!(
                    "{} winners {} payoffs {}",
                    fmt_conditional_profile(m, cp, by_top),
                    fmt_winners(m.election(), &table.winners),
                    fmt_payoffs(&table.payoffs)
                );
            }
            out!("{} equilibria", eq.len());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_manipulations(
    path: &Path,
    only: Option<usize>,
    at: Option<&str>,
    rule_arg: &RuleArg,
) -> Result<ExitCode> {
    let doc = load(path)?;
    let m = &doc.model;
    let e = m.election();
    let rule = rule(&doc, rule_arg)?;
    let s = required_point(&doc, at)?;
    let kp = KnowledgeProfile::new(m, s)?;
    let voters: Vec<Voter> = match only {
        Some(v) => vec![voter(e, v)?],
        None => e.voters().collect(),
    };
    out!("point {}", m.label(s));
    for v in voters {
        let r = classify(kp, &rule, v);
        let labels: Vec<&str> = r.labels.iter().map(|k| k.as_str()).collect();
        out!("voter {v}: {}", r.kind.as_str());
        out!(
            "  labels: {}",
            if labels.is_empty() {
                "-".into()
            } else {
                labels.join(", ")
            }
        );
        out!("  manipulations: {}", orders(e, &r.manipulations));
        out!("  knows de dicto: {}", r.knowledge.holds);
        out!(
            "  knows de re: {} ({})",
            !r.knowledge.common.is_empty(),
            orders(e, &r.knowledge.common)
        );
        out!("  dominant: {}", orders(e, &r.dominant));
        out!("  pessimistic: {}", orders(e, &r.pessimistic));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_update(
    path: &Path,
    src: &str,
    at: Option<&str>,
    unpointed: bool,
    output: Option<&Path>,
    rule_arg: &RuleArg,
) -> Result<ExitCode> {
    let doc = load(path)?;
    let m = &doc.model;
    let phi = parse(src, m.election())?;
    let p = if unpointed { None } else { point(&doc, at)? };
    let u = match &doc.tiebreak {
        Some(_) => update(m, &rule(&doc, rule_arg)?, &phi, p)?,
        None => {
            let keep =
                denotation_rule_free(m, &phi).context("the model has no `tiebreak:` line")?;
            epivote::dynamics::update_with_mask(m, &keep, p)?
        }
    };
    let labels = |ss: &[StateId]| ss.iter().map(|&s| m.label(s)).collect::<Vec<_>>().join(" ");
    eprintln!("kept: {}", labels(&u.survived));
    eprintln!(
        "dropped: {}",
        if u.dropped.is_empty() {
            "-".into()
        } else {
            labels(&u.dropped)
        }
    );
    let next = ModelDoc {
        model: u.model,
        tiebreak: doc.tiebreak.clone(),
        point: u.point,
    };
    emit(&write_model(&next), output)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_hypercube(args: &ElectionArgs, output: Option<&Path>) -> Result<ExitCode> {
    let e = args.election()?;
    let tiebreak = args.tiebreak(&e)?;
    let doc = ModelDoc {
        model: hypercube(&e, DEFAULT_SIZE_LIMIT)?,
        tiebreak: Some(tiebreak),
        point: None,
    };
    emit(&write_model(&doc), output)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_reduce(
    src: &str,
    model: Option<&Path>,
    args: &ElectionArgs,
    expand: bool,
) -> Result<ExitCode> {
    let (e, tiebreak) = match model {
        Some(path) => {
            let doc = load(path)?;
            let tb = doc.tiebreak.clone();
            (doc.model.election().clone(), tb)
        }
        None => {
            let e = args.election()?;
            let tb = args.tiebreak(&e)?;
            (e, Some(tb))
        }
    };
    let phi = parse(src, &e)?;
    let mut out: Formula = reduce_announcements(&phi);
    if expand {
        let tb = tiebreak.ok_or_else(|| anyhow!("expanding winners needs a tiebreak"))?;
        out = expand_abbreviations(&out, &e, &Plurality::new(tb), DEFAULT_SIZE_LIMIT)?;
    }
    out!("{}", out.display(&e));
    Ok(ExitCode::SUCCESS)
}

fn cmd_axioms(path: &Path) -> Result<ExitCode> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc = parse_structure(&text).with_context(|| format!("parsing {}", path.display()))?;
    let m = &doc.model;
    let report = check_axioms(m, DEFAULT_SIZE_LIMIT)?;
    if report.p_valid() {
        out!("P: valid");
    } else {
        for (s, k) in &report.p_violations {
            out!("P: violated at {} ({k} profile atoms true)", m.label(*s));
        }
    }
    if report.n_valid() {
        out!("N: valid");
    } else {
        for (s, v) in &report.n_violations {
            out!("N: violated at {} for voter {v}", m.label(*s));
        }
    }
    Ok(status(report.p_valid() && report.n_valid()))
}

#[allow(clippy::too_many_arguments)]
fn cmd_preserve(
    path: &Path,
    src: &str,
    kind: PropertyKind,
    voter_arg: Option<usize>,
    alt: Option<&str>,
    profile: Option<&str>,
    at: Option<&str>,
    rule_arg: &RuleArg,
) -> Result<ExitCode> {
    let doc = load(path)?;
    let m = &doc.model;
    let e = m.election();
    let rule = rule(&doc, rule_arg)?;
    let phi = parse(src, e)?;
    let need_voter = || {
        voter_arg
            .ok_or_else(|| anyhow!("--voter is required"))
            .and_then(|v| voter(e, v))
    };
    let need_profile = || {
        let text = profile.ok_or_else(|| anyhow!("--profile is required"))?;
        Ok::<_, anyhow::Error>(parse_conditional_profile(m, text)?)
    };
    let property = match kind {
        PropertyKind::KnowsDeDicto => Property::KnowsManipulation {
            voter: need_voter()?,
            mode: KnowledgeMode::DeDicto,
        },
        PropertyKind::KnowsDeRe => Property::KnowsManipulation {
            voter: need_voter()?,
            mode: KnowledgeMode::DeRe,
        },
        PropertyKind::Dominant => Property::DominantManipulation {
            voter: need_voter()?,
            alt: alt.map(|a| e.parse_order(a, '>')).transpose()?,
        },
        PropertyKind::Equilibrium => Property::ConditionalEquilibrium {
            profile: need_profile()?,
        },
        PropertyKind::NotEquilibrium => Property::NotConditionalEquilibrium {
            profile: need_profile()?,
        },
    };
    let pointed = matches!(
        kind,
        PropertyKind::KnowsDeDicto | PropertyKind::KnowsDeRe | PropertyKind::Dominant
    );
    let p = if pointed {
        Some(required_point(&doc, at)?)
    } else {
        None
    };
    let r = check_preservation(m, &rule, &phi, &property, p)?;
    let labels: Vec<&str> = r.update.survived.iter().map(|&s| m.label(s)).collect();
    out!("kept: {}", labels.join(" "));
    out!("before: {}", r.before.holds);
    if let Some(cp) = &r.updated_profile {
        out!(
            "updated profile: {}",
            fmt_conditional_profile(&r.update.model, cp, false)
        );
    }
    out!("after: {}", r.after.holds);
    if let Some((vv, alt)) = &r.after.blocking {
        out!(
            "blocking deviation: voter {} block {} votes {}",
            vv.voter,
            vv.block,
            e.fmt_order(alt)
        );
    }
    out!("preserved: {}", r.preserved());
    Ok(status(r.preserved()))
}

fn cmd_hunt(kind: HuntKind, config: HuntConfig, args: &ElectionArgs) -> Result<ExitCode> {
    let e = args.election()?;
    let rule = Plurality::new(args.tiebreak(&e)?);
    let target = kind.target();
    out!("target: {}", target.name());
    out!(
        "seed: {} budget: {} max states: {} max depth: {}",
        config.seed,
        config.budget,
        config.max_states,
        config.max_depth
    );
    match search_counterexample(&e, &rule, target, config) {
        HuntOutcome::Found(c) => {
            out!("found at try {}", c.attempt);
            out!("announcement: {}", c.announcement.display(&e));
            if let Some(s) = c.point {
                out!("point: {}", c.model.label(s));
            }
            match &c.property {
                Property::KnowsManipulation { voter, .. } => out!("voter: {voter}"),
                Property::DominantManipulation { voter, alt } => {
                    out!("voter: {voter}");
                    if let Some(a) = alt {
                        out!("ballot: {}", e.fmt_order(a));
                    }
                }
                Property::ConditionalEquilibrium { profile }
                | Property::NotConditionalEquilibrium { profile } => {
                    out!(
                        "profile: {}",
                        fmt_conditional_profile(&c.model, profile, false)
                    );
                }
            }
            out!(
                "before: {} after: {}",
                c.preservation.before.holds,
                c.preservation.after.holds
            );
            let doc = ModelDoc {
                model: c.model.clone(),
                tiebreak: Some(rule.tiebreak().clone()),
                point: c.point,
            };
            outp!("{}", write_model(&doc));
            Ok(ExitCode::SUCCESS)
        }
        HuntOutcome::BudgetExhausted { tried, held_before } => {
            out!(
                "not found in {tried} tries (property held before the update {held_before} times)"
            );
            Ok(ExitCode::from(1))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check {
            model,
            formula,
            at,
            all,
            rule,
        } => cmd_check(&model, &formula, at.as_deref(), all, &rule),
        Command::Equilibria {
            model,
            by_top,
            matrix,
            format,
            rule,
        } => cmd_equilibria(&model, by_top, matrix, format, &rule),
        Command::Manipulations {
            model,
            voter,
            at,
            rule,
        } => cmd_manipulations(&model, voter, at.as_deref(), &rule),
        Command::Update {
            model,
            formula,
            at,
            unpointed,
            output,
            rule,
        } => cmd_update(
            &model,
            &formula,
            at.as_deref(),
            unpointed,
            output.as_deref(),
            &rule,
        ),
        Command::Hypercube { election, output } => cmd_hypercube(&election, output.as_deref()),
        Command::Reduce {
            formula,
            model,
            election,
            expand,
        } => cmd_reduce(&formula, model.as_deref(), &election, expand),
        Command::Axioms { model } => cmd_axioms(&model),
        Command::Preserve {
            model,
            formula,
            property,
            voter,
            alt,
            profile,
            at,
            rule,
        } => cmd_preserve(
            &model,
            &formula,
            property,
            voter,
            alt.as_deref(),
            profile.as_deref(),
            at.as_deref(),
            &rule,
        ),
        Command::Hunt {
            property,
            seed,
            budget,
            max_states,
            max_depth,
            election,
        } => cmd_hunt(
            property,
            HuntConfig {
                seed,
                budget,
                max_states,
                max_depth,
            },
            &election,
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e)
            if e.downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
