//! Truth of formulas on profile models, and the axioms P and N.

use crate::error::{LogicError, ModelError};
use crate::model::{KnowledgeProfile, ProfileModel, StateId, Voter};
use crate::voting::VotingRule;

use super::Formula;

/// Truth value of `phi` at every state of `model`. Fails only when `phi`
/// mentions a winner and no rule is given.
fn den(
    model: &ProfileModel,
    rule: Option<&dyn VotingRule>,
    phi: &Formula,
) -> Result<Vec<bool>, LogicError> {
    let states = model.states();
    Ok(match phi {
        Formula::Top => vec![true; model.num_states()],
        Formula::Profile(p) => states.map(|s| model.profile(s) == p).collect(),
        Formula::Pref(v, o) => states.map(|s| model.profile(s).pref(*v) == o).collect(),
        Formula::Prefers(v, a, b) => states
            .map(|s| model.profile(s).pref(*v).prefers(*a, *b))
            .collect(),
        Formula::Wins(c) => {
            let rule = rule.ok_or(LogicError::RuleRequired)?;
            states
                .map(|s| rule.winner(model.profile(s)) == *c)
                .collect()
        }
        Formula::Not(a) => den(model, rule, a)?.into_iter().map(|x| !x).collect(),
        Formula::And(a, b) => {
            let a = den(model, rule, a)?;
            let b = den(model, rule, b)?;
            a.into_iter().zip(b).map(|(x, y)| x && y).collect()
        }
        Formula::Know(v, a) => {
            let a = den(model, rule, a)?;
            let partition = model.partition(*v);
            let known: Vec<bool> = partition
                .blocks()
                .iter()
                .map(|block| block.iter().all(|&t| a[t]))
                .collect();
            states.map(|s| known[partition.block_of(s)]).collect()
        }
        Formula::Announce(a, b) => {
            let keep = den(model, rule, a)?;
            let mut out = vec![true; model.num_states()];
            match model.restrict(&keep) {
                Ok((sub, origin)) => {
                    let inner = den(&sub, rule, b)?;
                    for (ns, &s) in origin.iter().enumerate() {
                        out[s] = inner[ns];
                    }
                }
                // nothing survives: `[a]b` holds vacuously everywhere
                Err(ModelError::EmptyModel) => {}
                Err(e) => return Err(e.into()),
            }
            out
        }
    })
}

/// The set of states of `model` where `phi` holds, as a mask.
pub fn denotation(model: &ProfileModel, rule: &dyn VotingRule, phi: &Formula) -> Vec<bool> {
    den(model, Some(rule), phi).expect("a rule is supplied and restriction cannot fail otherwise")
}

/// Like [`denotation`] for formulas that do not mention winners.
pub fn denotation_rule_free(model: &ProfileModel, phi: &Formula) -> Result<Vec<bool>, LogicError> {
    den(model, None, phi)
}

/// `M_s ⊨ φ`.
pub fn evaluate(kp: KnowledgeProfile<'_>, rule: &dyn VotingRule, phi: &Formula) -> bool {
    denotation(kp.model, rule, phi)[kp.point]
}

/// `φ` holds at every state of `model`.
pub fn valid_on(model: &ProfileModel, rule: &dyn VotingRule, phi: &Formula) -> bool {
    denotation(model, rule, phi).into_iter().all(|x| x)
}

/// Violations of the axioms P (exactly one profile atom is true) and N
/// (voters know their own preference).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    /// States where the number of true profile atoms is not one, with that
    /// number.
    pub p_violations: Vec<(StateId, usize)>,
    /// States and voters where `pref i(o)` holds but `K_i pref i(o)` fails.
    pub n_violations: Vec<(StateId, Voter)>,
}

impl AxiomReport {
    pub fn p_valid(&self) -> bool {
        self.p_violations.is_empty()
    }

    pub fn n_valid(&self) -> bool {
        self.n_violations.is_empty()
    }
}

/// Checks P and N at every state by evaluating the atoms. Accepts
/// structures built with [`ProfileModel::kripke`], which may violate N.
/// P quantifies over all profiles, so the size limit applies.
pub fn check_axioms(model: &ProfileModel, limit: usize) -> Result<AxiomReport, ModelError> {
    let election = model.election();
    let mut true_atoms = vec![0usize; model.num_states()];
    for p in election.all_profiles(limit)? {
        let mask = den(model, None, &Formula::Profile(p)).expect("profile atoms need no rule");
        for (count, hit) in true_atoms.iter_mut().zip(mask) {
            *count += usize::from(hit);
        }
    }
    let p_violations = true_atoms
        .into_iter()
        .enumerate()
        .filter(|&(_, k)| k != 1)
        .collect();

    let mut n_violations = Vec::new();
    for s in model.states() {
        for v in election.voters() {
            let atom = Formula::Pref(v, model.profile(s).pref(v).clone());
            let known = Formula::know(v, atom);
            if !den(model, None, &known).expect("no winners")[s] {
                n_violations.push((s, v));
            }
        }
    }
    Ok(AxiomReport {
        p_violations,
        n_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;
    use crate::model::{Election, Profile, DEFAULT_SIZE_LIMIT};
    use crate::voting::Plurality;

    /// s, t: 1 a>b>c, 2 c>b>a; u: 1 c>b>a, 2 c>b>a. Voter 1 confuses s
    /// and t, voter 2 confuses t and u.
    fn three_state(partition1: Vec<Vec<StateId>>) -> (ProfileModel, Plurality) {
        let e = Election::new(["a", "b", "c"], 2).unwrap();
        let o = |s| e.parse_order(s, '>').unwrap();
        let p = Profile(vec![o("a>b>c"), o("c>b>a")]);
        let q = Profile(vec![o("c>b>a"), o("c>b>a")]);
        let rule = Plurality::new(o("b>a>c"));
        let m = ProfileModel::kripke(
            e.clone(),
            vec!["s".into(), "t".into(), "u".into()],
            vec![Some(partition1), Some(vec![vec![0], vec![1, 2]])],
            vec![p.clone(), p, q],
        )
        .unwrap();
        (m, rule)
    }

    fn holds_at_t(m: &ProfileModel, rule: &Plurality, src: &str) -> bool {
        let phi = parse(src, m.election()).unwrap();
        evaluate(KnowledgeProfile::new(m, 1).unwrap(), rule, &phi)
    }

    #[test]
    fn knowledge_and_announcement_at_t() {
        let (m, rule) = three_state(vec![vec![0, 1], vec![2]]);
        assert!(holds_at_t(&m, &rule, "1: a>c"));
        assert!(holds_at_t(&m, &rule, "~K2(1: a>c)"));
        assert!(holds_at_t(&m, &rule, "[1: a>c] K2(1: a>c)"));
        assert!(holds_at_t(&m, &rule, "~K2(1: a>c) & [1: a>c] K2(1: a>c)"));
        assert!(holds_at_t(
            &m,
            &rule,
            "K1 pref 2(c>b>a) & ~(K1 K2 pref 1(a>b>c) | K1 ~K2 pref 1(a>b>c))"
        ));
        assert!(holds_at_t(&m, &rule, "wins a"));
        assert!(!holds_at_t(&m, &rule, "K2 wins a"));
    }

    #[test]
    fn profile_atoms_are_exclusive() {
        let (m, rule) = three_state(vec![vec![0, 1], vec![2]]);
        for s in m.states() {
            let kp = KnowledgeProfile::new(&m, s).unwrap();
            for p in m.election().all_profiles(DEFAULT_SIZE_LIMIT).unwrap() {
                let expected = &p == m.profile(s);
                assert_eq!(evaluate(kp, &rule, &Formula::Profile(p)), expected);
            }
        }
    }

    #[test]
    fn false_announcement_is_vacuous() {
        let (m, rule) = three_state(vec![vec![0, 1], vec![2]]);
        assert!(valid_on(
            &m,
            &rule,
            &parse("[false] false", m.election()).unwrap()
        ));
        assert!(valid_on(
            &m,
            &rule,
            &parse("[wins b] false", m.election()).unwrap()
        ));
    }

    #[test]
    fn winners_need_a_rule() {
        let (m, _) = three_state(vec![vec![0, 1], vec![2]]);
        let e = m.election();
        assert_eq!(
            denotation_rule_free(&m, &parse("K1 wins a", e).unwrap()),
            Err(LogicError::RuleRequired)
        );
        assert_eq!(
            denotation_rule_free(&m, &parse("K2 1: a>c", e).unwrap()),
            Ok(vec![true, false, false])
        );
    }

    #[test]
    fn axioms_hold_on_valid_models() {
        let (m, _) = three_state(vec![vec![0, 1], vec![2]]);
        let report = check_axioms(&m, DEFAULT_SIZE_LIMIT).unwrap();
        assert!(report.p_valid() && report.n_valid());
    }

    #[test]
    fn n_violation_is_located() {
        let (m, _) = three_state(vec![vec![0, 2], vec![1]]);
        assert!(m.validate().is_err());
        let report = check_axioms(&m, DEFAULT_SIZE_LIMIT).unwrap();
        assert!(report.p_valid());
        assert_eq!(report.n_violations, vec![(0, Voter(1)), (2, Voter(1))]);
    }

    #[test]
    fn single_state_model_satisfies_p() {
        let e = Election::new(["a", "b"], 1).unwrap();
        let p = Profile(vec![e.parse_order("b>a", '>').unwrap()]);
        let m = ProfileModel::new(e, vec!["x".into()], vec![None], vec![p]).unwrap();
        assert!(check_axioms(&m, DEFAULT_SIZE_LIMIT).unwrap().p_valid());
    }
}
