//! Syntactic transformations: unfolding the voting atoms into profile atoms,
//! and eliminating announcements.

use crate::error::ModelError;
use crate::model::{Election, Profile};
use crate::voting::VotingRule;

use super::Formula;

/// Rewrites `pref`, comparison and winner atoms (and `true`) as
/// disjunctions of profile atoms, leaving only profile atoms, `¬`, `∧`, `K`
/// and announcements.
///
/// An atom that no profile satisfies becomes `▷₀ ∧ ¬▷₀` for the first
/// profile `▷₀`. Every atom enumerates `(m!)^n` profiles, so `limit` applies.
pub fn expand_abbreviations(
    phi: &Formula,
    election: &Election,
    rule: &dyn VotingRule,
    limit: usize,
) -> Result<Formula, ModelError> {
    let profiles = election.all_profiles(limit)?;
    Ok(expand(phi, &profiles, rule))
}

fn expand(phi: &Formula, profiles: &[Profile], rule: &dyn VotingRule) -> Formula {
    let atoms = |keep: &dyn Fn(&Profile) -> bool| {
        let ps: Vec<Formula> = profiles
            .iter()
            .filter(|p| keep(p))
            .map(|p| Formula::Profile(p.clone()))
            .collect();
        if ps.is_empty() {
            let p0 = Formula::Profile(profiles[0].clone());
            p0.clone().and(p0.negate())
        } else {
            Formula::disj(ps)
        }
    };
    match phi {
        Formula::Top => atoms(&|_| false).negate(),
        Formula::Profile(_) => phi.clone(),
        Formula::Pref(v, o) => atoms(&|p| p.pref(*v) == o),
        Formula::Prefers(v, a, b) => atoms(&|p| p.pref(*v).prefers(*a, *b)),
        Formula::Wins(c) => atoms(&|p| rule.winner(p) == *c),
        Formula::Not(a) => expand(a, profiles, rule).negate(),
        Formula::And(a, b) => expand(a, profiles, rule).and(expand(b, profiles, rule)),
        Formula::Know(v, a) => Formula::know(*v, expand(a, profiles, rule)),
        Formula::Announce(a, b) => {
            Formula::announce(expand(a, profiles, rule), expand(b, profiles, rule))
        }
    }
}

/// An equivalent formula without announcements.
///
/// Uses the reduction axioms
/// `[φ]p ↔ (φ→p)`, `[φ]¬ψ ↔ (φ→¬[φ]ψ)`, `[φ](ψ∧χ) ↔ ([φ]ψ∧[φ]χ)`,
/// `[φ]K_iψ ↔ (φ→K_i(φ→[φ]ψ))`, innermost announcements first. Voting atoms
/// count as atomic. Composed announcements never reach the pushing step
/// because the inner one is already eliminated.
///
/// The output can be exponentially larger than the input.
pub fn reduce_announcements(phi: &Formula) -> Formula {
    match phi {
        Formula::Not(a) => reduce_announcements(a).negate(),
        Formula::And(a, b) => reduce_announcements(a).and(reduce_announcements(b)),
        Formula::Know(v, a) => Formula::know(*v, reduce_announcements(a)),
        Formula::Announce(a, b) => push(&reduce_announcements(a), &reduce_announcements(b)),
        atom => atom.clone(),
    }
}

/// `[a]b` for announcement-free `a` and `b`.
fn push(a: &Formula, b: &Formula) -> Formula {
    match b {
        Formula::Not(x) => a.clone().implies(push(a, x).negate()),
        Formula::And(x, y) => push(a, x).and(push(a, y)),
        Formula::Know(v, x) => a
            .clone()
            .implies(Formula::know(*v, a.clone().implies(push(a, x)))),
        Formula::Announce(..) => unreachable!("inner announcements are reduced first"),
        atom => a.clone().implies(atom.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{denotation, parse};
    use crate::model::{ProfileModel, DEFAULT_SIZE_LIMIT};
    use crate::voting::Plurality;

    fn disjuncts(f: &Formula) -> usize {
        // `or` is ¬(¬x ∧ ¬y)
        match f {
            Formula::Not(inner) => match inner.as_ref() {
                Formula::And(x, y) => match (x.as_ref(), y.as_ref()) {
                    (Formula::Not(x), Formula::Not(y)) => disjuncts(x) + disjuncts(y),
                    _ => 1,
                },
                _ => 1,
            },
            _ => 1,
        }
    }

    fn only_primitives(f: &Formula) -> bool {
        match f {
            Formula::Profile(_) => true,
            Formula::Not(a) | Formula::Know(_, a) => only_primitives(a),
            Formula::And(a, b) | Formula::Announce(a, b) => {
                only_primitives(a) && only_primitives(b)
            }
            _ => false,
        }
    }

    #[test]
    fn single_winning_profile() {
        let e = Election::new(["a", "b"], 1).unwrap();
        let rule = Plurality::new(e.parse_order("a>b", '>').unwrap());
        let f = expand_abbreviations(&parse("wins a", &e).unwrap(), &e, &rule, DEFAULT_SIZE_LIMIT)
            .unwrap();
        assert_eq!(
            f,
            Formula::Profile(Profile(vec![e.parse_order("a>b", '>').unwrap()]))
        );
    }

    #[test]
    fn preference_atom_has_one_disjunct_per_other_ballot() {
        let e = Election::new(["a", "b", "c"], 2).unwrap();
        let rule = Plurality::new(e.parse_order("b>a>c", '>').unwrap());
        let f = expand_abbreviations(
            &parse("pref 1(a>b>c)", &e).unwrap(),
            &e,
            &rule,
            DEFAULT_SIZE_LIMIT,
        )
        .unwrap();
        assert_eq!(disjuncts(&f), 6);
        assert!(only_primitives(&f));
        let g = expand_abbreviations(
            &parse("true & ~K1 1: a>b", &e).unwrap(),
            &e,
            &rule,
            DEFAULT_SIZE_LIMIT,
        )
        .unwrap();
        assert!(only_primitives(&g));
    }

    #[test]
    fn conjunction_rule() {
        let e = Election::new(["a", "b", "c"], 2).unwrap();
        let p = parse("wins a", &e).unwrap();
        let q = parse("1: a>b", &e).unwrap();
        let phi = parse("2: c>a", &e).unwrap();
        let f = Formula::announce(phi.clone(), p.clone().and(q.clone()));
        assert_eq!(
            reduce_announcements(&f),
            phi.clone().implies(p).and(phi.implies(q))
        );
    }

    #[test]
    fn announcement_free_input_is_unchanged() {
        let e = Election::new(["a", "b", "c"], 2).unwrap();
        let f = parse("K1 ~(wins a | K2 pref 1(a>b>c))", &e).unwrap();
        assert_eq!(reduce_announcements(&f), f);
    }

    #[test]
    fn reduction_preserves_truth() {
        let e = Election::new(["a", "b", "c"], 2).unwrap();
        let o = |s| e.parse_order(s, '>').unwrap();
        let rule = Plurality::new(o("b>a>c"));
        let p = Profile(vec![o("a>b>c"), o("c>b>a")]);
        let q = Profile(vec![o("c>b>a"), o("c>b>a")]);
        let m = ProfileModel::new(
            e.clone(),
            vec!["s".into(), "t".into(), "u".into()],
            vec![
                Some(vec![vec![0, 1], vec![2]]),
                Some(vec![vec![0], vec![1, 2]]),
            ],
            vec![p.clone(), p, q],
        )
        .unwrap();
        for src in [
            "[1: a>c] K2(1: a>c)",
            "[~K2 1: a>c] [K1 wins a] ~K2 wins a",
            "[[wins c] false] K1 K2 1: a>c",
            "~[true] [2: b>a] (wins a | K1 wins b)",
        ] {
            let f = parse(src, &e).unwrap();
            let r = reduce_announcements(&f);
            assert!(!r.has_announcements());
            assert_eq!(
                denotation(&m, &rule, &f),
                denotation(&m, &rule, &r),
                "{src}"
            );
        }
        let t = parse("[1: a>c] K2(1: a>c)", &e).unwrap();
        assert!(denotation(&m, &rule, &reduce_announcements(&t))[1]);
    }
}
