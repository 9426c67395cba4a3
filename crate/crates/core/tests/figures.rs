mod common;

use common::*;
use epivote::conditional::{
    enumerate_conditional_equilibria, fmt_conditional_profile, induced_votes,
    parse_conditional_profile, payoff_matrix,
};
use epivote::dynamics::{update, update_conditional_profile};
use epivote::logic::{evaluate, parse};
use epivote::{KnowledgeProfile, DEFAULT_SIZE_LIMIT};

fn equilibria(name: &str) -> Vec<String> {
    let (doc, rule) = load(name);
    enumerate_conditional_equilibria(&doc.model, &rule, true, DEFAULT_SIZE_LIMIT)
        .unwrap()
        .iter()
        .map(|cp| fmt_conditional_profile(&doc.model, cp, true))
        .collect()
}

#[test]
fn grids_match_transcription_up_to_errata() {
    for name in FIXTURES {
        let (doc, rule) = load(name);
        let grid = payoff_matrix(&doc.model, &rule, true, DEFAULT_SIZE_LIMIT).unwrap();
        for (kind, text) in [
            ("winners", grid.render_winners()),
            ("payoffs", grid.render_payoffs()),
        ] {
            let (expected, _) = expected_table(name, kind);
            assert_eq!(parse_table(&text), expected, "{name} {kind}");
        }
    }
}

#[test]
fn grids_without_errata_match_text_exactly() {
    for name in FIXTURES {
        let (doc, rule) = load(name);
        let grid = payoff_matrix(&doc.model, &rule, true, DEFAULT_SIZE_LIMIT).unwrap();
        assert_eq!(
            grid.render_winners(),
            expected_text(name, "winners"),
            "{name}"
        );
        if !errata().iter().any(|e| e.fixture == name) {
            assert_eq!(
                grid.render_payoffs(),
                expected_text(name, "payoffs"),
                "{name}"
            );
        }
    }
}

#[test]
fn errata_follow_from_the_transcribed_winners() {
    let all = errata();
    assert_eq!(all.len(), 2);
    for e in &all {
        assert_eq!(e.kind, "payoffs");
        let (doc, _) = load(&e.fixture);
        let winners = parse_table(&expected_text(&e.fixture, "winners"));
        let implied = payoffs_from_winners(&doc, cell(&winners, &e.row, &e.column));
        assert_eq!(implied, e.corrected, "{e:?}");
        assert_ne!(implied, e.transcribed, "{e:?}");
    }
}

#[test]
fn every_other_transcribed_payoff_follows_from_its_winners() {
    for name in FIXTURES {
        let (doc, _) = load(name);
        let winners = parse_table(&expected_text(name, "winners"));
        let payoffs = parse_table(&expected_text(name, "payoffs"));
        for (r, (row, cells)) in payoffs.iter().enumerate().skip(1) {
            for (c, entry) in cells.iter().enumerate() {
                let column = &payoffs[0].1[c];
                let implied = payoffs_from_winners(&doc, &winners[r].1[c]);
                let listed = errata()
                    .iter()
                    .any(|e| e.fixture == name && &e.row == row && &e.column == column);
                assert_eq!(
                    implied != entry.trim_end_matches('*'),
                    listed,
                    "{name} ({row},{column}): {entry} vs {implied}"
                );
            }
        }
    }
}

#[test]
fn single_state_equilibria() {
    assert_eq!(equilibria("two_voters_sincere"), ["(a,b)", "(b,b)"]);
    assert_eq!(
        equilibria("two_voters_shared"),
        ["(a,b)", "(b,a)", "(b,b)", "(c,c)"]
    );
}

#[test]
fn two_state_equilibria_are_column_b_without_cc() {
    let mut expected = Vec::new();
    for x in ["a", "b", "c"] {
        for y in ["a", "b", "c"] {
            if x != "c" || y != "c" {
                expected.push(format!("({x}{y},b)"));
            }
        }
    }
    assert_eq!(equilibria("two_state_uncertain"), expected);
}

#[test]
fn three_state_anchors() {
    let (doc, rule) = load("three_state_tuv");
    let grid = payoff_matrix(&doc.model, &rule, true, DEFAULT_SIZE_LIMIT).unwrap();
    let payoffs = parse_table(&grid.render_payoffs());
    assert_eq!(cell(&payoffs, "ac", "bc"), "11.12*");
    assert_eq!(cell(&payoffs, "cc", "cc"), "02.22");
    let winners = parse_table(&grid.render_winners());
    assert_eq!(cell(&winners, "ac", "bc"), "bbc");

    let cp = parse_conditional_profile(&doc.model, "(ac,bc)").unwrap();
    let e = doc.model.election();
    let u = doc.model.state("u").unwrap();
    let v = doc.model.state("v").unwrap();
    let tops = |s| {
        let votes = induced_votes(&doc.model, &cp, s);
        e.voters()
            .map(|i| e.candidate_name(votes.pref(i).top()).to_string())
            .collect::<String>()
    };
    assert_eq!(tops(v), "cc");
    assert_eq!(tops(u), "cb");

    let eq = equilibria("three_state_tuv");
    for cp in ["(ab,bc)", "(bb,bc)", "(ac,bc)", "(bc,bc)"] {
        assert!(eq.contains(&cp.to_string()), "{cp}");
    }
    assert!(equilibria("three_state_stu").contains(&"(bc,bc)".to_string()));
}

/// Same profile at u and v, yet voter 2 votes c at v in some equilibrium and
/// at u in none.
#[test]
fn voting_c_separates_u_and_v() {
    let (doc, rule) = load("three_state_tuv");
    let m = &doc.model;
    let c = m.election().candidate("c").unwrap();
    let u = m.state("u").unwrap();
    let v = m.state("v").unwrap();
    assert_eq!(m.profile(u), m.profile(v));
    let eq = enumerate_conditional_equilibria(m, &rule, true, DEFAULT_SIZE_LIMIT).unwrap();
    assert!(!eq.is_empty());
    let votes_c = |s| {
        eq.iter()
            .filter(|cp| induced_votes(m, cp, s).0[1].top() == c)
            .count()
    };
    assert!(votes_c(v) > 0);
    assert_eq!(votes_c(u), 0);
}

#[test]
fn knowledge_formulas_at_t() {
    let (doc, rule) = load("three_state_stu");
    let kp = KnowledgeProfile::new(&doc.model, doc.model.state("t").unwrap()).unwrap();
    for src in [
        "1: a>c",
        "~K2(1: a>c)",
        "K1 pref 2(c>b>a) & ~(K1 K2 pref 1(a>b>c) | K1 ~K2 pref 1(a>b>c))",
        "~K2(1: a>c) & [1: a>c] K2(1: a>c)",
    ] {
        let phi = parse(src, doc.model.election()).unwrap();
        assert!(evaluate(kp, &rule, &phi), "{src}");
    }
}

#[test]
fn revealing_a_preference_settles_the_game() {
    let (doc, rule) = load("two_state_uncertain");
    let m = &doc.model;
    let e = m.election();
    let (t, u) = (m.state("t").unwrap(), m.state("u").unwrap());

    let at_u = update(m, &rule, &parse("pref 1(c>b>a)", e).unwrap(), Some(u)).unwrap();
    assert_eq!(at_u.model.num_states(), 1);
    assert_eq!(
        equilibria_of(&at_u.model, &rule),
        ["(a,b)", "(b,a)", "(b,b)", "(c,c)"]
    );
    let cp = parse_conditional_profile(m, "(ac,b)").unwrap();
    assert!(
        enumerate_conditional_equilibria(m, &rule, true, DEFAULT_SIZE_LIMIT)
            .unwrap()
            .contains(&cp)
    );
    let next = update_conditional_profile(m, &cp, &at_u);
    assert_eq!(fmt_conditional_profile(&at_u.model, &next, true), "(c,b)");
    assert!(!equilibria_of(&at_u.model, &rule).contains(&"(c,b)".to_string()));

    let at_t = update(m, &rule, &parse("pref 1(a>b>c)", e).unwrap(), Some(t)).unwrap();
    let cp = parse_conditional_profile(m, "(bc,b)").unwrap();
    let next = update_conditional_profile(m, &cp, &at_t);
    assert_eq!(fmt_conditional_profile(&at_t.model, &next, true), "(b,b)");
    assert!(equilibria_of(&at_t.model, &rule).contains(&"(b,b)".to_string()));
}

fn equilibria_of(m: &epivote::ProfileModel, rule: &epivote::Plurality) -> Vec<String> {
    enumerate_conditional_equilibria(m, rule, true, DEFAULT_SIZE_LIMIT)
        .unwrap()
        .iter()
        .map(|cp| fmt_conditional_profile(m, cp, true))
        .collect()
}
