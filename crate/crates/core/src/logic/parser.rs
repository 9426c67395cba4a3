//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! formula := iff
//! iff     := implies ("<->" implies)*
//! implies := or ("->" implies)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "K" INT unary | "[" formula "]" unary | atom
//! atom    := "(" formula ")" | "true" | "false"
//!          | "profile{" INT ":" order (";" INT ":" order)* "}"
//!          | "pref" INT "(" order ")"
//!          | INT ":" ID ">" ID
//!          | "wins" ID
//! order   := ID (">" ID)+
//! ```

use crate::error::FormulaError;
use crate::model::{Candidate, Election, Preference, Profile, Voter};

use super::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Colon,
    Semi,
    Gt,
    Word(String),
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Word(w) => format!("`{w}`"),
        Tok::End => "end of input".into(),
        other => format!(
            "`{}`",
            match other {
                Tok::Tilde => "~",
                Tok::Amp => "&",
                Tok::Bar => "|",
                Tok::Arrow => "->",
                Tok::DoubleArrow => "<->",
                Tok::LParen => "(",
                Tok::RParen => ")",
                Tok::LBracket => "[",
                Tok::RBracket => "]",
                Tok::LBrace => "{",
                Tok::RBrace => "}",
                Tok::Colon => ":",
                Tok::Semi => ";",
                Tok::Gt => ">",
                _ => unreachable!(),
            }
        ),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, FormulaError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = match b {
            b'~' => Some(Tok::Tilde),
            b'&' => Some(Tok::Amp),
            b'|' => Some(Tok::Bar),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'[' => Some(Tok::LBracket),
            b']' => Some(Tok::RBracket),
            b'{' => Some(Tok::LBrace),
            b'}' => Some(Tok::RBrace),
            b':' => Some(Tok::Colon),
            b';' => Some(Tok::Semi),
            b'>' => Some(Tok::Gt),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, start));
            i += 1;
        } else if src[i..].starts_with("->") {
            out.push((Tok::Arrow, start));
            i += 2;
        } else if src[i..].starts_with("<->") {
            out.push((Tok::DoubleArrow, start));
            i += 3;
        } else if b.is_ascii_alphanumeric() || b == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Word(src[start..i].to_string()), start));
        } else {
            let ch = src[i..].chars().next().unwrap_or('?');
            return Err(FormulaError::Syntax {
                offset: start,
                message: format!("unexpected character `{ch}`"),
            });
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'e> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    election: &'e Election,
}

fn is_int(w: &str) -> bool {
    !w.is_empty() && w.bytes().all(|b| b.is_ascii_digit())
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), FormulaError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!(
                "expected {}, found {}",
                describe(&tok),
                describe(self.peek())
            ))
        }
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.implies()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.implies()?;
            lhs = lhs.iff(rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implies()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn voter_number(&mut self, text: &str, offset: usize) -> Result<Voter, FormulaError> {
        let n: usize = text.parse().map_err(|_| FormulaError::Syntax {
            offset,
            message: format!("bad voter number `{text}`"),
        })?;
        let v = Voter(n);
        if !self.election.has_voter(v) {
            return Err(FormulaError::UnknownVoter { offset, voter: n });
        }
        Ok(v)
    }

    fn voter(&mut self) -> Result<Voter, FormulaError> {
        match self.bump() {
            (Tok::Word(w), off) if is_int(&w) => self.voter_number(&w, off),
            (t, off) => Err(FormulaError::Syntax {
                offset: off,
                message: format!("expected a voter number, found {}", describe(&t)),
            }),
        }
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(self.unary()?.negate())
            }
            Tok::LBracket => {
                self.bump();
                let announced = self.formula()?;
                self.expect(Tok::RBracket)?;
                let then = self.unary()?;
                Ok(Formula::announce(announced, then))
            }
            Tok::Word(w) if w.starts_with('K') && (w.len() == 1 || is_int(&w[1..])) => {
                let off = self.offset();
                self.bump();
                let voter = if w.len() == 1 {
                    self.voter()?
                } else {
                    self.voter_number(&w[1..], off + 1)?
                };
                Ok(Formula::know(voter, self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn candidate(&mut self) -> Result<Candidate, FormulaError> {
        match self.bump() {
            (Tok::Word(w), off) => {
                self.election
                    .candidate(&w)
                    .ok_or(FormulaError::UnknownCandidate {
                        offset: off,
                        name: w,
                    })
            }
            (t, off) => Err(FormulaError::Syntax {
                offset: off,
                message: format!("expected a candidate, found {}", describe(&t)),
            }),
        }
    }

    /// A complete order `a>b>c`.
    fn order(&mut self) -> Result<Preference, FormulaError> {
        let start = self.offset();
        let mut ranking = vec![self.candidate()?];
        while *self.peek() == Tok::Gt {
            self.bump();
            ranking.push(self.candidate()?);
        }
        Preference::new(self.election, ranking).map_err(|e| FormulaError::IncompleteProfileAtom {
            offset: start,
            message: e.to_string(),
        })
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        let (tok, off) = self.bump();
        match tok {
            Tok::LParen => {
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Word(w) if w == "true" => Ok(Formula::Top),
            Tok::Word(w) if w == "false" => Ok(Formula::bottom()),
            Tok::Word(w) if w == "wins" => Ok(Formula::Wins(self.candidate()?)),
            Tok::Word(w) if w == "pref" => {
                let voter = self.voter()?;
                self.expect(Tok::LParen)?;
                let order = self.order()?;
                self.expect(Tok::RParen)?;
                Ok(Formula::Pref(voter, order))
            }
            Tok::Word(w) if w == "profile" => {
                self.expect(Tok::LBrace)?;
                let n = self.election.num_voters();
                let mut prefs: Vec<Option<Preference>> = vec![None; n];
                loop {
                    let voff = self.offset();
                    let voter = self.voter()?;
                    if prefs[voter.index()].is_some() {
                        return Err(FormulaError::Syntax {
                            offset: voff,
                            message: format!("voter {voter} listed twice"),
                        });
                    }
                    self.expect(Tok::Colon)?;
                    prefs[voter.index()] = Some(self.order()?);
                    if *self.peek() == Tok::Semi {
                        self.bump();
                    } else {
                        break;
                    }
                }
                let close = self.offset();
                self.expect(Tok::RBrace)?;
                let prefs: Option<Vec<Preference>> = prefs.into_iter().collect();
                match prefs {
                    Some(prefs) => Ok(Formula::Profile(Profile(prefs))),
                    None => Err(FormulaError::IncompleteProfileAtom {
                        offset: close,
                        message: "every voter must be listed".into(),
                    }),
                }
            }
            Tok::Word(w) if is_int(&w) => {
                let voter = self.voter_number(&w, off)?;
                self.expect(Tok::Colon)?;
                let a = self.candidate()?;
                self.expect(Tok::Gt)?;
                let boff = self.offset();
                let b = self.candidate()?;
                if a == b {
                    return Err(FormulaError::Syntax {
                        offset: boff,
                        message: "a candidate cannot be compared with itself".into(),
                    });
                }
                if *self.peek() == Tok::Gt {
                    return self
                        .error("comparisons relate two candidates; use `pref` for a full order");
                }
                Ok(Formula::Prefers(voter, a, b))
            }
            other => Err(FormulaError::Syntax {
                offset: off,
                message: format!("expected a formula, found {}", describe(&other)),
            }),
        }
    }
}

/// Parses a formula over `election`.
pub fn parse(src: &str, election: &Election) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        election,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.error(format!("unexpected {}", describe(p.peek())));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e() -> Election {
        Election::new(["a", "b", "c"], 2).unwrap()
    }

    fn c(e: &Election, n: &str) -> Candidate {
        e.candidate(n).unwrap()
    }

    #[test]
    fn comparison_atom() {
        let e = e();
        assert_eq!(
            parse("1: a>c", &e).unwrap(),
            Formula::Prefers(Voter(1), c(&e, "a"), c(&e, "c"))
        );
    }

    #[test]
    fn announcement_example() {
        let e = e();
        let ac = Formula::Prefers(Voter(1), c(&e, "a"), c(&e, "c"));
        let k = Formula::know(Voter(2), ac.clone());
        let expected = k.clone().negate().and(Formula::announce(ac, k));
        assert_eq!(
            parse("~K2(1: a>c) & [1: a>c] K2(1: a>c)", &e).unwrap(),
            expected
        );
    }

    #[test]
    fn nested_knowledge_example() {
        let e = e();
        let p1 = Formula::Pref(Voter(1), e.parse_order("a>b>c", '>').unwrap());
        let k2p1 = Formula::know(Voter(2), p1);
        let parsed = parse(
            "K1 pref 2(c>b>a) & ~(K1 K2 pref 1(a>b>c) | K1 ~K2 pref 1(a>b>c))",
            &e,
        )
        .unwrap();
        let want = Formula::know(
            Voter(1),
            Formula::Pref(Voter(2), e.parse_order("c>b>a", '>').unwrap()),
        )
        .and(
            Formula::know(Voter(1), k2p1.clone())
                .or(Formula::know(Voter(1), k2p1.negate()))
                .negate(),
        );
        assert_eq!(parsed, want);
    }

    #[test]
    fn precedence_and_sugar() {
        let e = e();
        let w = |n| Formula::Wins(c(&e, n));
        assert_eq!(
            parse("wins a | wins b & wins c", &e).unwrap(),
            w("a").or(w("b").and(w("c")))
        );
        assert_eq!(
            parse("wins a -> wins b -> wins c", &e).unwrap(),
            w("a").implies(w("b").implies(w("c")))
        );
        assert_eq!(parse("wins a <-> wins b", &e).unwrap(), w("a").iff(w("b")));
        assert_eq!(parse("false", &e).unwrap(), Formula::bottom());
        assert_eq!(
            parse("K 2 true", &e).unwrap(),
            Formula::know(Voter(2), Formula::Top)
        );
    }

    #[test]
    fn profile_atom() {
        let e = e();
        let f = parse("profile{2: c>b>a; 1: a>b>c}", &e).unwrap();
        let Formula::Profile(p) = f else { panic!() };
        assert_eq!(p.pref(Voter(1)), &e.parse_order("a>b>c", '>').unwrap());
    }

    #[test]
    fn errors() {
        let e = e();
        assert!(matches!(
            parse("K3 true", &e),
            Err(FormulaError::UnknownVoter {
                voter: 3,
                offset: 1
            })
        ));
        assert!(matches!(
            parse("wins d", &e),
            Err(FormulaError::UnknownCandidate { offset: 5, .. })
        ));
        assert!(matches!(
            parse("profile{1: a>b>c}", &e),
            Err(FormulaError::IncompleteProfileAtom { .. })
        ));
        assert!(matches!(
            parse("pref 1(a>b)", &e),
            Err(FormulaError::IncompleteProfileAtom { .. })
        ));
        assert!(matches!(
            parse("(true", &e),
            Err(FormulaError::Syntax { offset: 5, .. })
        ));
        assert!(matches!(
            parse("true true", &e),
            Err(FormulaError::Syntax { offset: 5, .. })
        ));
        assert!(matches!(
            parse("1: a>a", &e),
            Err(FormulaError::Syntax { .. })
        ));
        assert!(matches!(
            parse("1: a>b>c", &e),
            Err(FormulaError::Syntax { .. })
        ));
        assert!(matches!(
            parse("true $", &e),
            Err(FormulaError::Syntax { offset: 5, .. })
        ));
    }

    #[test]
    fn display_round_trips() {
        let e = e();
        for src in [
            "~K2(1: a>c) & [1: a>c] K2(1: a>c)",
            "K1 pref 2(c>b>a) & ~(K1 K2 pref 1(a>b>c) | K1 ~K2 pref 1(a>b>c))",
            "(wins a -> wins b) <-> false",
            "profile{1: a>b>c; 2: c>b>a} | ~~true",
        ] {
            let f = parse(src, &e).unwrap();
            let printed = f.display(&e).to_string();
            assert_eq!(parse(&printed, &e).unwrap(), f, "{printed}");
        }
    }
}
