//! Recursive-descent parser for the ASCII surface syntax.
//!
//! Precedence, loosest first: `<->`, `->` (both right-associative), `|`, `&`,
//! then prefix `~`. A quantifier body extends as far to the right as possible.

use thiserror::Error;

use super::subst::{exists_unique, Fresh};
use super::{Connective, Formula, IndVar, PredVar, Quantifier, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("arity mismatch at byte {pos}: {msg}")]
    Arity { pos: usize, msg: String },
    #[error("at byte {pos}: quantified variable {var} is bound again inside its scope")]
    Capture { pos: usize, var: Var },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Ind(u32),
    Pred(u32, u32),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Dot,
    Eq,
    All,
    Ex,
    ExUnique,
}

fn describe(t: Option<Tok>) -> String {
    match t {
        None => "end of input".into(),
        Some(Tok::Ind(i)) => format!("'x{i}'"),
        Some(Tok::Pred(i, n)) => format!("'A{i}^{n}'"),
        Some(Tok::Not) => "'~'".into(),
        Some(Tok::And) => "'&'".into(),
        Some(Tok::Or) => "'|'".into(),
        Some(Tok::Implies) => "'->'".into(),
        Some(Tok::Iff) => "'<->'".into(),
        Some(Tok::LParen) => "'('".into(),
        Some(Tok::RParen) => "')'".into(),
        Some(Tok::Dot) => "'.'".into(),
        Some(Tok::Eq) => "'='".into(),
        Some(Tok::All) => "'all'".into(),
        Some(Tok::Ex) => "'ex'".into(),
        Some(Tok::ExUnique) => "'ex!!'".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let syntax = |pos, msg: &str| ParseError::Syntax {
        pos,
        msg: msg.to_string(),
    };
    let digits = |from: usize| {
        let mut j = from;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    let number = |from: usize, to: usize| -> Result<u32, ParseError> {
        src[from..to]
            .parse()
            .map_err(|_| syntax(from, "index out of range"))
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'~' => {
                i += 1;
                Tok::Not
            }
            b'&' => {
                i += 1;
                Tok::And
            }
            b'|' => {
                i += 1;
                Tok::Or
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'.' => {
                i += 1;
                Tok::Dot
            }
            b'=' => {
                i += 1;
                Tok::Eq
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Implies
            }
            b'<' if src[i..].starts_with("<->") => {
                i += 3;
                Tok::Iff
            }
            b'x' => {
                let end = digits(i + 1);
                if end == i + 1 {
                    return Err(syntax(start, "expected digits after 'x'"));
                }
                let idx = number(i + 1, end)?;
                i = end;
                Tok::Ind(idx)
            }
            b'A' => {
                let end = digits(i + 1);
                if end == i + 1 {
                    return Err(syntax(start, "expected digits after 'A'"));
                }
                let idx = number(i + 1, end)?;
                if bytes.get(end) != Some(&b'^') {
                    return Err(syntax(end, "expected '^<arity>' after predicate index"));
                }
                let aend = digits(end + 1);
                if aend == end + 1 {
                    return Err(syntax(end + 1, "expected arity digits after '^'"));
                }
                let arity = number(end + 1, aend)?;
                if arity == 0 {
                    return Err(ParseError::Arity {
                        pos: start,
                        msg: "predicate variables need arity >= 1".into(),
                    });
                }
                i = aend;
                Tok::Pred(idx, arity)
            }
            b'a'..=b'z' => {
                let mut end = i;
                while end < bytes.len() && bytes[end].is_ascii_alphanumeric() {
                    end += 1;
                }
                let word = &src[i..end];
                i = end;
                match word {
                    "all" => Tok::All,
                    "ex" if src[i..].starts_with("!!") => {
                        i += 2;
                        Tok::ExUnique
                    }
                    "ex" => Tok::Ex,
                    _ => return Err(syntax(start, &format!("unknown word {word:?}"))),
                }
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(syntax(start, &format!("unexpected character {ch:?}")));
            }
        };
        // keywords and variables must not run into further identifier chars
        if matches!(tok, Tok::Ind(_) | Tok::Pred(..) | Tok::All | Tok::Ex)
            && i < bytes.len()
            && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
        {
            return Err(syntax(i, "unexpected identifier character"));
        }
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    fresh: Fresh,
}

impl Parser<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            let found = describe(self.peek());
            self.err(format!("expected {}, found {found}", describe(Some(want))))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implies()?;
        if self.peek() == Some(Tok::Iff) {
            self.pos += 1;
            let rhs = self.iff()?;
            return Ok(Formula::bin(Connective::Iff, lhs, rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(Tok::Implies) {
            self.pos += 1;
            let rhs = self.implies()?;
            return Ok(Formula::bin(Connective::Implies, lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while self.peek() == Some(Tok::Or) {
            self.pos += 1;
            let rhs = self.and()?;
            acc = Formula::bin(Connective::Or, acc, rhs);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(Tok::And) {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = Formula::bin(Connective::And, acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::All | Tok::Ex | Tok::ExUnique) => self.quantified(),
            _ => self.primary(),
        }
    }

    fn quantified(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        let q = self.bump();
        let var = match self.bump() {
            Some(Tok::Ind(i)) => Var::Ind(IndVar(i)),
            Some(Tok::Pred(i, n)) if q != Some(Tok::ExUnique) => Var::Pred(PredVar::new(i, n)),
            Some(Tok::Pred(..)) => {
                self.pos -= 1;
                return self.err("'ex!!' binds individual variables only");
            }
            other => {
                self.pos -= 1;
                return self.err(format!("expected a variable, found {}", describe(other)));
            }
        };
        self.expect(Tok::Dot)?;
        let body = self.formula()?;
        if body.bound_vars().contains(&var) {
            return Err(ParseError::Capture { pos: at, var });
        }
        Ok(match (q, var) {
            (Some(Tok::All), v) => Formula::Quant(Quantifier::All, v, Box::new(body)),
            (Some(Tok::Ex), v) => Formula::Quant(Quantifier::Ex, v, Box::new(body)),
            (_, Var::Ind(x)) => exists_unique(&[x], &body, &mut self.fresh),
            (_, Var::Pred(_)) => unreachable!("rejected above"),
        })
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::LParen) => {
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Ind(i)) => {
                self.expect(Tok::Eq)?;
                match self.bump() {
                    Some(Tok::Ind(j)) => Ok(Formula::EqInd(IndVar(i), IndVar(j))),
                    Some(Tok::Pred(..)) => Err(ParseError::Arity {
                        pos: self.toks[self.pos - 1].0,
                        msg: "equality between an individual and a predicate".into(),
                    }),
                    other => {
                        self.pos -= 1;
                        self.err(format!(
                            "expected an individual variable, found {}",
                            describe(other)
                        ))
                    }
                }
            }
            Some(Tok::Pred(i, n)) => {
                let a = PredVar::new(i, n);
                if self.peek() == Some(Tok::Eq) {
                    self.pos += 1;
                    let rpos = self.offset();
                    return match self.bump() {
                        Some(Tok::Pred(j, k)) if k == n => {
                            Ok(Formula::EqPred(a, PredVar::new(j, k)))
                        }
                        Some(Tok::Pred(j, k)) => Err(ParseError::Arity {
                            pos: rpos,
                            msg: format!("equality between A{i}^{n} and A{j}^{k}"),
                        }),
                        Some(Tok::Ind(_)) => Err(ParseError::Arity {
                            pos: rpos,
                            msg: "equality between a predicate and an individual".into(),
                        }),
                        other => {
                            self.pos -= 1;
                            self.err(format!(
                                "expected a predicate variable, found {}",
                                describe(other)
                            ))
                        }
                    };
                }
                let mut args = Vec::with_capacity(n as usize);
                while let Some(Tok::Ind(j)) = self.peek() {
                    if args.len() == n as usize {
                        return Err(ParseError::Arity {
                            pos: at,
                            msg: format!("A{i}^{n} applied to more than {n} arguments"),
                        });
                    }
                    args.push(IndVar(j));
                    self.pos += 1;
                }
                if args.len() != n as usize {
                    return Err(ParseError::Arity {
                        pos: at,
                        msg: format!("A{i}^{n} applied to {} arguments", args.len()),
                    });
                }
                Ok(Formula::Atom(a, args))
            }
            other => {
                self.pos -= 1;
                self.err(format!("expected a formula, found {}", describe(other)))
            }
        }
    }
}

/// Parses one formula. `ex!! x . F` is expanded on the spot; its auxiliary
/// variables are numbered above every individual index used in `text`.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let max_ind = toks
        .iter()
        .filter_map(|t| match t.1 {
            Tok::Ind(i) => Some(i),
            _ => None,
        })
        .max();
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: text.len(),
        fresh: Fresh::above(max_ind.map_or(0, |m| m + 1), 0),
    };
    let f = p.formula()?;
    if p.pos < toks.len() {
        return p.err(format!("unexpected {} after formula", describe(p.peek())));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{pv, x};

    #[test]
    fn equality_and_atoms() {
        assert_eq!(parse("x1 = x1"), Ok(Formula::EqInd(x(1), x(1))));
        assert_eq!(
            parse("A1^2 x1 x2"),
            Ok(Formula::atom(pv(1, 2), [x(1), x(2)]))
        );
        assert_eq!(
            parse("A1^2 = A3^2"),
            Ok(Formula::EqPred(pv(1, 2), pv(3, 2)))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse("~A0^1 x0 & A1^1 x0 | A2^1 x0").unwrap();
        assert_eq!(
            f,
            Formula::or(
                Formula::and(
                    Formula::not(Formula::atom(pv(0, 1), [x(0)])),
                    Formula::atom(pv(1, 1), [x(0)])
                ),
                Formula::atom(pv(2, 1), [x(0)])
            )
        );
        let g = parse("x0 = x0 -> x1 = x1 -> x2 = x2").unwrap();
        assert_eq!(
            g,
            Formula::implies(
                Formula::EqInd(x(0), x(0)),
                Formula::implies(Formula::EqInd(x(1), x(1)), Formula::EqInd(x(2), x(2)))
            )
        );
        let h = parse("x0 = x0 <-> x1 = x1 -> x2 = x2").unwrap();
        assert!(matches!(h, Formula::Bin(Connective::Iff, ..)));
    }

    #[test]
    fn quantifier_body_extends_right() {
        let f = parse("all x1 . x1 = x1 & x1 = x2").unwrap();
        assert!(matches!(f, Formula::Quant(Quantifier::All, _, ref b)
            if matches!(**b, Formula::Bin(Connective::And, ..))));
    }

    #[test]
    fn rebinding_rejected() {
        let e = parse("all x1 . A0^1 x1 & ex x1 . A0^1 x1").unwrap_err();
        assert!(matches!(e, ParseError::Capture { pos: 0, .. }), "{e}");
        assert!(parse("x1 = x1 & ex x1 . x1 = x1").is_ok());
    }

    #[test]
    fn arity_errors() {
        assert!(matches!(parse("A1^2 x1"), Err(ParseError::Arity { .. })));
        assert!(matches!(parse("A1^1 x1 x2"), Err(ParseError::Arity { .. })));
        assert!(matches!(
            parse("A1^1 = A1^2"),
            Err(ParseError::Arity { .. })
        ));
        assert!(matches!(parse("x1 = A1^1"), Err(ParseError::Arity { .. })));
        assert!(matches!(
            parse("A1^0 = A1^0"),
            Err(ParseError::Arity { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(
            parse("x1 = "),
            Err(ParseError::Syntax {
                pos: 5,
                msg: "expected an individual variable, found end of input".into()
            })
        );
        assert!(matches!(
            parse("(x1 = x1"),
            Err(ParseError::Syntax { pos: 8, .. })
        ));
        assert!(matches!(
            parse("x1 = x1 )"),
            Err(ParseError::Syntax { pos: 8, .. })
        ));
        assert!(matches!(
            parse("alll x1 . x1 = x1"),
            Err(ParseError::Syntax { pos: 0, .. })
        ));
        assert!(parse("").is_err());
    }

    #[test]
    fn exists_unique_expansion() {
        let f = parse("ex!! x1 . A0^1 x1").unwrap();
        let expected =
            parse("(ex x1 . A0^1 x1) & all x2 . all x3 . (A0^1 x2 & A0^1 x3 -> x2 = x3)").unwrap();
        assert_eq!(f, expected);
    }

    #[test]
    fn nested_exists_unique_stays_well_formed() {
        let f = parse("ex!! x1 . ex!! x2 . A0^2 x1 x2").unwrap();
        assert!(crate::syntax::derivation(&f).is_ok());
        assert_eq!(parse(&f.to_string()), Ok(f));
    }
}
