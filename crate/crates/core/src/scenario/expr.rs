//! Expressions: sums of terms `q * f1 ^ f2 (x) f3`, where each factor is a
//! rational literal, a label, or an indexed operator such as `dpsi[2]`.
//! Interpretation of the factors is left to the caller.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Number(Scalar),
    Label(String),
    Indexed(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coef: Scalar,
    pub factors: Vec<Factor>,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    Tensor,
}

fn lex(s: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |c: usize, msg: String| Error::Parse { line, col: col0 + c, msg };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Num(chars[start..i].iter().collect()), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if c == '(' {
            if chars.get(i + 1) == Some(&'x') && chars.get(i + 2) == Some(&')') {
                out.push((Tok::Tensor, i));
                i += 3;
            } else {
                return Err(err(i, "expected `(x)`".into()));
            }
        } else if "+-*^/[]".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(err(i, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    col0: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.col0 + self.toks.get(self.pos).map_or(self.end, |&(_, c)| c)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col(), msg: msg.into() }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<Scalar> {
        let Some(Tok::Num(n)) = self.peek().cloned() else { return Err(self.err("expected a number")) };
        self.pos += 1;
        if self.eat('/') {
            let Some(Tok::Num(d)) = self.peek().cloned() else { return Err(self.err("expected a denominator")) };
            self.pos += 1;
            return scalar::parse(&format!("{n}/{d}")).ok_or_else(|| self.err("zero denominator"));
        }
        Ok(scalar::parse(&n).expect("digits"))
    }

    fn factor(&mut self) -> Result<Factor> {
        match self.peek().cloned() {
            Some(Tok::Num(_)) => Ok(Factor::Number(self.number()?)),
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('[') {
                    let idx = match self.peek().cloned() {
                        Some(Tok::Num(s)) | Some(Tok::Ident(s)) => s,
                        _ => return Err(self.err("expected an index")),
                    };
                    self.pos += 1;
                    if !self.eat(']') {
                        return Err(self.err("expected `]`"));
                    }
                    Ok(Factor::Indexed(name, idx))
                } else {
                    Ok(Factor::Label(name))
                }
            }
            _ => Err(self.err("expected a number or a label")),
        }
    }

    fn term(&mut self, negative: bool) -> Result<Term> {
        let col = self.col();
        let mut coef = scalar::sign(negative);
        let mut factors = Vec::new();
        loop {
            match self.factor()? {
                Factor::Number(q) => coef *= q,
                f => factors.push(f),
            }
            match self.peek() {
                Some(Tok::Sym('*')) | Some(Tok::Sym('^')) | Some(Tok::Tensor) => self.pos += 1,
                _ => break,
            }
        }
        Ok(Term { coef, factors, col })
    }

    fn sum(&mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        let mut negative = self.eat('-');
        if !negative {
            self.eat('+');
        }
        loop {
            terms.push(self.term(negative)?);
            match self.peek() {
                None => break,
                Some(Tok::Sym('+')) => negative = false,
                Some(Tok::Sym('-')) => negative = true,
                _ => return Err(self.err("expected `+`, `-` or end of expression")),
            }
            self.pos += 1;
        }
        Ok(terms)
    }
}

/// Parses a sum of terms. `line` and `col` locate `s` in its file for
/// error messages.
pub fn parse_sum(s: &str, line: usize, col: usize) -> Result<Vec<Term>> {
    let toks = lex(s, line, col)?;
    let end = s.chars().count();
    let mut p = Parser { toks, pos: 0, line, col0: col, end };
    if p.peek().is_none() {
        return Err(p.err("empty expression"));
    }
    p.sum()
}

/// Renders `(coefficient, generators, base label)` triples as a sum.
///
/// With `None` for the generators a term prints as `q * b`; otherwise as
/// `q * g1^g2 (x) b`, or `q (x) b` for the empty monomial.
pub fn render_terms(terms: impl IntoIterator<Item = (Scalar, Option<String>, String)>) -> String {
    let mut out = String::new();
    for (q, gens, base) in terms {
        if q.is_zero() {
            continue;
        }
        let body = match gens {
            None => format!("{} * {base}", scalar::format(&q.abs())),
            Some(g) if g.is_empty() => format!("{} (x) {base}", scalar::format(&q.abs())),
            Some(g) => format!("{} * {g} (x) {base}", scalar::format(&q.abs())),
        };
        match (out.is_empty(), q.is_negative()) {
            (true, false) => out.push_str(&body),
            (true, true) => {
                out.push('-');
                out.push_str(&body)
            }
            (false, false) => {
                out.push_str(" + ");
                out.push_str(&body)
            }
            (false, true) => {
                out.push_str(" - ");
                out.push_str(&body)
            }
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    #[test]
    fn parses_terms_and_signs() {
        let t = parse_sum("-1/2 * psi^phat (x) u + 3 (x) 1 - x", 1, 1).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0].coef, frac(-1, 2));
        assert_eq!(t[0].factors, vec![Factor::Label("psi".into()), Factor::Label("phat".into()), Factor::Label("u".into())]);
        assert_eq!(t[1].coef, int(3));
        assert!(t[1].factors.is_empty());
        assert_eq!(t[2].coef, int(-1));
    }

    #[test]
    fn indexed_factors() {
        let t = parse_sum("psi[1]^dpsi[2] (x) theta1", 4, 1).unwrap();
        assert_eq!(t[0].factors[1], Factor::Indexed("dpsi".into(), "2".into()));
    }

    #[test]
    fn errors_carry_position() {
        match parse_sum("psi + % u", 3, 5) {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (3, 11)),
            other => panic!("{other:?}"),
        }
        assert!(parse_sum("psi +", 1, 1).is_err());
        assert!(parse_sum("1/0", 1, 1).is_err());
    }

    #[test]
    fn render_round_trip_shape() {
        let s = render_terms([(int(2), Some("psi".into()), "u".into()), (int(-1), Some(String::new()), "1".into())]);
        assert_eq!(s, "2 * psi (x) u - 1 (x) 1");
        assert_eq!(render_terms([(int(-3), None, "x".into())]), "-3 * x");
        assert_eq!(render_terms(Vec::new()), "0");
    }
}
