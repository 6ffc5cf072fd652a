use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;

use super::{Formula, FormulaError, Literal, Rel, Sentence};
use crate::algebra::{IntPoly, Integers, Vars};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Eq,
    Neq,
    And,
    Or,
    Not,
    Colon,
    Comma,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, FormulaError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: l0, col: c0 });
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            push(&mut out, Tok::Int(s.parse().unwrap()));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            push(&mut out, if s == "not" { Tok::Not } else { Tok::Ident(s) });
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, width) = match (c, two.as_str()) {
            (_, "!=") => (Tok::Neq, 2),
            (_, "&&") => (Tok::And, 2),
            (_, "||") => (Tok::Or, 2),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('^', _) => (Tok::Caret, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('=', _) => (Tok::Eq, 1),
            ('&', _) => (Tok::And, 1),
            ('|', _) => (Tok::Or, 1),
            ('!', _) => (Tok::Not, 1),
            (':', _) => (Tok::Colon, 1),
            (',', _) => (Tok::Comma, 1),
            _ => {
                return Err(FormulaError::Syntax {
                    line,
                    col,
                    msg: format!("unexpected character '{c}'"),
                })
            }
        };
        push(&mut out, tok);
        i += width;
        col += width;
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    vars: Vars,
    index: HashMap<String, usize>,
}

type PResult<T> = Result<T, FormulaError>;

/// Parses `exists x, y: formula`.
pub fn parse(text: &str) -> Result<Sentence, FormulaError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        vars: Arc::new(Vec::new()),
        index: HashMap::new(),
    };
    p.sentence()
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let t = &self.toks[self.pos];
        let mut msg = msg.into();
        if t.tok == Tok::Eof {
            msg.push_str(" at end of input");
        }
        Err(FormulaError::Syntax {
            line: t.line,
            col: t.col,
            msg,
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn sentence(&mut self) -> PResult<Sentence> {
        match self.peek() {
            Tok::Ident(s) if s == "exists" => self.pos += 1,
            _ => return self.error("expected 'exists'"),
        }
        let mut names = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Ident(name) => {
                    if self.index.contains_key(&name) {
                        return self.error(format!("variable '{name}' declared twice"));
                    }
                    self.index.insert(name.clone(), names.len());
                    names.push(name);
                    self.pos += 1;
                }
                _ => return self.error("expected a variable name"),
            }
            if *self.peek() == Tok::Comma {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.expect(Tok::Colon, "':'")?;
        self.vars = Arc::new(names);
        let matrix = self.disjunction()?;
        if *self.peek() != Tok::Eof {
            return self.error("unexpected trailing input");
        }
        Ok(Sentence {
            vars: self.vars.clone(),
            matrix,
        })
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.conjunction()?];
        while *self.peek() == Tok::Or {
            self.pos += 1;
            parts.push(self.conjunction()?);
        }
        Ok(flatten(parts, false))
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.negation()?];
        while *self.peek() == Tok::And {
            self.pos += 1;
            parts.push(self.negation()?);
        }
        Ok(flatten(parts, true))
    }

    fn negation(&mut self) -> PResult<Formula> {
        if *self.peek() == Tok::Not {
            self.pos += 1;
            return Ok(self.negation()?.negate());
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Formula> {
        let start = self.pos;
        let cmp = self.comparison();
        if cmp.is_ok() || self.toks[start].tok != Tok::LParen {
            return cmp;
        }
        let cmp_pos = self.pos;
        self.pos = start + 1;
        let grouped = self.disjunction().and_then(|f| {
            self.expect(Tok::RParen, "')'")?;
            Ok(f)
        });
        match grouped {
            Ok(f) => Ok(f),
            Err(e) => {
                // report whichever reading got further
                if cmp_pos > self.pos {
                    cmp
                } else {
                    Err(e)
                }
            }
        }
    }

    fn comparison(&mut self) -> PResult<Formula> {
        let lhs = self.poly()?;
        let rel = match self.peek() {
            Tok::Eq => Rel::Eq,
            Tok::Neq => Rel::Neq,
            _ => return self.error("expected '=' or '!='"),
        };
        self.pos += 1;
        let rhs = self.poly()?;
        Ok(Formula::Lit(Literal::new(lhs.sub(&rhs), rel)))
    }

    fn poly(&mut self) -> PResult<IntPoly> {
        let mut acc = self.signed()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.signed()?);
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = acc.sub(&self.signed()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn signed(&mut self) -> PResult<IntPoly> {
        match self.peek() {
            Tok::Minus => {
                self.pos += 1;
                Ok(self.signed()?.neg())
            }
            Tok::Plus => {
                self.pos += 1;
                self.signed()
            }
            _ => self.product(),
        }
    }

    fn product(&mut self) -> PResult<IntPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.pos += 1;
                    let rhs = match self.peek() {
                        Tok::Minus | Tok::Plus => self.signed()?,
                        _ => self.power()?,
                    };
                    acc = acc.mul(&rhs);
                }
                Tok::Ident(_) | Tok::LParen => acc = acc.mul(&self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> PResult<IntPoly> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek().clone() {
            Tok::Int(n) => {
                let e: u32 = n
                    .try_into()
                    .map_err(|_| ())
                    .or_else(|_| self.error("exponent too large"))?;
                self.pos += 1;
                Ok(base.pow(e))
            }
            _ => self.error("expected a nonnegative integer exponent"),
        }
    }

    fn primary(&mut self) -> PResult<IntPoly> {
        let t = self.toks[self.pos].clone();
        match t.tok {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(IntPoly::constant(&Integers, &self.vars, n))
            }
            Tok::Ident(name) => match self.index.get(&name) {
                Some(&i) => {
                    self.pos += 1;
                    Ok(IntPoly::var(&Integers, &self.vars, i))
                }
                None => Err(FormulaError::Undeclared {
                    name,
                    line: t.line,
                    col: t.col,
                }),
            },
            Tok::LParen => {
                self.pos += 1;
                let p = self.poly()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(p)
            }
            _ => self.error("expected a polynomial"),
        }
    }
}

fn flatten(parts: Vec<Formula>, and: bool) -> Formula {
    if parts.len() == 1 {
        return parts.into_iter().next().unwrap();
    }
    let mut out = Vec::new();
    for p in parts {
        match (p, and) {
            (Formula::And(xs), true) | (Formula::Or(xs), false) => out.extend(xs),
            (p, _) => out.push(p),
        }
    }
    if and {
        Formula::And(out)
    } else {
        Formula::Or(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_literal() {
        let s = parse("exists x: x^2 + x + 1 = 0").unwrap();
        assert_eq!(s.vars.as_slice(), ["x"]);
        match &s.matrix {
            Formula::Lit(l) => {
                assert_eq!(l.rel, Rel::Eq);
                assert_eq!(l.poly.to_string(), "x^2 + x + 1");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn flagship_conjunct() {
        let s = parse("exists x: x^2 = 1 & x != 1").unwrap();
        assert_eq!(s.matrix.to_string(), "x^2 - 1 = 0 & x - 1 != 0");
    }

    #[test]
    fn sign_normalization_and_implicit_product() {
        let s = parse("exists x: 1 = 2x").unwrap();
        assert_eq!(s.matrix.to_string(), "2*x - 1 = 0");
        let s = parse("exists x: -x^2 = 0").unwrap();
        assert_eq!(s.matrix.to_string(), "x^2 = 0");
    }

    #[test]
    fn parenthesized_polynomial_vs_formula() {
        let s = parse("exists x: (x + 1)^2 = 0").unwrap();
        assert_eq!(s.matrix.to_string(), "x^2 + 2*x + 1 = 0");
        let s = parse("exists x: (x = 0 | x = 1) & x != 0").unwrap();
        assert_eq!(s.matrix.to_string(), "(x = 0 | x - 1 = 0) & x != 0");
    }

    #[test]
    fn error_at_end_of_input() {
        match parse("exists x: x = ").unwrap_err() {
            FormulaError::Syntax { line, col, msg } => {
                assert_eq!((line, col), (1, 15));
                assert!(msg.contains("end of input"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn undeclared_variable() {
        let err = parse("exists x:\n  y = 0").unwrap_err();
        assert_eq!(
            err,
            FormulaError::Undeclared {
                name: "y".into(),
                line: 2,
                col: 3
            }
        );
    }

    #[test]
    fn huge_coefficients() {
        let s = parse("exists x: 99999999999999999999999999 x = 1").unwrap();
        assert_eq!(s.matrix.to_string(), "99999999999999999999999999*x - 1 = 0");
    }
}
