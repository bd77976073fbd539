//! Point expressions: rationals, decimals, `b` for the base, `+ - * /`,
//! `^` with an integer exponent, and parentheses. Example: `1/(b^2-1)`.

use betadim::interval::parse_rational;
use betadim::{FieldElement, NumberField, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(Rational),
    Base,
    Op(char),
    Open,
    Close,
}

fn tokenize(s: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '0'..='9' | '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Token::Num(
                    parse_rational(&text).map_err(|_| format!("malformed number {text:?}"))?,
                ));
            }
            'b' => {
                out.push(Token::Base);
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' => {
                out.push(Token::Op(c));
                i += 1;
            }
            '(' => {
                out.push(Token::Open);
                i += 1;
            }
            ')' => {
                out.push(Token::Close);
                i += 1;
            }
            other => return Err(format!("unexpected character {other:?} at position {i}")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    field: &'a NumberField,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<FieldElement, String> {
        let mut acc = self.term()?;
        while let Some(Token::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' {
                self.field.add(&acc, &rhs)
            } else {
                self.field.sub(&acc, &rhs)
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FieldElement, String> {
        let mut acc = self.unary()?;
        while let Some(Token::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == '*' {
                self.field.mul(&acc, &rhs)
            } else {
                self.field.div(&acc, &rhs).map_err(|e| e.to_string())?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<FieldElement, String> {
        if self.peek() == Some(&Token::Op('-')) {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(self.field.sub(&self.field.zero(), &v));
        }
        if self.peek() == Some(&Token::Op('+')) {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<FieldElement, String> {
        let base = self.atom()?;
        if self.peek() != Some(&Token::Op('^')) {
            return Ok(base);
        }
        self.pos += 1;
        let mut negative = false;
        while let Some(Token::Op(c @ ('-' | '+'))) = self.peek().cloned() {
            negative ^= c == '-';
            self.pos += 1;
        }
        let e = match self.next() {
            Some(Token::Num(n)) if n.is_integer() => n.to_integer(),
            _ => return Err("exponent must be an integer literal".into()),
        };
        let e: i64 = e.try_into().map_err(|_| "exponent too large".to_string())?;
        let e = if negative { -e } else { e };
        self.field.pow(&base, e).map_err(|err| err.to_string())
    }

    fn atom(&mut self) -> Result<FieldElement, String> {
        match self.next() {
            Some(Token::Num(n)) => Ok(self.field.from_rational(n)),
            Some(Token::Base) => Ok(self.field.generator()),
            Some(Token::Open) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Token::Close) => Ok(v),
                    _ => Err("missing closing parenthesis".into()),
                }
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }
}

/// Evaluates an expression exactly in `field`.
pub fn evaluate(field: &NumberField, text: &str) -> Result<FieldElement, String> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err("empty expression".into());
    }
    let mut p = Parser { tokens, pos: 0, field };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(format!("trailing input at token {}", p.pos));
    }
    Ok(v)
}

/// Reads a point given as an expression, an element in JSON form
/// (`{"coeffs": [...]}`), or `@path` naming a file holding either.
pub fn parse_point(field: &NumberField, arg: &str) -> Result<FieldElement, String> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?,
        None => arg.to_string(),
    };
    let text = text.trim();
    if text.starts_with('{') {
        let e: FieldElement = serde_json::from_str(text).map_err(|e| e.to_string())?;
        field.check(&e).map_err(|e| e.to_string())?;
        return Ok(e);
    }
    evaluate(field, text)
}

/// Parses `"c0,c1,...,1"` into integer coefficients.
pub fn parse_coeffs(s: &str) -> Result<Vec<BigInt>, String> {
    let coeffs: Result<Vec<BigInt>, String> = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<BigInt>().map_err(|_| format!("bad coefficient {t:?}"))
        })
        .collect();
    let coeffs = coeffs?;
    if coeffs.len() < 2 {
        return Err("polynomial needs degree at least 1".into());
    }
    if !coeffs.last().unwrap().is_one() {
        return Err("polynomial must be monic (last coefficient 1)".into());
    }
    if coeffs.iter().all(Zero::is_zero) {
        return Err("zero polynomial".into());
    }
    Ok(coeffs)
}
