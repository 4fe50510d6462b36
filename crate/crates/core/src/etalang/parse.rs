//! Text syntax for eta expressions.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := power (('*' | '/') power)*
//! power  := atom ['^' ['+' | '-'] INT]
//! atom   := INT | 'q' | 'f' INT | 'theta' '(' INT ',' INT ')' | '(' expr ')'
//! side   := 'extract' '(' expr ',' INT ',' INT ')' | expr
//! ```
//!
//! Division and negative powers are only allowed on pure eta quotients with
//! coefficient `+-1`; everything else would leave the power-series world.

use thiserror::Error;

use super::{EtaExpr, EtaMonomial, SideExpr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    UnknownFactor(String),
    NotInvertible(String),
    InvalidNumber(String),
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} at byte {position}", describe(kind))]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::UnexpectedChar(c) => format!("unexpected character {c:?}"),
        ParseErrorKind::UnexpectedToken { found, expected } => format!("expected {expected}, found {found:?}"),
        ParseErrorKind::UnexpectedEnd { expected } => format!("unexpected end of input, expected {expected}"),
        ParseErrorKind::UnknownFactor(name) => format!("unknown factor {name:?}"),
        ParseErrorKind::NotInvertible(what) => format!("cannot invert {what}"),
        ParseErrorKind::InvalidNumber(s) => format!("invalid number {s:?}"),
        ParseErrorKind::Overflow => "coefficient or exponent overflow".to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Sym(char),
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Int(n) => n.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Sym(c) => c.to_string(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let text = &src[start..i];
            let n = text.parse::<u64>().map_err(|_| ParseError {
                kind: ParseErrorKind::InvalidNumber(text.to_string()),
                position: start,
            })?;
            out.push((Tok::Int(n), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            let ch = src[i..].chars().next().expect("in bounds");
            return Err(ParseError { kind: ParseErrorKind::UnexpectedChar(ch), position: i });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0, end: src.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { kind, position: self.offset() }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(t) => self.err(ParseErrorKind::UnexpectedToken { found: t.text(), expected }),
            None => self.err(ParseErrorKind::UnexpectedEnd { expected }),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char, expected: &'static str) -> Result<(), ParseError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn expect_int(&mut self, expected: &'static str) -> Result<u64, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn expect_positive(&mut self, expected: &'static str) -> Result<u64, ParseError> {
        let at = self.offset();
        let n = self.expect_int(expected)?;
        if n == 0 {
            return Err(ParseError { kind: ParseErrorKind::InvalidNumber("0".into()), position: at });
        }
        Ok(n)
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn expr(&mut self) -> Result<EtaExpr, ParseError> {
        let mut negate = false;
        if self.eat_sym('-') {
            negate = true;
        } else {
            self.eat_sym('+');
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            if self.eat_sym('+') {
                acc = acc + self.term()?;
            } else if self.eat_sym('-') {
                acc = acc + -self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<EtaExpr, ParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat_sym('*') {
                let rhs = self.power()?;
                acc = acc.checked_mul(&rhs).ok_or_else(|| self.err(ParseErrorKind::Overflow))?;
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let at = self.offset();
                self.pos += 1;
                let rhs = self.power()?;
                let inv = reciprocal(&rhs).map_err(|kind| ParseError { kind, position: at })?;
                acc = acc.checked_mul(&inv).ok_or_else(|| self.err(ParseErrorKind::Overflow))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<EtaExpr, ParseError> {
        let base = self.atom()?;
        if !self.eat_sym('^') {
            return Ok(base);
        }
        let at = self.offset();
        let negative = if self.eat_sym('-') {
            true
        } else {
            self.eat_sym('+');
            false
        };
        let e = self.expect_int("exponent")?;
        let e = u32::try_from(e).map_err(|_| ParseError { kind: ParseErrorKind::Overflow, position: at })?;
        // a bare eta factor keeps any exponent without expanding
        if let Some(m) = base.as_monomial() {
            if m.qshift == 0 && m.thetas().is_empty() && m.coeff == 1 {
                if let [(k, 1)] = m.etas().collect::<Vec<_>>()[..] {
                    let e = if negative { -i64::from(e) } else { i64::from(e) };
                    return Ok(EtaExpr::from(EtaMonomial::eta(k, e)));
                }
            }
        }
        let pow = base.checked_pow(e).ok_or(ParseError { kind: ParseErrorKind::Overflow, position: at })?;
        if negative {
            reciprocal(&pow).map_err(|kind| ParseError { kind, position: at })
        } else {
            Ok(pow)
        }
    }

    fn atom(&mut self) -> Result<EtaExpr, ParseError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let c = i64::try_from(n).map_err(|_| ParseError { kind: ParseErrorKind::Overflow, position: at })?;
                Ok(EtaExpr::from(EtaMonomial::constant(c)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_sym(')', "')'")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.named_factor(&name, at)
            }
            _ => Err(self.unexpected("a factor")),
        }
    }

    fn named_factor(&mut self, name: &str, at: usize) -> Result<EtaExpr, ParseError> {
        if name == "q" {
            return Ok(EtaExpr::from(EtaMonomial::q_power(1)));
        }
        if name == "theta" {
            self.expect_sym('(', "'(' after theta")?;
            let a = self.expect_positive("theta parameter A")?;
            self.expect_sym(',', "','")?;
            let b = self.expect_positive("theta parameter B")?;
            self.expect_sym(')', "')'")?;
            return Ok(EtaExpr::from(EtaMonomial::theta(a, b)));
        }
        if let Some(digits) = name.strip_prefix('f') {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                return match digits.parse::<u64>() {
                    Ok(k) if k >= 1 => Ok(EtaExpr::from(EtaMonomial::eta(k, 1))),
                    _ => Err(ParseError { kind: ParseErrorKind::InvalidNumber(digits.to_string()), position: at }),
                };
            }
        }
        Err(ParseError { kind: ParseErrorKind::UnknownFactor(name.to_string()), position: at })
    }
}

fn reciprocal(e: &EtaExpr) -> Result<EtaExpr, ParseErrorKind> {
    e.as_monomial()
        .and_then(EtaMonomial::reciprocal)
        .map(EtaExpr::from)
        .ok_or_else(|| ParseErrorKind::NotInvertible(e.to_string()))
}

/// Parses an expression in the grammar above into normalized form.
pub fn parse(text: &str) -> Result<EtaExpr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

/// Parses one side of a catalog identity, which may wrap its expression in
/// `extract(expr, m, r)`.
pub fn parse_side(text: &str) -> Result<SideExpr, ParseError> {
    let mut p = Parser::new(text)?;
    if p.peek() == Some(&Tok::Ident("extract".into())) {
        p.pos += 1;
        p.expect_sym('(', "'(' after extract")?;
        let expr = p.expr()?;
        p.expect_sym(',', "','")?;
        let step = p.expect_positive("extraction step")?;
        p.expect_sym(',', "','")?;
        let at = p.offset();
        let residue = p.expect_int("extraction residue")?;
        if residue >= step {
            return Err(ParseError { kind: ParseErrorKind::InvalidNumber(residue.to_string()), position: at });
        }
        p.expect_sym(')', "')'")?;
        p.expect_end()?;
        return Ok(SideExpr::extracted(expr, step as usize, residue as usize));
    }
    let e = p.expr()?;
    p.expect_end()?;
    Ok(SideExpr::plain(e))
}
