//! Shared expression grammar: integers, rationals `p/q`, the symbol `t`,
//! declared parameter symbols, `+ - * / ^` with integer exponents,
//! parentheses, and matrices as bracketed row lists `[[..],[..]]`.

use super::matrix::MatrixRF;
use super::poly::Polynomial;
use super::ratfun::RationalFunction;
use num::BigInt;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Sym(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

struct Lexer {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
}

fn lex(input: &str) -> Result<Lexer, ParseError> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                tokens.push((i, Token::Plus));
                i += 1;
            }
            b'-' => {
                tokens.push((i, Token::Minus));
                i += 1;
            }
            b'*' => {
                tokens.push((i, Token::Star));
                i += 1;
            }
            b'/' => {
                tokens.push((i, Token::Slash));
                i += 1;
            }
            b'^' => {
                tokens.push((i, Token::Caret));
                i += 1;
            }
            b'(' => {
                tokens.push((i, Token::LParen));
                i += 1;
            }
            b')' => {
                tokens.push((i, Token::RParen));
                i += 1;
            }
            b'[' => {
                tokens.push((i, Token::LBracket));
                i += 1;
            }
            b']' => {
                tokens.push((i, Token::RBracket));
                i += 1;
            }
            b',' => {
                tokens.push((i, Token::Comma));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &input[start..i];
                tokens.push((start, Token::Int(text.parse().unwrap())));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push((start, Token::Sym(input[start..i].to_string())));
            }
            other => {
                return Err(ParseError {
                    position: i,
                    message: format!("unexpected character '{}'", other as char),
                })
            }
        }
    }
    Ok(Lexer { len: input.len(), tokens, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn expect(&mut self, tok: Token) -> Result<(), ParseError> {
        let pos = self.here();
        match self.next() {
            Some(t) if t == tok => Ok(()),
            got => Err(ParseError {
                position: pos,
                message: format!("expected {tok:?}, found {got:?}"),
            }),
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.here(), message: message.into() })
    }
}

struct Parser<'a> {
    lex: Lexer,
    symbols: &'a [String],
}

impl Parser<'_> {
    fn expr(&mut self) -> Result<RationalFunction, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.lex.peek() {
                Some(Token::Plus) => {
                    self.lex.next();
                    acc = acc.add(&self.term()?);
                }
                Some(Token::Minus) => {
                    self.lex.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.lex.peek() {
                Some(Token::Star) => {
                    self.lex.next();
                    acc = acc.mul(&self.factor()?);
                }
                Some(Token::Slash) => {
                    self.lex.next();
                    let d = self.factor()?;
                    if d.is_zero() {
                        return self.lex.err("division by zero");
                    }
                    acc = acc.div(&d);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RationalFunction, ParseError> {
        if matches!(self.lex.peek(), Some(Token::Minus)) {
            self.lex.next();
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if matches!(self.lex.peek(), Some(Token::Caret)) {
            self.lex.next();
            let mut neg = false;
            let mut parens = false;
            if matches!(self.lex.peek(), Some(Token::LParen)) {
                self.lex.next();
                parens = true;
            }
            if matches!(self.lex.peek(), Some(Token::Minus)) {
                self.lex.next();
                neg = true;
            }
            let e = match self.lex.next() {
                Some(Token::Int(n)) => n,
                got => {
                    return Err(ParseError {
                        position: self.lex.here(),
                        message: format!("expected integer exponent, found {got:?}"),
                    })
                }
            };
            if parens {
                self.lex.expect(Token::RParen)?;
            }
            let e: i64 = e
                .try_into()
                .map_err(|_| ParseError { position: self.lex.here(), message: "exponent too large".into() })?;
            let e = if neg { -e } else { e };
            if e < 0 && base.is_zero() {
                return self.lex.err("zero to a negative power");
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction, ParseError> {
        let pos = self.lex.here();
        match self.lex.next() {
            Some(Token::Int(n)) => Ok(RationalFunction::from_poly(Polynomial::constant(
                super::Rat::from_integer(n),
            ))),
            Some(Token::Sym(s)) => {
                if self.symbols.iter().any(|v| v == &s) {
                    Ok(RationalFunction::var(&s))
                } else {
                    Err(ParseError {
                        position: pos,
                        message: format!("unknown symbol '{s}' (declared: {:?})", self.symbols),
                    })
                }
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.lex.expect(Token::RParen)?;
                Ok(inner)
            }
            got => Err(ParseError {
                position: pos,
                message: format!("expected integer, symbol or '(', found {got:?}"),
            }),
        }
    }

    fn matrix(&mut self) -> Result<MatrixRF, ParseError> {
        self.lex.expect(Token::LBracket)?;
        let mut rows: Vec<Vec<RationalFunction>> = Vec::new();
        loop {
            self.lex.expect(Token::LBracket)?;
            let mut row = Vec::new();
            loop {
                row.push(self.expr()?);
                match self.lex.peek() {
                    Some(Token::Comma) => {
                        self.lex.next();
                    }
                    _ => break,
                }
            }
            self.lex.expect(Token::RBracket)?;
            if let Some(prev) = rows.first() {
                if prev.len() != row.len() {
                    return self.lex.err("ragged matrix rows");
                }
            }
            rows.push(row);
            match self.lex.peek() {
                Some(Token::Comma) => {
                    self.lex.next();
                }
                _ => break,
            }
        }
        self.lex.expect(Token::RBracket)?;
        let r = rows.len();
        let c = rows[0].len();
        Ok(MatrixRF::new(r, c, rows.into_iter().flatten().collect()))
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.lex.pos == self.lex.tokens.len() {
            Ok(())
        } else {
            Err(ParseError { position: self.lex.here(), message: "trailing input".into() })
        }
    }
}

/// Parse an expression over the declared symbols into a rational function.
pub fn parse_rational_function(input: &str, symbols: &[String]) -> Result<RationalFunction, ParseError> {
    let lex = lex(input)?;
    let mut p = Parser { lex, symbols };
    let v = p.expr()?;
    p.finish()?;
    Ok(v)
}

/// Parse a bracketed row list `[[..],[..]]` of expressions.
pub fn parse_matrix(input: &str, symbols: &[String]) -> Result<MatrixRF, ParseError> {
    let lex = lex(input)?;
    let mut p = Parser { lex, symbols };
    let m = p.matrix()?;
    p.finish()?;
    Ok(m)
}
