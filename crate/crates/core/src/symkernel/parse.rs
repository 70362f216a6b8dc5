//! Recursive-descent parser for the ASCII expression grammar.
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := primary ['^' int]
//! primary := int | 'p' | 'q' | 'atan(p)' | 'arctan(p)' | '(' expr ')'
//! ```
//!
//! Rational literals such as `3/2` are ordinary quotients. Any divisor must
//! normalize to `r*(1+p^2)^k`. Jet variables `x`, `y`, `u` are recognised
//! only by algebras that contain them.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use super::{ClassError, Rational};

const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    P,
    Q,
    X,
    Y,
    U,
}

impl Var {
    fn from_name(name: &str) -> Option<Self> {
        match name {
            "p" => Some(Var::P),
            "q" => Some(Var::Q),
            "x" => Some(Var::X),
            "y" => Some(Var::Y),
            "u" => Some(Var::U),
            _ => None,
        }
    }
}

/// Target of parser evaluation.
pub(crate) trait Algebra: Sized {
    fn from_rational(r: Rational) -> Self;
    /// `None` when the variable is not part of this algebra.
    fn variable(v: Var) -> Option<Self>;
    fn atan() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn times(&self, other: &Self) -> Result<Self, ClassError>;
    fn divide(&self, other: &Self) -> Result<Self, ClassError>;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character '{0}'")]
    UnexpectedCharacter(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unknown identifier '{0}'")]
    UnknownIdentifier(String),
    #[error("exponent larger than {MAX_EXPONENT}")]
    ExponentTooLarge,
    #[error(transparent)]
    Class(#[from] ClassError),
}

/// Parse failure at a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.position, self.kind)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digit run");
                tokens.push((start, Token::Int(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push((start, Token::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or(c);
                return Err(ParseError { position: start, kind: ParseErrorKind::UnexpectedCharacter(ch) });
            }
        };
        tokens.push((start, tok));
        i += 1;
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError { position: self.offset(), kind })
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token, what: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => self.err(ParseErrorKind::Expected(what)),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn class<T>(at: usize, r: Result<T, ClassError>) -> Result<T, ParseError> {
        r.map_err(|e| ParseError { position: at, kind: e.into() })
    }

    fn expr<A: Algebra>(&mut self) -> Result<A, ParseError> {
        let negate = if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc: A = self.term()?;
        if negate {
            acc = acc.negate();
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.plus(&self.term()?);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.minus(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<A: Algebra>(&mut self) -> Result<A, ParseError> {
        let mut acc: A = self.factor()?;
        loop {
            let at = self.offset();
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = Self::class(at, acc.times(&rhs))?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = Self::class(at, acc.divide(&rhs))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor<A: Algebra>(&mut self) -> Result<A, ParseError> {
        let base: A = self.primary()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        let at = self.offset();
        self.pos += 1;
        let exp = match self.peek() {
            Some(Token::Int(n)) => n.clone(),
            Some(_) => return self.err(ParseErrorKind::Expected("nonnegative integer exponent")),
            None => return self.err(ParseErrorKind::UnexpectedEnd),
        };
        let exp = match u32::try_from(&exp) {
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => return self.err(ParseErrorKind::ExponentTooLarge),
        };
        self.pos += 1;
        let mut acc = A::from_rational(Rational::from_integer(1.into()));
        for _ in 0..exp {
            acc = Self::class(at, acc.times(&base))?;
        }
        Ok(acc)
    }

    fn primary<A: Algebra>(&mut self) -> Result<A, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Token::Int(n)) => Ok(A::from_rational(Rational::from_integer(n))),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            Some(Token::Ident(name)) if name == "atan" || name == "arctan" => {
                self.expect(Token::LParen, "'(' after atan")?;
                match self.peek() {
                    Some(Token::Ident(arg)) if arg == "p" => self.pos += 1,
                    Some(_) => return self.err(ParseErrorKind::Expected("atan argument 'p'")),
                    None => return self.err(ParseErrorKind::UnexpectedEnd),
                }
                self.expect(Token::RParen, "')' after atan(p")?;
                Ok(A::atan())
            }
            Some(Token::Ident(name)) => match Var::from_name(&name).and_then(A::variable) {
                Some(v) => Ok(v),
                None => Err(ParseError { position: at, kind: ParseErrorKind::UnknownIdentifier(name) }),
            },
            Some(_) => Err(ParseError { position: at, kind: ParseErrorKind::Expected("operand") }),
            None => Err(ParseError { position: at, kind: ParseErrorKind::UnexpectedEnd }),
        }
    }
}

pub(crate) fn parse_with<A: Algebra>(text: &str) -> Result<A, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0, end: text.len() };
    if parser.peek().is_none() {
        return parser.err(ParseErrorKind::UnexpectedEnd);
    }
    let value = parser.expr()?;
    match parser.peek() {
        None => Ok(value),
        Some(Token::RParen) => parser.err(ParseErrorKind::UnexpectedCharacter(')')),
        Some(_) => parser.err(ParseErrorKind::Expected("operator or end of input")),
    }
}
