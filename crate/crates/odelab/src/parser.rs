//! Text front end for polynomial vector fields.
//!
//! Grammar (whitespace is free between tokens):
//!
//! ```text
//! field := [sign] term (sign term)*
//! term  := coeff ["*" var] | var
//! var   := "z" ["^" digits]
//! coeff := p | p/q | decimal        (finite decimals, optional exponent)
//! ```
//!
//! Repeated powers accumulate, so `z + z` is `2*z`.

use std::fmt;

use num_traits::Zero;
use rota::lattice::VectorField;
use rota::rational::parse_rational;
use rota::Rational;

const MAX_POWER: usize = 1024;

/// Syntax error at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at column {}: {}",
            self.position + 1,
            self.message
        )
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, want: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(want) {
            self.pos += want.len_utf8();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, position: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position,
            message: message.into(),
        })
    }

    fn take_while(&mut self, pred: impl Fn(char, Option<char>) -> bool) -> &'a str {
        let start = self.pos;
        let mut prev = None;
        while let Some(c) = self.peek() {
            if !pred(c, prev) {
                break;
            }
            prev = Some(c);
            self.pos += c.len_utf8();
        }
        &self.text[start..self.pos]
    }

    fn number(&mut self) -> Result<Rational, ParseError> {
        let start = self.pos;
        let token = self.take_while(|c, prev| {
            c.is_ascii_digit()
                || matches!(c, '.' | '/' | 'e' | 'E')
                || (matches!(c, '+' | '-') && matches!(prev, Some('e' | 'E')))
        });
        parse_rational(token)
            .or_else(|e| self.error(start, format!("bad coefficient `{token}`: {e}")))
    }

    /// Parses `z` or `z^k` and returns `k`.
    fn variable(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() != Some('z') {
            return self.error(start, "expected `z`");
        }
        self.pos += 1;
        if !self.eat('^') {
            return Ok(1);
        }
        self.skip_ws();
        let at = self.pos;
        let digits = self.take_while(|c, _| c.is_ascii_digit());
        if digits.is_empty() {
            return self.error(at, "expected a nonnegative integer power after `^`");
        }
        match digits.parse::<usize>() {
            Ok(k) if k <= MAX_POWER => Ok(k),
            _ => self.error(at, format!("power `{digits}` exceeds {MAX_POWER}")),
        }
    }

    fn term(&mut self) -> Result<(Rational, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('z') => Ok((Rational::from_integer(1.into()), self.variable()?)),
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let coeff = self.number()?;
                if self.eat('*') {
                    Ok((coeff, self.variable()?))
                } else {
                    Ok((coeff, 0))
                }
            }
            Some(c) if c.is_alphabetic() => {
                let word = self.take_while(|c, _| c.is_alphanumeric());
                let lower = word.to_ascii_lowercase();
                if lower == "inf" || lower == "infinity" || lower == "nan" {
                    self.error(start, format!("non-finite coefficient `{word}`"))
                } else {
                    self.error(start, format!("unknown symbol `{word}`"))
                }
            }
            Some(c) => self.error(start, format!("unexpected `{c}`")),
            None => self.error(start, "expected a term"),
        }
    }
}

/// Parses text such as `1/2*z^2 - 3*z + 1` into a dense [`VectorField`].
///
/// ```
/// use odelab::parser::parse_field;
/// let f = parse_field("1/2*z^2 - 3*z + 1").unwrap();
/// assert_eq!(f.to_string(), "1/2*z^2 - 3*z + 1");
/// assert_eq!(parse_field("z + z").unwrap().to_string(), "2*z");
/// ```
pub fn parse_field(text: &str) -> Result<VectorField, ParseError> {
    let mut cur = Cursor { text, pos: 0 };
    cur.skip_ws();
    if cur.peek().is_none() {
        return cur.error(0, "empty input");
    }
    let mut coeffs: Vec<Rational> = Vec::new();
    let mut first = true;
    loop {
        cur.skip_ws();
        let negative = match cur.peek() {
            Some('+') => {
                cur.pos += 1;
                false
            }
            Some('-') => {
                cur.pos += 1;
                true
            }
            None if !first => break,
            _ if first => false,
            Some(c) => return cur.error(cur.pos, format!("expected `+` or `-`, found `{c}`")),
            None => unreachable!(),
        };
        let (coeff, power) = cur.term()?;
        if coeffs.len() <= power {
            coeffs.resize(power + 1, Rational::zero());
        }
        if negative {
            coeffs[power] -= coeff;
        } else {
            coeffs[power] += coeff;
        }
        first = false;
    }
    Ok(VectorField::new(coeffs))
}
