//! Exact rational scalars.
//!
//! Every algebraic quantity in the crate is a [`Rational`], an
//! arbitrary-precision fraction kept in lowest terms with a positive
//! denominator. Text form is `p/q`, or just `p` when the denominator is one.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

/// `num / den` as a reduced rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Table of `0!, 1!, ..., max!`.
pub fn factorials(max: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(BigInt::one());
    for k in 1..=max {
        let next = &out[k - 1] * k;
        out.push(next);
    }
    out
}

/// `(-1)^e` as a sign flag: true when negative.
pub(crate) fn odd(e: u64) -> bool {
    e % 2 == 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    pub message: String,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for ParseRationalError {}

fn bad(message: impl Into<String>) -> ParseRationalError {
    ParseRationalError {
        message: message.into(),
    }
}

/// Parses a rational literal: `p`, `p/q` or a finite decimal such as
/// `-0.125` or `2.5e-3`. A leading sign is accepted.
///
/// ```
/// use rota::rational::{parse_rational, rat};
/// assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
/// assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
/// assert_eq!(parse_rational("1.5e2").unwrap(), rat(150, 1));
/// assert!(parse_rational("inf").is_err());
/// ```
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(bad("empty number"));
    }
    let lower = s.trim_start_matches(['+', '-']).to_ascii_lowercase();
    if lower.starts_with("inf") || lower.starts_with("nan") {
        return Err(bad(format!("non-finite value `{s}`")));
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let value = if let Some((p, q)) = body.split_once('/') {
        let p = parse_digits(p)?;
        let q = parse_digits(q)?;
        if q.is_zero() {
            return Err(bad("zero denominator"));
        }
        Rational::new(p, q)
    } else {
        parse_decimal(body)?
    };
    Ok(if negative { -value } else { value })
}

fn parse_digits(s: &str) -> Result<BigInt, ParseRationalError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad(format!("expected digits, found `{s}`")));
    }
    s.parse::<BigInt>().map_err(|e| bad(e.to_string()))
}

fn parse_decimal(s: &str) -> Result<Rational, ParseRationalError> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let exp = &s[i + 1..];
            let (neg, digits) = match exp.as_bytes().first() {
                Some(b'-') => (true, &exp[1..]),
                Some(b'+') => (false, &exp[1..]),
                _ => (false, exp),
            };
            let e: i64 = parse_digits(digits)?
                .to_i64()
                .filter(|e| *e <= 10_000)
                .ok_or_else(|| bad("exponent too large"))?;
            (&s[..i], if neg { -e } else { e })
        }
        None => (s, 0),
    };
    let (whole, frac) = match mantissa.split_once('.') {
        Some((w, f)) => (w, f),
        None => (mantissa, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return Err(bad(format!("malformed number `{s}`")));
    }
    let digits = format!("{whole}{frac}");
    let num = parse_digits(&digits)?;
    let scale = exponent - frac.len() as i64;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Stable text form: `p/q`, or `p` when `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Nearest `f64`. Huge magnitudes saturate to infinity.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering rounded (half away from zero) to `digits` places.
///
/// ```
/// use rota::rational::{format_decimal, rat};
/// assert_eq!(format_decimal(&rat(1, 3), 4), "0.3333");
/// assert_eq!(format_decimal(&rat(-5, 2), 0), "-3");
/// assert_eq!(format_decimal(&rat(-1, 200), 2), "-0.01");
/// ```
pub fn format_decimal(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (r * Rational::from_integer(scale.clone()))
        .round()
        .to_integer();
    let negative = scaled.is_negative();
    let (int_part, frac_part) = scaled.abs().div_rem(&scale);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{:0>width$}",
            frac_part.to_string(),
            width = digits
        )
    }
}
