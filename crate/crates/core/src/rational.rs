//! Exact rational numbers and their text forms.
//!
//! Accepted inputs are `p/q` fractions, integers and finite decimals. A
//! decimal such as `0.35` is read as `35/100` and reduced, never through a
//! float.

use alloc::string::{String, ToString};
use core::fmt::Write as _;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary precision rational used throughout the crate.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty number")]
    Empty,
    #[error("malformed number `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Builds `num/den` from machine integers. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn in_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

fn parse_integer(text: &str, whole: &str) -> Result<BigInt, ParseRationalError> {
    let digits = text.strip_prefix(['+', '-']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRationalError::Malformed(whole.to_string()));
    }
    BigInt::parse_bytes(text.as_bytes(), 10)
        .ok_or_else(|| ParseRationalError::Malformed(whole.to_string()))
}

/// Parses `p/q`, an integer, or a finite decimal into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if let Some((p, q)) = t.split_once('/') {
        let num = parse_integer(p.trim(), t)?;
        let den = parse_integer(q.trim(), t)?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(t.to_string()));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let (negative, ip) = match ip.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, ip.strip_prefix('+').unwrap_or(ip)),
        };
        if (ip.is_empty() && fp.is_empty())
            || !ip.bytes().all(|b| b.is_ascii_digit())
            || !fp.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(ParseRationalError::Malformed(t.to_string()));
        }
        let mut digits = String::with_capacity(ip.len() + fp.len());
        digits.push_str(ip);
        digits.push_str(fp);
        if digits.is_empty() {
            return Err(ParseRationalError::Malformed(t.to_string()));
        }
        let mut num = BigInt::parse_bytes(digits.as_bytes(), 10)
            .ok_or_else(|| ParseRationalError::Malformed(t.to_string()))?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10u32), fp.len());
        return Ok(Rational::new(num, den));
    }
    Ok(Rational::from_integer(parse_integer(t, t)?))
}

/// Canonical fraction text: `p/q` in lowest terms, or a bare integer.
pub fn format_fraction(r: &Rational) -> String {
    r.to_string()
}

/// Decimal approximation rounded half away from zero to `places` digits.
pub fn format_decimal(r: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), places);
    let scaled = r * Rational::from_integer(scale.clone());
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let twice = rem.abs() * BigInt::from(2u32);
    let mut q = q;
    if twice >= *scaled.denom() {
        if scaled.is_negative() {
            q -= 1;
        } else {
            q += 1;
        }
    }
    let negative = q.sign() == Sign::Minus;
    let digits = q.abs().to_string();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if places == 0 {
        out.push_str(&digits);
        return out;
    }
    let padded = if digits.len() <= places {
        let mut s = String::new();
        for _ in 0..(places + 1 - digits.len()) {
            s.push('0');
        }
        s.push_str(&digits);
        s
    } else {
        digits
    };
    let split = padded.len() - places;
    let _ = write!(out, "{}.{}", &padded[..split], &padded[split..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("3/5").unwrap(), ratio(3, 5));
        assert_eq!(parse_rational("0.6").unwrap(), ratio(3, 5));
        assert_eq!(parse_rational(" 1 ").unwrap(), int(1));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), ratio(-1, 4));
        assert_eq!(parse_rational("2/4").unwrap(), ratio(1, 2));
    }

    #[test]
    fn rejects_bad_numbers() {
        assert_eq!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator("1/0".into()))
        );
        assert_eq!(parse_rational(""), Err(ParseRationalError::Empty));
        assert!(parse_rational("0.6.1").is_err());
        assert!(parse_rational("a/2").is_err());
        assert!(parse_rational(".").is_err());
        assert!(parse_rational("1e3").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(format_decimal(&ratio(1, 10), 6), "0.100000");
        assert_eq!(format_decimal(&ratio(1, 3), 6), "0.333333");
        assert_eq!(format_decimal(&ratio(2, 3), 6), "0.666667");
        assert_eq!(format_decimal(&int(1), 6), "1.000000");
        assert_eq!(format_decimal(&ratio(-1, 8), 2), "-0.13");
        assert_eq!(format_fraction(&ratio(7, 10)), "7/10");
        assert_eq!(format_fraction(&int(0)), "0");
    }
}
