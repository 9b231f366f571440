//! Typed scalar values with exact decimal magnitudes.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::units::Unit;

/// A scalar as written on the right-hand side of a constraint, in a config
/// parameter, a provider capability or a telemetry sample.
///
/// Enumerated and free-text values share the `Text` variant; the catalog
/// entry decides which of the two a metric expects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypedValue {
    Numeric { magnitude: BigRational, unit: Option<Unit> },
    Boolean(bool),
    Text(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueTag {
    Numeric,
    Boolean,
    Text,
}

impl fmt::Display for ValueTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValueTag::Numeric => "numeric",
            ValueTag::Boolean => "boolean",
            ValueTag::Text => "text",
        })
    }
}

impl TypedValue {
    /// Parses a decimal literal such as `99.95`. Panics on malformed input,
    /// so only use it with literals known to be valid.
    pub fn number(literal: &str, unit: Option<&str>) -> TypedValue {
        let magnitude = parse_decimal(literal).unwrap_or_else(|| panic!("bad decimal literal {literal:?}"));
        let unit = unit.map(|u| Unit::parse(u).unwrap_or_else(|| panic!("unknown unit {u:?}")));
        TypedValue::Numeric { magnitude, unit }
    }

    pub fn integer(n: i64, unit: Option<Unit>) -> TypedValue {
        TypedValue::Numeric { magnitude: BigRational::from_integer(BigInt::from(n)), unit }
    }

    pub fn text(s: impl Into<String>) -> TypedValue {
        TypedValue::Text(s.into())
    }

    pub fn tag(&self) -> ValueTag {
        match self {
            TypedValue::Numeric { .. } => ValueTag::Numeric,
            TypedValue::Boolean(_) => ValueTag::Boolean,
            TypedValue::Text(_) => ValueTag::Text,
        }
    }

    pub fn magnitude(&self) -> Option<&BigRational> {
        match self {
            TypedValue::Numeric { magnitude, .. } => Some(magnitude),
            _ => None,
        }
    }

    pub fn unit(&self) -> Option<Unit> {
        match self {
            TypedValue::Numeric { unit, .. } => *unit,
            _ => None,
        }
    }
}

impl fmt::Display for TypedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypedValue::Numeric { magnitude, unit } => {
                f.write_str(&format_rational(magnitude))?;
                if let Some(u) = unit {
                    write!(f, " {u}")?;
                }
                Ok(())
            }
            TypedValue::Boolean(b) => write!(f, "{b}"),
            TypedValue::Text(s) => write!(f, "{s:?}"),
        }
    }
}

/// Parses `[+-]digits[.digits][(e|E)[+-]digits]` exactly.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], Some(&text[i + 1..])),
        None => (text, None),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if digits.contains('.') && frac_part.is_empty() {
        return None;
    }
    if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut numer: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    if negative {
        numer = -numer;
    }
    let mut scale = -(frac_part.len() as i64);
    if let Some(exp) = exponent {
        let e: i64 = exp.parse().ok()?;
        // guard against absurd exponents from JSON input
        if e.abs() > 400 {
            return None;
        }
        scale += e;
    }
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

/// Exact decimal rendering, or `None` if the expansion does not terminate.
pub fn format_decimal(value: &BigRational) -> Option<String> {
    let mut denom = value.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&denom % &two).is_zero() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = value * BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    let int = scaled.to_integer();
    if places == 0 {
        return Some(int.to_string());
    }
    let negative = int.is_negative();
    let digits = int.abs().to_string();
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (whole, frac) = padded.split_at(padded.len() - places);
    Some(format!("{}{whole}.{frac}", if negative { "-" } else { "" }))
}

/// Decimal when terminating, otherwise `numer/denom`.
pub fn format_rational(value: &BigRational) -> String {
    format_decimal(value).unwrap_or_else(|| format!("{}/{}", value.numer(), value.denom()))
}

/// Decimal rounded to `places` digits after the point (half away from zero).
pub fn format_rounded(value: &BigRational, places: usize) -> String {
    let scale = BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    let rounded = (value * &scale).round() / scale;
    format_decimal(&rounded).expect("rounded value terminates")
}

pub fn approx_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}
