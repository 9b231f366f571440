//! Satisfaction of `metric comparator value [unit]` clauses.
//!
//! Values are normalised into the metric's canonical unit before comparing.
//! All arithmetic is exact, so `==` behaves as written.

use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::model::{Comparator, MetricConstraint};
use crate::units::Unit;
use crate::value::{format_rational, TypedValue, ValueTag};
use crate::vocabulary::{ValueType, VocabularyEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Satisfied,
    Violated,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Satisfied
        } else {
            Verdict::Violated
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Satisfied => "satisfied",
            Verdict::Violated => "violated",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstraintError {
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
    #[error("unit `{found}` is not convertible to `{expected}`")]
    UnitMismatch { found: String, expected: String },
    #[error("expected a {expected} value, found {found}")]
    TypeMismatch { expected: &'static str, found: ValueTag },
    #[error("comparator `{comparator}` cannot be applied to a {value_type} metric")]
    ComparatorMismatch { comparator: Comparator, value_type: ValueType },
}

impl ConstraintError {
    /// Unit problems as opposed to type problems.
    pub fn is_unit_error(&self) -> bool {
        matches!(self, ConstraintError::UnknownUnit(_) | ConstraintError::UnitMismatch { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{from}` cannot be converted to `{to}`")]
pub struct IncompatibleUnits {
    pub from: String,
    pub to: String,
}

/// Converts a numeric value into `target`. A value without a unit is taken
/// to be in `target` already; non-numeric values pass through unchanged.
pub fn normalize_unit(value: &TypedValue, target: Unit) -> Result<TypedValue, IncompatibleUnits> {
    match value {
        TypedValue::Numeric { magnitude, unit } => {
            let from = unit.unwrap_or(target);
            let magnitude = from
                .convert(magnitude, target)
                .ok_or_else(|| IncompatibleUnits { from: from.name().to_string(), to: target.name().to_string() })?;
            Ok(TypedValue::Numeric { magnitude, unit: Some(target) })
        }
        other => Ok(other.clone()),
    }
}

/// A value reduced to the canonical unit of its metric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Number(BigRational),
    Bool(bool),
    Text(String),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Number(n) => f.write_str(&format_rational(n)),
            Scalar::Bool(b) => write!(f, "{b}"),
            Scalar::Text(s) => write!(f, "{s:?}"),
        }
    }
}

fn expected_tag(value_type: ValueType) -> (ValueTag, &'static str) {
    match value_type {
        ValueType::Numeric => (ValueTag::Numeric, "numeric"),
        ValueType::Boolean => (ValueTag::Boolean, "boolean"),
        ValueType::Enumerated => (ValueTag::Text, "enumerated"),
        ValueType::Text => (ValueTag::Text, "text"),
    }
}

/// Type-checks `value` against `entry` and converts it to the entry's
/// canonical unit.
pub fn canonical_scalar(value: &TypedValue, entry: &VocabularyEntry) -> Result<Scalar, ConstraintError> {
    let (tag, expected) = expected_tag(entry.value_type);
    if value.tag() != tag {
        return Err(ConstraintError::TypeMismatch { expected, found: value.tag() });
    }
    match value {
        TypedValue::Numeric { magnitude, unit } => {
            let canonical = entry.canonical_unit;
            let magnitude = match unit {
                None => magnitude.clone(),
                Some(u) => u.convert(magnitude, canonical).ok_or_else(|| ConstraintError::UnitMismatch {
                    found: u.name().to_string(),
                    expected: canonical.name().to_string(),
                })?,
            };
            Ok(Scalar::Number(magnitude))
        }
        TypedValue::Boolean(b) => Ok(Scalar::Bool(*b)),
        TypedValue::Text(s) => Ok(Scalar::Text(s.clone())),
    }
}

/// A constraint whose right-hand side has been checked against the catalog
/// and normalised.
#[derive(Debug, Clone)]
pub struct ResolvedConstraint<'a> {
    pub constraint: &'a MetricConstraint,
    pub entry: &'a VocabularyEntry,
    pub rhs: Scalar,
}

/// Checks comparator, value type and unit of `c` against `entry`.
pub fn resolve_constraint<'a>(
    c: &'a MetricConstraint,
    entry: &'a VocabularyEntry,
) -> Result<ResolvedConstraint<'a>, ConstraintError> {
    let value = c.typed_value().map_err(|e| ConstraintError::UnknownUnit(e.0))?;
    if value.tag() != ValueTag::Numeric && c.unit.is_some() {
        return Err(ConstraintError::UnitMismatch {
            found: c.unit.clone().unwrap_or_default(),
            expected: entry.canonical_unit.name().to_string(),
        });
    }
    if entry.value_type != ValueType::Numeric && c.comparator != Comparator::Eq {
        return Err(ConstraintError::ComparatorMismatch { comparator: c.comparator, value_type: entry.value_type });
    }
    let rhs = canonical_scalar(&value, entry)?;
    Ok(ResolvedConstraint { constraint: c, entry, rhs })
}

impl ResolvedConstraint<'_> {
    pub fn comparator(&self) -> Comparator {
        self.constraint.comparator
    }

    /// Applies the comparator to an already-normalised observation.
    /// Observations of a different type never satisfy.
    pub fn check_scalar(&self, observed: &Scalar) -> Verdict {
        let cmp = self.comparator();
        let ok = match (observed, &self.rhs) {
            (Scalar::Number(v), Scalar::Number(x)) => cmp.holds(v, x),
            (Scalar::Bool(v), Scalar::Bool(x)) => cmp == Comparator::Eq && v == x,
            (Scalar::Text(v), Scalar::Text(x)) => cmp == Comparator::Eq && v == x,
            _ => false,
        };
        Verdict::from_bool(ok)
    }

    pub fn check(&self, observed: &TypedValue) -> Result<Verdict, ConstraintError> {
        let scalar = canonical_scalar(observed, self.entry)?;
        Ok(self.check_scalar(&scalar))
    }
}

/// Decides whether `value` satisfies `c`, where `entry` is the catalog
/// entry for `c.metric`.
pub fn check_constraint_against_value(
    c: &MetricConstraint,
    value: &TypedValue,
    entry: &VocabularyEntry,
) -> Result<Verdict, ConstraintError> {
    resolve_constraint(c, entry)?.check(value)
}
