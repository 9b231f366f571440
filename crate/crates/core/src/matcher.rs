//! Comparing requirements against provider offers.
//!
//! An offered value is a guarantee in the direction of its metric: for a
//! lower-is-better metric it is the worst value the provider will deliver
//! (an upper bound), for a higher-is-better metric a lower bound. A
//! constraint is satisfied when every value the provider might deliver
//! satisfies it.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::constraints::{canonical_scalar, resolve_constraint, ConstraintError, Scalar};
use crate::model::{typed_value, Comparator, Literal, MetricConstraint};
use crate::units::UnitFamily;
use crate::value::{approx_f64, format_rational, parse_decimal, TypedValue};
use crate::vocabulary::{Catalog, Concept, Direction, VocabularyEntry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("`{metric}` is not a known metric for {concept}")]
    UnknownMetric { metric: String, concept: Concept },
    #[error("capability `{metric}`: {source}")]
    Capability { metric: String, source: ConstraintError },
    #[error("`{metric}`: {source}")]
    Constraint { metric: String, source: ConstraintError },
    #[error("offers cover different concepts: {0} and {1}")]
    MixedConcepts(Concept, Concept),
    #[error("invalid offer at `{pointer}`: {message}")]
    Offer { pointer: String, message: String },
    #[error("invalid weight for `{term}`: {message}")]
    Weight { term: String, message: String },
}

impl MatchError {
    pub fn is_unit_mismatch(&self) -> bool {
        match self {
            MatchError::Capability { source, .. } | MatchError::Constraint { source, .. } => source.is_unit_error(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatchVerdict {
    Satisfied,
    Violated,
    Unspecified,
}

impl MatchVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchVerdict::Satisfied => "satisfied",
            MatchVerdict::Violated => "violated",
            MatchVerdict::Unspecified => "unspecified",
        }
    }
}

impl fmt::Display for MatchVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A provider's guaranteed values for one concept, keyed by canonical term
/// and already converted to the term's canonical unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProviderOffer {
    pub provider_id: String,
    pub concept: Concept,
    pub capabilities: BTreeMap<String, Scalar>,
}

impl ProviderOffer {
    pub fn new(provider_id: impl Into<String>, concept: Concept) -> Self {
        ProviderOffer { provider_id: provider_id.into(), concept, capabilities: BTreeMap::new() }
    }

    /// Adds a guaranteed value. The metric may be an alias.
    pub fn with(mut self, metric: &str, value: TypedValue, catalog: &Catalog) -> Result<Self, MatchError> {
        let entry = catalog
            .lookup(metric, self.concept)
            .ok_or_else(|| MatchError::UnknownMetric { metric: metric.to_string(), concept: self.concept })?;
        let scalar = canonical_scalar(&value, entry)
            .map_err(|source| MatchError::Capability { metric: metric.to_string(), source })?;
        self.capabilities.insert(entry.term.clone(), scalar);
        Ok(self)
    }

    /// Reads `{provider_id, concept, capabilities: [{metric, value, unit?}]}`.
    pub fn from_json(text: &str, catalog: &Catalog) -> Result<Self, MatchError> {
        let bad = |pointer: &str, message: &str| MatchError::Offer { pointer: pointer.into(), message: message.into() };
        let v: Value = serde_json::from_str(text).map_err(|e| bad("", &e.to_string()))?;
        let id = v["provider_id"].as_str().ok_or_else(|| bad("/provider_id", "expected a string"))?;
        let concept: Concept = v["concept"]
            .as_str()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("/concept", "expected a concept name"))?;
        let caps = v["capabilities"].as_array().ok_or_else(|| bad("/capabilities", "expected an array"))?;
        let mut offer = ProviderOffer::new(id, concept);
        for (i, cap) in caps.iter().enumerate() {
            let at = |field: &str| format!("/capabilities/{i}/{field}");
            let metric = cap["metric"].as_str().ok_or_else(|| bad(&at("metric"), "expected a string"))?;
            let literal = match &cap["value"] {
                Value::Number(n) => Literal::Number(
                    parse_decimal(&n.to_string()).ok_or_else(|| bad(&at("value"), "number out of range"))?,
                ),
                Value::Bool(b) => Literal::Bool(*b),
                Value::String(s) => Literal::Str(s.clone()),
                _ => return Err(bad(&at("value"), "expected a number, boolean or string")),
            };
            let unit = match &cap["unit"] {
                Value::Null => None,
                Value::String(s) => Some(s.as_str()),
                _ => return Err(bad(&at("unit"), "expected a string")),
            };
            let value = typed_value(&literal, unit).map_err(|e| MatchError::Capability {
                metric: metric.to_string(),
                source: ConstraintError::UnknownUnit(e.0),
            })?;
            offer = offer.with(metric, value, catalog)?;
        }
        Ok(offer)
    }
}

/// Per-term weights; terms not listed weigh 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Weights(pub HashMap<String, BigRational>);

impl Weights {
    pub fn uniform() -> Self {
        Weights::default()
    }

    pub fn set(&mut self, term: impl Into<String>, weight: BigRational) -> Result<(), MatchError> {
        let term = term.into();
        if !weight.is_positive() {
            return Err(MatchError::Weight { term, message: "must be positive".into() });
        }
        self.0.insert(term, weight);
        Ok(())
    }

    /// Reads a JSON object mapping terms to positive numbers.
    pub fn from_json(text: &str) -> Result<Self, MatchError> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| MatchError::Weight { term: String::new(), message: e.to_string() })?;
        let obj = v
            .as_object()
            .ok_or_else(|| MatchError::Weight { term: String::new(), message: "expected an object".into() })?;
        let mut w = Weights::default();
        for (term, value) in obj {
            let n = value
                .as_number()
                .and_then(|n| parse_decimal(&n.to_string()))
                .ok_or_else(|| MatchError::Weight { term: term.clone(), message: "expected a number".into() })?;
            w.set(term.clone(), n)?;
        }
        Ok(w)
    }

    pub fn weight(&self, c: &MetricConstraint, entry: Option<&VocabularyEntry>) -> BigRational {
        self.0
            .get(&c.metric)
            .or_else(|| entry.and_then(|e| self.0.get(&e.term)))
            .cloned()
            .unwrap_or_else(BigRational::one)
    }
}

/// Range of values a provider may deliver; `None` is unbounded above.
struct Deliverable {
    lo: BigRational,
    hi: Option<BigRational>,
}

fn deliverable(bound: &BigRational, entry: &VocabularyEntry) -> Deliverable {
    let zero = BigRational::zero();
    match entry.direction {
        Direction::LowerIsBetter => Deliverable { lo: zero.min(bound.clone()), hi: Some(bound.clone()) },
        Direction::HigherIsBetter => {
            let hi = (entry.canonical_unit.family() == UnitFamily::Percent)
                .then(|| BigRational::from_integer(100.into()).max(bound.clone()));
            Deliverable { lo: bound.clone(), hi }
        }
        Direction::TargetEquality | Direction::None => Deliverable { lo: bound.clone(), hi: Some(bound.clone()) },
    }
}

fn all_satisfy(d: &Deliverable, cmp: Comparator, x: &BigRational) -> bool {
    match cmp {
        Comparator::Lt => d.hi.as_ref().is_some_and(|h| h < x),
        Comparator::Le => d.hi.as_ref().is_some_and(|h| h <= x),
        Comparator::Gt => &d.lo > x,
        Comparator::Ge => &d.lo >= x,
        Comparator::Eq => &d.lo == x && d.hi.as_ref() == Some(x),
    }
}

/// Whether `offer` guarantees `c`.
pub fn satisfies_capability(
    c: &MetricConstraint,
    offer: &ProviderOffer,
    catalog: &Catalog,
) -> Result<MatchVerdict, MatchError> {
    let entry = catalog
        .lookup(&c.metric, offer.concept)
        .ok_or_else(|| MatchError::UnknownMetric { metric: c.metric.clone(), concept: offer.concept })?;
    let resolved =
        resolve_constraint(c, entry).map_err(|source| MatchError::Constraint { metric: c.metric.clone(), source })?;
    let Some(offered) = offer.capabilities.get(&entry.term) else {
        return Ok(MatchVerdict::Unspecified);
    };
    let ok = match (offered, &resolved.rhs) {
        (Scalar::Number(b), Scalar::Number(x)) => all_satisfy(&deliverable(b, entry), c.comparator, x),
        (a, b) => c.comparator == Comparator::Eq && a == b,
    };
    Ok(if ok { MatchVerdict::Satisfied } else { MatchVerdict::Violated })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintOutcome {
    pub constraint: MetricConstraint,
    pub verdict: MatchVerdict,
    pub weight: BigRational,
    /// Set when the constraint could not be evaluated; the verdict is then
    /// `Unspecified`.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchReport {
    pub provider_id: String,
    pub outcomes: Vec<ConstraintOutcome>,
    pub score: BigRational,
    pub rank: usize,
}

fn evaluate(
    requirements: &[MetricConstraint],
    offer: &ProviderOffer,
    weights: &Weights,
    catalog: &Catalog,
) -> MatchReport {
    let outcomes: Vec<_> = requirements
        .iter()
        .map(|c| {
            let entry = catalog.lookup(&c.metric, offer.concept);
            let (verdict, error) = match satisfies_capability(c, offer, catalog) {
                Ok(v) => (v, None),
                Err(e) => (MatchVerdict::Unspecified, Some(e.to_string())),
            };
            ConstraintOutcome { constraint: c.clone(), verdict, weight: weights.weight(c, entry), error }
        })
        .collect();
    let total: BigRational = outcomes.iter().map(|o| &o.weight).sum();
    let satisfied: BigRational =
        outcomes.iter().filter(|o| o.verdict == MatchVerdict::Satisfied).map(|o| &o.weight).sum();
    let score = if total.is_zero() { BigRational::one() } else { satisfied / total };
    MatchReport { provider_id: offer.provider_id.clone(), outcomes, score, rank: 0 }
}

/// Weighted fraction of satisfied constraints. Unspecified and
/// unevaluable constraints count as not satisfied; no constraints scores 1.
pub fn score_offer(
    requirements: &[MetricConstraint],
    offer: &ProviderOffer,
    weights: &Weights,
    catalog: &Catalog,
) -> BigRational {
    evaluate(requirements, offer, weights, catalog).score
}

/// Reports by descending score, ties by provider id, with competition
/// ranks (1, 2, 2, 4).
pub fn rank_offers(
    requirements: &[MetricConstraint],
    offers: &[ProviderOffer],
    weights: &Weights,
    catalog: &Catalog,
) -> Result<Vec<MatchReport>, MatchError> {
    if let Some(first) = offers.first() {
        if let Some(other) = offers.iter().find(|o| o.concept != first.concept) {
            return Err(MatchError::MixedConcepts(first.concept, other.concept));
        }
    }
    let mut reports: Vec<_> = offers.iter().map(|o| evaluate(requirements, o, weights, catalog)).collect();
    reports.sort_by(|a, b| match b.score.cmp(&a.score) {
        Ordering::Equal => a.provider_id.cmp(&b.provider_id),
        o => o,
    });
    for i in 0..reports.len() {
        reports[i].rank = if i > 0 && reports[i].score == reports[i - 1].score { reports[i - 1].rank } else { i + 1 };
    }
    Ok(reports)
}

pub fn reports_to_json(reports: &[MatchReport]) -> Value {
    Value::Array(
        reports
            .iter()
            .map(|r| {
                json!({
                    "provider_id": r.provider_id,
                    "rank": r.rank,
                    "score": format_rational(&r.score),
                    "score_approx": approx_f64(&r.score),
                    "constraints": r.outcomes.iter().map(|o| {
                        let mut v = json!({
                            "constraint": o.constraint.to_string(),
                            "verdict": o.verdict.as_str(),
                            "weight": format_rational(&o.weight),
                        });
                        if let Some(e) = &o.error {
                            v["error"] = json!(e);
                        }
                        v
                    }).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

/// Aligned text table: rank, provider, score, and a verdict per constraint.
pub fn render_table(reports: &[MatchReport]) -> String {
    let mut header = vec!["rank".to_string(), "provider".to_string(), "score".to_string()];
    if let Some(r) = reports.first() {
        header.extend(r.outcomes.iter().map(|o| o.constraint.to_string()));
    }
    let mut rows = vec![header];
    for r in reports {
        let mut row = vec![r.rank.to_string(), r.provider_id.clone(), crate::value::format_rounded(&r.score, 3)];
        row.extend(r.outcomes.iter().map(|o| o.verdict.to_string()));
        rows.push(row);
    }
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|i| rows.iter().filter_map(|r| r.get(i)).map(|c| c.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = widths[i])).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}
