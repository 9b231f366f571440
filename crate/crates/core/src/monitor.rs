//! SLO evaluation over timestamped telemetry.
//!
//! Records fall into tumbling windows `[k*w, (k+1)*w)`. In each window the
//! samples of a metric are folded with the catalog aggregator and the
//! result is checked against every constraint on that metric. Windows
//! without samples produce no verdict.

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

use crate::constraints::{canonical_scalar, resolve_constraint, Scalar, Verdict};
use crate::model::{MetricConstraint, ServiceKind, SlaDocument, Slo, SloTarget};
use crate::units::Unit;
use crate::value::{format_rational, parse_decimal, TypedValue};
use crate::vocabulary::{Aggregator, Catalog, Scope};

/// Boolean up/down observations that feed the `availability` metric.
pub const AVAILABILITY_STATE: &str = "availability_state";

const END_TO_END: &str = "end_to_end_response_time";

pub const DEFAULT_WINDOW: u64 = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonitorError {
    #[error("window width must be positive")]
    ZeroWidth,
    #[error("no samples in window")]
    EmptyWindow,
    #[error("{0}")]
    Domain(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TelemetryRecord {
    pub timestamp: u64,
    pub target_id: String,
    pub metric: String,
    pub value: TypedValue,
}

impl TelemetryRecord {
    pub fn new(timestamp: u64, target_id: impl Into<String>, metric: impl Into<String>, value: TypedValue) -> Self {
        TelemetryRecord { timestamp, target_id: target_id.into(), metric: metric.into(), value }
    }

    fn sort_key(&self) -> (u64, &str, &str, String) {
        (self.timestamp, &self.target_id, &self.metric, format!("{:?}", self.value))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    width: u64,
}

impl Default for Window {
    fn default() -> Self {
        Window { width: DEFAULT_WINDOW }
    }
}

impl Window {
    pub fn new(width: u64) -> Result<Self, MonitorError> {
        if width == 0 {
            return Err(MonitorError::ZeroWidth);
        }
        Ok(Window { width })
    }

    pub fn width(self) -> u64 {
        self.width
    }

    pub fn index(self, timestamp: u64) -> u64 {
        timestamp / self.width
    }

    /// `[start, end)` of window `index`.
    pub fn bounds(self, index: u64) -> (u64, u64) {
        let start = index.saturating_mul(self.width);
        (start, start.saturating_add(self.width))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationEvent {
    pub window_start: u64,
    pub window_end: u64,
    pub slo_id: String,
    pub target: String,
    pub constraint: MetricConstraint,
    /// Aggregate in the metric's canonical unit.
    pub observed: Scalar,
    pub unit: Unit,
    pub samples: usize,
}

impl ViolationEvent {
    pub fn to_json(&self) -> Value {
        let observed = match &self.observed {
            Scalar::Number(n) => json!(format_rational(n)),
            Scalar::Bool(b) => json!(b),
            Scalar::Text(s) => json!(s),
        };
        json!({
            "window_start": self.window_start,
            "window_end": self.window_end,
            "slo": self.slo_id,
            "target": self.target,
            "constraint": self.constraint.to_string(),
            "metric": self.constraint.metric,
            "observed": observed,
            "unit": self.unit.name(),
            "samples": self.samples,
            "verdict": Verdict::Violated.as_str(),
        })
    }
}

impl fmt::Display for ViolationEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}) {} on {}: `{}` violated, observed {} {}",
            self.window_start, self.window_end, self.slo_id, self.target, self.constraint, self.observed, self.unit
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageWarning {
    pub window: Option<(u64, u64)>,
    pub subject: String,
    pub message: String,
}

impl fmt::Display for CoverageWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.window {
            Some((s, e)) => write!(f, "[{s}, {e}) {}: {}", self.subject, self.message),
            None => write!(f, "{}: {}", self.subject, self.message),
        }
    }
}

/// 100 × up / total.
pub fn availability_ratio(samples: &[bool]) -> Result<BigRational, MonitorError> {
    if samples.is_empty() {
        return Err(MonitorError::EmptyWindow);
    }
    let up = samples.iter().filter(|b| **b).count();
    Ok(percent(up as u64, samples.len() as u64))
}

fn percent(part: u64, whole: u64) -> BigRational {
    BigRational::new((100 * part as u128).into(), (whole as u128).into())
}

/// Percentage of a window's tuples that were used in the result.
pub fn data_completeness(used_tuples: u64, window_tuples: u64) -> Result<BigRational, MonitorError> {
    if window_tuples == 0 || used_tuples > window_tuples {
        return Err(MonitorError::Domain(format!(
            "data completeness needs 0 <= used <= window and window > 0, got {used_tuples} of {window_tuples}"
        )));
    }
    Ok(percent(used_tuples, window_tuples))
}

/// Percentage of queries that missed their deadline.
pub fn miss_ratio(missed_queries: u64, total_queries: u64) -> Result<BigRational, MonitorError> {
    if total_queries == 0 || missed_queries > total_queries {
        return Err(MonitorError::Domain(format!(
            "miss ratio needs 0 <= missed <= total and total > 0, got {missed_queries} of {total_queries}"
        )));
    }
    Ok(percent(missed_queries, total_queries))
}

/// Folds samples with `agg`. Booleans count as 100 (up) or 0 (down) under
/// `ratio`; `none` keeps the last sample.
pub fn aggregate(agg: Aggregator, samples: &[Scalar]) -> Option<Scalar> {
    let last = samples.last()?.clone();
    let numbers: Option<Vec<BigRational>> = samples
        .iter()
        .map(|s| match s {
            Scalar::Number(n) => Some(n.clone()),
            Scalar::Bool(b) if agg == Aggregator::Ratio => {
                Some(if *b { BigRational::from_integer(100.into()) } else { BigRational::zero() })
            }
            _ => None,
        })
        .collect();
    let Some(numbers) = numbers else { return Some(last) };
    let n = BigRational::from_integer(numbers.len().into());
    let out = match agg {
        Aggregator::Max => numbers.into_iter().max()?,
        Aggregator::Min => numbers.into_iter().min()?,
        Aggregator::Sum => numbers.into_iter().sum(),
        Aggregator::Mean | Aggregator::Ratio => numbers.into_iter().sum::<BigRational>() / n,
        Aggregator::None => return Some(last),
    };
    Some(Scalar::Number(out))
}

/// The delay metric each service kind reports for end-to-end response.
pub fn delay_metric(kind: ServiceKind) -> Option<&'static str> {
    match kind {
        ServiceKind::Sensing => Some("data_freshness"),
        ServiceKind::Networking => Some("network_delay"),
        ServiceKind::Ingestion | ServiceKind::StreamProcessing => Some("latency"),
        ServiceKind::BatchProcessing | ServiceKind::Database => Some("response_time"),
        ServiceKind::MachineLearning => None,
    }
}

/// A record checked against the catalog, with its value in canonical units.
#[derive(Debug, Clone)]
struct Sample {
    timestamp: u64,
    target: String,
    term: String,
    value: Scalar,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RecordStats {
    pub accepted: usize,
    pub unknown: usize,
    pub mistyped: usize,
    pub late: usize,
}

impl RecordStats {
    pub fn skipped(&self) -> usize {
        self.unknown + self.mistyped + self.late
    }
}

enum Classified {
    Sample(Sample),
    Unknown,
    Mistyped,
}

fn classify(record: &TelemetryRecord, scope: Option<Scope>, target: &str, catalog: &Catalog) -> Classified {
    let Some(scope) = scope else { return Classified::Unknown };
    let (entry, value) = if record.metric == AVAILABILITY_STATE {
        let Some(entry) = catalog.lookup_in("availability", scope) else { return Classified::Unknown };
        match record.value {
            TypedValue::Boolean(b) => (entry, Scalar::Bool(b)),
            _ => return Classified::Mistyped,
        }
    } else {
        let Some(entry) = catalog.lookup_in(&record.metric, scope) else { return Classified::Unknown };
        match canonical_scalar(&record.value, entry) {
            Ok(v) => (entry, v),
            Err(_) => return Classified::Mistyped,
        }
    };
    Classified::Sample(Sample {
        timestamp: record.timestamp,
        target: target.to_string(),
        term: entry.term.clone(),
        value,
    })
}

/// Folds each metric's samples in one window and reports failed constraints.
fn check_slo(
    slo: &Slo,
    scope: Scope,
    target: &str,
    samples: &[&Sample],
    bounds: (u64, u64),
    catalog: &Catalog,
    skip_end_to_end: bool,
) -> (Vec<ViolationEvent>, bool) {
    let mut events = Vec::new();
    let mut evaluated = false;
    for c in &slo.constraints {
        let Some(entry) = catalog.lookup_in(&c.metric, scope) else { continue };
        if skip_end_to_end && entry.term == END_TO_END {
            continue;
        }
        let Ok(resolved) = resolve_constraint(c, entry) else { continue };
        let values: Vec<Scalar> =
            samples.iter().filter(|s| s.target == target && s.term == entry.term).map(|s| s.value.clone()).collect();
        let agg = if values.iter().any(|v| matches!(v, Scalar::Bool(_))) && entry.term == "availability" {
            Aggregator::Ratio
        } else {
            entry.aggregator
        };
        let Some(observed) = aggregate(agg, &values) else { continue };
        evaluated = true;
        if resolved.check_scalar(&observed) == Verdict::Violated {
            events.push(ViolationEvent {
                window_start: bounds.0,
                window_end: bounds.1,
                slo_id: slo.id.clone(),
                target: target.to_string(),
                constraint: c.clone(),
                observed,
                unit: entry.canonical_unit,
                samples: values.len(),
            });
        }
    }
    (events, evaluated)
}

fn windows_of(samples: &[Sample], window: Window) -> BTreeMap<u64, Vec<&Sample>> {
    let mut by_window: BTreeMap<u64, Vec<&Sample>> = BTreeMap::new();
    for s in samples {
        by_window.entry(window.index(s.timestamp)).or_default().push(s);
    }
    by_window
}

fn sorted(records: &[TelemetryRecord]) -> Vec<&TelemetryRecord> {
    let mut v: Vec<_> = records.iter().collect();
    v.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    v
}

/// Violations of `slo` per window. `scope` is the vocabulary of the SLO's
/// target; only records whose `target_id` names that target are used
/// (`app` for application SLOs).
pub fn evaluate_window(
    slo: &Slo,
    scope: Scope,
    records: &[TelemetryRecord],
    window: Window,
    catalog: &Catalog,
) -> Vec<ViolationEvent> {
    let target = slo.target.as_str();
    let samples: Vec<Sample> = sorted(records)
        .into_iter()
        .filter(|r| r.target_id == target)
        .filter_map(|r| match classify(r, Some(scope), target, catalog) {
            Classified::Sample(s) => Some(s),
            _ => None,
        })
        .collect();
    windows_of(&samples, window)
        .into_iter()
        .flat_map(|(idx, in_window)| check_slo(slo, scope, target, &in_window, window.bounds(idx), catalog, false).0)
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EndToEnd {
    pub events: Vec<ViolationEvent>,
    pub warnings: Vec<CoverageWarning>,
    /// Per evaluated window: start and summed response time.
    pub observed: Vec<(u64, BigRational)>,
}

fn delay_samples(
    doc: &SlaDocument,
    samples: &[&Sample],
    bounds: (u64, u64),
    out: &mut EndToEnd,
) -> Option<BigRational> {
    if doc.activities.is_empty() {
        return None;
    }
    let mut total = BigRational::zero();
    let mut any = false;
    for a in &doc.activities {
        let worst = doc
            .services_for_activity(&a.id)
            .unwrap_or_default()
            .into_iter()
            .filter_map(|svc| delay_metric(svc.kind).map(|m| (svc, m)))
            .flat_map(|(svc, m)| {
                samples.iter().filter(move |s| s.target == svc.id && s.term == m).filter_map(|s| match &s.value {
                    Scalar::Number(n) => Some(n.clone()),
                    _ => None,
                })
            })
            .max();
        match worst {
            Some(v) => {
                any = true;
                total += v;
            }
            None => out.warnings.push(CoverageWarning {
                window: Some(bounds),
                subject: a.id.clone(),
                message: "no delay samples for this activity; counted as 0".into(),
            }),
        }
    }
    any.then_some(total)
}

fn end_to_end_window(
    doc: &SlaDocument,
    catalog: &Catalog,
    samples: &[&Sample],
    bounds: (u64, u64),
    out: &mut EndToEnd,
) {
    let mut scratch = EndToEnd::default();
    let Some(total) = delay_samples(doc, samples, bounds, &mut scratch) else { return };
    out.warnings.extend(scratch.warnings);
    out.observed.push((bounds.0, total.clone()));
    for slo in &doc.app_slos {
        for c in &slo.constraints {
            let Some(entry) = catalog.lookup_in(&c.metric, Scope::Application) else { continue };
            if entry.term != END_TO_END {
                continue;
            }
            let Ok(resolved) = resolve_constraint(c, entry) else { continue };
            let observed = Scalar::Number(total.clone());
            if resolved.check_scalar(&observed) == Verdict::Violated {
                out.events.push(ViolationEvent {
                    window_start: bounds.0,
                    window_end: bounds.1,
                    slo_id: slo.id.clone(),
                    target: SloTarget::Application.as_str().to_string(),
                    constraint: c.clone(),
                    observed,
                    unit: entry.canonical_unit,
                    samples: doc.activities.len(),
                });
            }
        }
    }
}

fn document_scope(doc: &SlaDocument, target: &str) -> Option<Scope> {
    if target == SloTarget::Application.as_str() || target == doc.header.id {
        Some(Scope::Application)
    } else {
        doc.service(target)
            .map(|s| Scope::Concept(s.kind.concept()))
            .or_else(|| doc.resource(target).map(|r| Scope::Concept(r.kind.concept())))
    }
}

fn normalise_target<'a>(doc: &SlaDocument, target: &'a str) -> &'a str {
    if target == doc.header.id {
        SloTarget::Application.as_str()
    } else {
        target
    }
}

/// Application end-to-end response per window: the sum over activities, in
/// declaration order, of the largest delay reported by any of the
/// activity's services. Activities without samples add 0 and a warning.
pub fn end_to_end_response(
    doc: &SlaDocument,
    records: &[TelemetryRecord],
    window: Window,
    catalog: &Catalog,
) -> EndToEnd {
    let samples: Vec<Sample> = sorted(records)
        .into_iter()
        .filter_map(|r| {
            let target = normalise_target(doc, &r.target_id);
            match classify(r, document_scope(doc, target), target, catalog) {
                Classified::Sample(s) => Some(s),
                _ => None,
            }
        })
        .collect();
    let mut out = EndToEnd::default();
    for (idx, in_window) in windows_of(&samples, window) {
        end_to_end_window(doc, catalog, &in_window, window.bounds(idx), &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SloSummary {
    pub slo_id: String,
    pub target: String,
    pub windows_evaluated: usize,
    pub violations: usize,
}

/// Incremental evaluation of every SLO in a document. A window is evaluated
/// once a record at or past its end arrives, or on [`finish`](Self::finish).
pub struct StreamingMonitor<'a> {
    doc: &'a SlaDocument,
    catalog: &'a Catalog,
    window: Window,
    current: Option<u64>,
    buffer: Vec<Sample>,
    stats: RecordStats,
    summaries: Vec<SloSummary>,
    warnings: Vec<CoverageWarning>,
    end_to_end: Vec<(u64, BigRational)>,
    emitted: Vec<ViolationEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonitorReport {
    pub events: Vec<ViolationEvent>,
    pub warnings: Vec<CoverageWarning>,
    pub stats: RecordStats,
    pub summaries: Vec<SloSummary>,
    pub end_to_end: Vec<(u64, BigRational)>,
}

impl<'a> StreamingMonitor<'a> {
    pub fn new(doc: &'a SlaDocument, catalog: &'a Catalog, window: Window) -> Self {
        let summaries = doc
            .all_slos()
            .map(|(s, _)| SloSummary {
                slo_id: s.id.clone(),
                target: s.target.as_str().to_string(),
                windows_evaluated: 0,
                violations: 0,
            })
            .collect();
        StreamingMonitor {
            doc,
            catalog,
            window,
            current: None,
            buffer: Vec::new(),
            stats: RecordStats::default(),
            summaries,
            warnings: Vec::new(),
            end_to_end: Vec::new(),
            emitted: Vec::new(),
        }
    }

    pub fn stats(&self) -> RecordStats {
        self.stats
    }

    /// Feeds one record; returns the violations of any windows it closes.
    pub fn push(&mut self, record: &TelemetryRecord) -> Vec<ViolationEvent> {
        let idx = self.window.index(record.timestamp);
        let mut events = Vec::new();
        match self.current {
            Some(cur) if idx < cur => {
                self.stats.late += 1;
                return events;
            }
            Some(cur) if idx > cur => {
                events = self.close();
                self.current = Some(idx);
            }
            None => self.current = Some(idx),
            _ => {}
        }
        let target = normalise_target(self.doc, &record.target_id);
        match classify(record, document_scope(self.doc, target), target, self.catalog) {
            Classified::Sample(s) => {
                self.stats.accepted += 1;
                self.buffer.push(s);
            }
            Classified::Unknown => self.stats.unknown += 1,
            Classified::Mistyped => self.stats.mistyped += 1,
        }
        events
    }

    fn close(&mut self) -> Vec<ViolationEvent> {
        let Some(idx) = self.current else { return Vec::new() };
        let mut samples = std::mem::take(&mut self.buffer);
        if samples.is_empty() {
            return Vec::new();
        }
        samples.sort_by(|a, b| {
            (a.timestamp, &a.target, &a.term, format!("{:?}", a.value)).cmp(&(
                b.timestamp,
                &b.target,
                &b.term,
                format!("{:?}", b.value),
            ))
        });
        let refs: Vec<&Sample> = samples.iter().collect();
        let bounds = self.window.bounds(idx);
        let mut e2e = EndToEnd::default();
        end_to_end_window(self.doc, self.catalog, &refs, bounds, &mut e2e);
        let mut events = Vec::new();
        for (i, (slo, scope)) in self.doc.all_slos().enumerate() {
            let target = slo.target.as_str();
            let (evs, mut evaluated) = check_slo(slo, scope, target, &refs, bounds, self.catalog, true);
            if scope == Scope::Application && !e2e.observed.is_empty() {
                evaluated |= slo.constraints.iter().any(|c| {
                    self.catalog.lookup_in(&c.metric, Scope::Application).is_some_and(|e| e.term == END_TO_END)
                });
            }
            let summary = &mut self.summaries[i];
            summary.windows_evaluated += usize::from(evaluated);
            summary.violations += evs.len() + e2e.events.iter().filter(|e| e.slo_id == slo.id).count();
            events.extend(evs);
        }
        self.warnings.extend(e2e.warnings);
        self.end_to_end.extend(e2e.observed);
        events.extend(e2e.events);
        self.emitted.extend(events.iter().cloned());
        events
    }

    /// Evaluates the last open window. Returns that window's violations and
    /// a report holding every violation seen since construction.
    pub fn finish(mut self) -> (Vec<ViolationEvent>, MonitorReport) {
        let events = self.close();
        if self.stats.accepted == 0 {
            self.warnings.push(CoverageWarning {
                window: None,
                subject: self.doc.header.id.clone(),
                message: "no usable telemetry records".into(),
            });
        }
        for s in &self.summaries {
            if s.windows_evaluated == 0 && self.stats.accepted > 0 {
                self.warnings.push(CoverageWarning {
                    window: None,
                    subject: s.slo_id.clone(),
                    message: "no samples for any constraint of this SLO".into(),
                });
            }
        }
        let report = MonitorReport {
            events: self.emitted,
            warnings: self.warnings,
            stats: self.stats,
            summaries: self.summaries,
            end_to_end: self.end_to_end,
        };
        (events, report)
    }
}

/// Batch evaluation: sorts the records, then streams them.
pub fn monitor_records(
    doc: &SlaDocument,
    catalog: &Catalog,
    window: Window,
    records: &[TelemetryRecord],
) -> MonitorReport {
    let mut m = StreamingMonitor::new(doc, catalog, window);
    for r in sorted(records) {
        m.push(r);
    }
    m.finish().1
}

pub fn render_summary(report: &MonitorReport) -> String {
    let mut rows = vec![["slo".to_string(), "target".into(), "windows".into(), "violations".into()]];
    for s in &report.summaries {
        rows.push([s.slo_id.clone(), s.target.clone(), s.windows_evaluated.to_string(), s.violations.to_string()]);
    }
    let widths: Vec<usize> = (0..4).map(|i| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    let st = report.stats;
    out.push_str(&format!(
        "records: {} accepted, {} unknown, {} mistyped, {} late\n",
        st.accepted, st.unknown, st.mistyped, st.late
    ));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TelemetryError {
    /// The line does not have the `ts<TAB>target<TAB>metric<TAB>value` shape.
    #[error("line {line}: {message}")]
    Framing { line: usize, message: String },
    /// Well-framed line whose value cannot be read.
    #[error("line {line}: {message}")]
    Value { line: usize, message: String },
    #[error("read error: {0}")]
    Io(String),
}

/// Parses one telemetry line. Blank lines and `#` comments give `None`.
pub fn parse_telemetry_line(line: &str, line_no: usize) -> Result<Option<TelemetryRecord>, TelemetryError> {
    let line = line.strip_suffix('\r').unwrap_or(line);
    if line.trim().is_empty() || line.starts_with('#') {
        return Ok(None);
    }
    let framing = |message: String| TelemetryError::Framing { line: line_no, message };
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 4 {
        return Err(framing(format!("expected 4 tab-separated fields, found {}", fields.len())));
    }
    let timestamp: u64 = fields[0].trim().parse().map_err(|_| framing(format!("invalid timestamp `{}`", fields[0])))?;
    let target = fields[1].trim();
    let metric = fields[2].trim();
    if target.is_empty() || metric.is_empty() {
        return Err(framing("empty target or metric".into()));
    }
    let value_error = |message: String| TelemetryError::Value { line: line_no, message };
    let raw = fields[3].trim();
    let (text, unit) = match raw.split_once(' ') {
        Some((v, u)) => (v, Some(u.trim())),
        None => (raw, None),
    };
    let value = match (text, unit) {
        ("true", None) => TypedValue::Boolean(true),
        ("false", None) => TypedValue::Boolean(false),
        _ => match parse_decimal(text) {
            Some(n) => {
                let unit = match unit {
                    Some(u) => Some(Unit::parse(u).ok_or_else(|| value_error(format!("unknown unit `{u}`")))?),
                    None => None,
                };
                TypedValue::Numeric { magnitude: n, unit }
            }
            None if unit.is_none() && !text.is_empty() => TypedValue::Text(text.to_string()),
            None => return Err(value_error(format!("invalid value `{raw}`"))),
        },
    };
    Ok(Some(TelemetryRecord::new(timestamp, target, metric, value)))
}

/// Reads records line by line, handing each to `sink`. Value errors are
/// counted and skipped; the first framing error stops the read.
pub fn read_telemetry(reader: impl BufRead, mut sink: impl FnMut(TelemetryRecord)) -> Result<usize, TelemetryError> {
    let mut value_errors = 0;
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| TelemetryError::Io(e.to_string()))?;
        match parse_telemetry_line(&line, i + 1) {
            Ok(Some(r)) => sink(r),
            Ok(None) => {}
            Err(TelemetryError::Value { .. }) => value_errors += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(value_errors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Comparator, Literal};
    use crate::parser::parse;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn rec(ts: u64, target: &str, metric: &str, v: &str, unit: Option<&str>) -> TelemetryRecord {
        TelemetryRecord::new(ts, target, metric, TypedValue::number(v, unit))
    }

    fn slo(target: &str, metric: &str, cmp: Comparator, v: i64, unit: Option<&str>) -> Slo {
        let c = MetricConstraint::new(metric, cmp, Literal::Number(int(v)), unit);
        Slo::new("s", SloTarget::Entity(target.into()), vec![c])
    }

    #[test]
    fn latency_max_in_window() {
        let cat = Catalog::builtin();
        let s = slo("ing", "latency", Comparator::Le, 5, Some("time_unit"));
        let recs: Vec<_> =
            ["3", "4", "6"].iter().enumerate().map(|(i, v)| rec(i as u64, "ing", "latency", v, None)).collect();
        let scope = Scope::Concept(crate::vocabulary::Concept::Ingestion);
        let events = evaluate_window(&s, scope, &recs, Window::default(), &cat);
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].observed, Scalar::Number(int(6)));
        assert_eq!((events[0].window_start, events[0].window_end), (0, 60));
        assert!(evaluate_window(&s, scope, &[], Window::default(), &cat).is_empty());
    }

    #[test]
    fn cpu_mean_in_window() {
        let cat = Catalog::builtin();
        let s = slo("vm", "cpu_utilization", Comparator::Gt, 80, Some("percent"));
        let recs =
            [rec(1, "vm", "cpu_utilization", "85", Some("percent")), rec(2, "vm", "cpu_utilization", "90", None)];
        let scope = Scope::Concept(crate::vocabulary::Concept::CloudResource);
        assert!(evaluate_window(&s, scope, &recs, Window::default(), &cat).is_empty());
        assert_eq!(
            aggregate(Aggregator::Mean, &[Scalar::Number(int(85)), Scalar::Number(int(90))]),
            Some(Scalar::Number(r(175, 2)))
        );
    }

    #[test]
    fn ratios() {
        let mut samples = vec![true; 9990];
        samples.extend(vec![false; 10]);
        assert_eq!(availability_ratio(&samples).unwrap(), r(999, 10));
        assert_eq!(availability_ratio(&[true, true]).unwrap(), int(100));
        assert_eq!(availability_ratio(&[]), Err(MonitorError::EmptyWindow));
        assert_eq!(data_completeness(15, 30).unwrap(), int(50));
        assert_eq!(data_completeness(0, 30).unwrap(), int(0));
        assert!(data_completeness(31, 30).is_err());
        assert!(data_completeness(0, 0).is_err());
        assert_eq!(miss_ratio(2, 10).unwrap(), int(20));
        assert_eq!(miss_ratio(10, 10).unwrap(), int(100));
        assert!(miss_ratio(1, 0).is_err());
    }

    #[test]
    fn availability_state_feeds_availability() {
        let cat = Catalog::builtin();
        let s = slo("vm", "availability", Comparator::Ge, 99, Some("percent"));
        let mut recs: Vec<_> = (0..98)
            .map(|t| TelemetryRecord::new(t % 60, "vm", AVAILABILITY_STATE, TypedValue::Boolean(true)))
            .collect();
        recs.push(TelemetryRecord::new(5, "vm", AVAILABILITY_STATE, TypedValue::Boolean(false)));
        recs.push(TelemetryRecord::new(6, "vm", AVAILABILITY_STATE, TypedValue::Boolean(false)));
        let scope = Scope::Concept(crate::vocabulary::Concept::CloudResource);
        let events = evaluate_window(&s, scope, &recs, Window::default(), &cat);
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].observed, Scalar::Number(int(98)));
    }

    const PIPE: &str = r#"
sla "Pipe" { id = pipe application = smart_city starts = 2025-01-01 ends = 2026-01-01 }
party a { name = "A" role = consumer }
party b { name = "B" role = provider }
slo e2e on app { end_to_end_response_time <= 5 time_unit }
activity cap : capture_eoi requires sens
activity ing : ingest_data requires inge
activity ana : small_scale_rt_analysis requires strm
service sens : sensing on dev { sampling_rate = 1 Hz }
service inge : ingestion on dev { replication_factor = 1 }
service strm : stream_processing on dev { parallelism = 1 }
resource dev : edge_resource {}
"#;

    fn pipe_records(window: u64, lat: [&str; 3]) -> Vec<TelemetryRecord> {
        let t = window * 60 + 1;
        vec![
            rec(t, "sens", "data_freshness", lat[0], None),
            rec(t, "inge", "latency", lat[1], None),
            rec(t + 1, "inge", "latency", "0", None),
            rec(t, "strm", "latency", lat[2], None),
        ]
    }

    #[test]
    fn end_to_end_sums_activity_maxima() {
        let doc = parse(PIPE).unwrap();
        let cat = Catalog::builtin();
        let mut recs = pipe_records(0, ["1", "2", "1"]);
        recs.extend(pipe_records(1, ["2", "3", "2"]));
        let out = end_to_end_response(&doc, &recs, Window::default(), &cat);
        assert_eq!(out.observed, vec![(0, int(4)), (60, int(7))]);
        assert_eq!(out.events.len(), 1);
        assert_eq!(out.events[0].window_start, 60);
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn missing_activity_counts_zero_with_warning() {
        let doc = parse(PIPE).unwrap();
        let cat = Catalog::builtin();
        let recs = [rec(3, "inge", "latency", "4", None)];
        let out = end_to_end_response(&doc, &recs, Window::default(), &cat);
        assert_eq!(out.observed, vec![(0, int(4))]);
        assert_eq!(out.warnings.len(), 2);
        assert!(out.events.is_empty());
    }

    #[test]
    fn streaming_closes_windows_and_counts_skips() {
        let doc = parse(PIPE).unwrap();
        let cat = Catalog::builtin();
        let mut m = StreamingMonitor::new(&doc, &cat, Window::default());
        assert!(m.push(&rec(1, "inge", "latency", "9", None)).is_empty());
        assert!(m.push(&rec(2, "ghost", "latency", "1", None)).is_empty());
        assert!(m.push(&rec(3, "inge", "warp", "1", None)).is_empty());
        assert!(m.push(&rec(4, "inge", "latency", "1", Some("GB"))).is_empty());
        let closed = m.push(&rec(60, "inge", "latency", "1", None));
        assert_eq!(closed.len(), 1);
        assert_eq!(closed[0].slo_id, "e2e");
        m.push(&rec(5, "inge", "latency", "1", None));
        let (rest, report) = m.finish();
        assert!(rest.is_empty());
        assert_eq!(report.events, closed);
        assert_eq!(report.stats, RecordStats { accepted: 2, unknown: 2, mistyped: 1, late: 1 });
        assert_eq!(report.summaries[0].violations, 1);
    }

    #[test]
    fn batch_is_order_invariant() {
        let doc = parse(PIPE).unwrap();
        let cat = Catalog::builtin();
        let mut recs = pipe_records(0, ["1", "2", "1"]);
        recs.extend(pipe_records(1, ["2", "3", "2"]));
        let a = monitor_records(&doc, &cat, Window::default(), &recs);
        recs.reverse();
        let b = monitor_records(&doc, &cat, Window::default(), &recs);
        assert_eq!(a, b);
        assert_eq!(a.events.len(), 1);
    }

    #[test]
    fn empty_input_warns() {
        let doc = parse(PIPE).unwrap();
        let report = monitor_records(&doc, &Catalog::builtin(), Window::default(), &[]);
        assert!(report.events.is_empty());
        assert_eq!(report.warnings.len(), 1);
        assert!(render_summary(&report).contains("e2e"));
    }

    #[test]
    fn telemetry_lines() {
        let r = parse_telemetry_line("12\tinge\tlatency\t7 time_unit", 1).unwrap().unwrap();
        assert_eq!(r, rec(12, "inge", "latency", "7", Some("time_unit")));
        let b = parse_telemetry_line("0\tvm\tavailability_state\ttrue", 1).unwrap().unwrap();
        assert_eq!(b.value, TypedValue::Boolean(true));
        assert_eq!(parse_telemetry_line("# note", 1).unwrap(), None);
        assert!(matches!(parse_telemetry_line("12 inge latency 7", 3), Err(TelemetryError::Framing { line: 3, .. })));
        assert!(matches!(parse_telemetry_line("-1\ta\tb\t1", 1), Err(TelemetryError::Framing { .. })));
        assert!(matches!(parse_telemetry_line("1\ta\tb\t1 parsecs", 1), Err(TelemetryError::Value { .. })));
        let text = "1\ta\tb\t1 parsecs\n2\tinge\tlatency\t3\n";
        let mut got = Vec::new();
        assert_eq!(read_telemetry(text.as_bytes(), |r| got.push(r)).unwrap(), 1);
        assert_eq!(got.len(), 1);
    }

    #[test]
    fn window_bounds() {
        assert_eq!(Window::new(0), Err(MonitorError::ZeroWidth));
        let w = Window::new(10).unwrap();
        assert_eq!(w.index(19), 1);
        assert_eq!(w.bounds(1), (10, 20));
    }
}
