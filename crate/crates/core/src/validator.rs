//! Semantic checks over a parsed document.
//!
//! | code | severity | rule |
//! |------|----------|------|
//! | V001 | error | start date not before end date |
//! | V002 | error | no application-level SLO |
//! | V003 | error | fewer than two parties, or no consumer, or no provider |
//! | V004 | error | activity requires an unknown service |
//! | V005 | error | service deployed on an unknown id or a non-resource |
//! | V006 | error | SLO metric not in the vocabulary of its target |
//! | V007 | error | constraint unit unknown or not convertible |
//! | V008 | error | comparator or value type does not fit the metric |
//! | V009 | warning | configuration term unknown, or its value does not fit |
//! | V010 | warning | service with neither SLOs nor configuration |
//! | V011 | error | activity kind incompatible with a required service's kind |
//! | V012 | warning | resource with no service deployed on it |

use std::collections::HashSet;
use std::fmt;

use serde_json::{json, Value};

use crate::constraints::{canonical_scalar, resolve_constraint, ConstraintError};
use crate::model::{ActivityKind, ConfigParam, PartyRole, ServiceKind, SlaDocument, Slo};
use crate::span::{SourceSpan, Span};
use crate::vocabulary::{Catalog, Scope};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: &'static str,
    pub severity: Severity,
    pub message: String,
    pub span: Option<SourceSpan>,
    /// Id of the offending entity.
    pub subject: String,
}

impl Diagnostic {
    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: severity[code]: message`
    pub fn render(&self, file: &str) -> String {
        match self.span {
            Some(s) => format!(
                "{file}:{}:{}: {}[{}]: {}",
                s.start.line, s.start.column, self.severity, self.code, self.message
            ),
            None => format!("{file}: {}[{}]: {}", self.severity, self.code, self.message),
        }
    }

    pub fn to_json(&self) -> Value {
        let span = self.span.map(|s| {
            json!({
                "start": {"line": s.start.line, "column": s.start.column},
                "end": {"line": s.end.line, "column": s.end.column},
            })
        });
        json!({
            "code": self.code,
            "severity": self.severity.as_str(),
            "message": self.message,
            "subject": self.subject,
            "span": span,
        })
    }
}

pub fn diagnostics_to_json(diags: &[Diagnostic]) -> Value {
    Value::Array(diags.iter().map(Diagnostic::to_json).collect())
}

/// Service kinds that can carry out an activity of the given kind.
pub fn compatibility(kind: ActivityKind) -> &'static [ServiceKind] {
    use ActivityKind as A;
    use ServiceKind as S;
    match kind {
        A::CaptureEoi => &[S::Sensing],
        A::ExamineEoiOnFly | A::FilterEoi | A::AggregateEoi => &[S::Sensing, S::StreamProcessing],
        A::IngestData => &[S::Ingestion],
        A::SmallScaleRtAnalysis | A::LargeScaleRtAnalysis => &[S::StreamProcessing, S::MachineLearning],
        A::LargeScaleHistAnalysis => &[S::BatchProcessing, S::MachineLearning],
        A::StoreStructured | A::StoreUnstructured => &[S::Database],
    }
}

struct Collector {
    out: Vec<Diagnostic>,
}

impl Collector {
    fn push(&mut self, code: &'static str, severity: Severity, span: Span, subject: &str, message: String) {
        self.out.push(Diagnostic { code, severity, message, span: span.get(), subject: subject.to_string() });
    }

    fn error(&mut self, code: &'static str, span: Span, subject: &str, message: String) {
        self.push(code, Severity::Error, span, subject, message);
    }

    fn warning(&mut self, code: &'static str, span: Span, subject: &str, message: String) {
        self.push(code, Severity::Warning, span, subject, message);
    }
}

fn or(span: Span, fallback: Span) -> Span {
    if span.get().is_some() {
        span
    } else {
        fallback
    }
}

/// All diagnostics for `doc`, ordered by source position then code.
pub fn validate(doc: &SlaDocument, catalog: &Catalog) -> Vec<Diagnostic> {
    let mut c = Collector { out: Vec::new() };
    let h = &doc.header;

    if h.start_date >= h.end_date {
        c.error("V001", h.span, &h.id, format!("start date {} is not before end date {}", h.start_date, h.end_date));
    }
    if doc.app_slos.is_empty() {
        c.error("V002", h.span, &h.id, "agreement has no application-level SLO".into());
    }
    let has = |role| doc.parties.iter().any(|p| p.role == role);
    if doc.parties.len() < 2 {
        c.error("V003", h.span, &h.id, format!("agreement needs at least two parties, found {}", doc.parties.len()));
    } else if !has(PartyRole::Consumer) || !has(PartyRole::Provider) {
        c.error("V003", h.span, &h.id, "agreement needs a consumer party and a provider party".into());
    }

    for a in &doc.activities {
        if a.required_services.is_empty() {
            c.error("V004", a.span, &a.id, format!("activity `{}` requires no service", a.id));
        }
        for sid in &a.required_services {
            match doc.service(sid) {
                None => c.error("V004", a.span, &a.id, format!("activity `{}` requires unknown service `{sid}`", a.id)),
                Some(svc) => {
                    let allowed = compatibility(a.kind);
                    if !allowed.contains(&svc.kind) {
                        let names: Vec<_> = allowed.iter().map(|k| k.as_str()).collect();
                        c.error(
                            "V011",
                            a.span,
                            &a.id,
                            format!(
                                "activity `{}` ({}) cannot use service `{sid}` of kind {}; expected {}",
                                a.id,
                                a.kind,
                                svc.kind,
                                names.join(" or ")
                            ),
                        );
                    }
                }
            }
        }
    }

    let mut used_resources = HashSet::new();
    for s in &doc.services {
        if doc.resource(&s.deployed_on).is_some() {
            used_resources.insert(s.deployed_on.as_str());
        } else {
            let what = if doc.resolve(&s.deployed_on).is_some() { "is not a resource" } else { "is not declared" };
            c.error(
                "V005",
                s.span,
                &s.id,
                format!("service `{}` is deployed on `{}`, which {what}", s.id, s.deployed_on),
            );
        }
        if s.slos.is_empty() && s.config.is_empty() {
            c.warning("V010", s.span, &s.id, format!("service `{}` has neither SLOs nor configuration", s.id));
        }
        let scope = Scope::Concept(s.kind.concept());
        for p in &s.config {
            check_config(&mut c, catalog, p, scope, &s.id, s.span);
        }
    }

    for r in &doc.resources {
        if !used_resources.contains(r.id.as_str()) {
            c.warning("V012", r.span, &r.id, format!("no service is deployed on resource `{}`", r.id));
        }
        let scope = Scope::Concept(r.kind.concept());
        for p in &r.config {
            check_config(&mut c, catalog, p, scope, &r.id, r.span);
        }
    }

    for (slo, scope) in doc.all_slos() {
        check_slo(&mut c, catalog, slo, scope);
    }

    let mut out = c.out;
    out.sort_by(|a, b| {
        let key = |d: &Diagnostic| (d.span.is_none(), d.span.map(|s| s.start));
        key(a).cmp(&key(b)).then_with(|| a.code.cmp(b.code))
    });
    out
}

fn check_slo(c: &mut Collector, catalog: &Catalog, slo: &Slo, scope: Scope) {
    if slo.constraints.is_empty() {
        c.error("V006", slo.span, &slo.id, format!("SLO `{}` has no constraints", slo.id));
    }
    for con in &slo.constraints {
        let span = or(con.span, slo.span);
        let Some(entry) = catalog.lookup_in(&con.metric, scope) else {
            let known: Vec<_> = catalog.terms_in(scope, None).iter().map(|e| e.term.as_str()).collect();
            let hint = if known.len() <= 12 { format!(" (known: {})", known.join(", ")) } else { String::new() };
            c.error("V006", span, &slo.id, format!("`{}` is not a known metric for {scope}{hint}", con.metric));
            continue;
        };
        if let Err(e) = resolve_constraint(con, entry) {
            let code = if e.is_unit_error() { "V007" } else { "V008" };
            c.error(code, span, &slo.id, format!("`{con}`: {e}"));
        }
    }
}

fn check_config(c: &mut Collector, catalog: &Catalog, p: &ConfigParam, scope: Scope, owner: &str, owner_span: Span) {
    let span = or(p.span, owner_span);
    let Some(entry) = catalog.lookup_in(&p.term, scope) else {
        c.warning("V009", span, owner, format!("`{}` is not a known configuration term for {scope}", p.term));
        return;
    };
    let problem = match crate::model::typed_value(&p.value, p.unit.as_deref()) {
        Err(e) => Some(ConstraintError::UnknownUnit(e.0)),
        Ok(_) if !entry.is_numeric() && p.unit.is_some() => Some(ConstraintError::UnitMismatch {
            found: p.unit.clone().unwrap_or_default(),
            expected: entry.canonical_unit.name().to_string(),
        }),
        Ok(v) => canonical_scalar(&v, entry).err(),
    };
    if let Some(e) = problem {
        c.warning("V009", span, owner, format!("configuration `{}`: {e}", p.term));
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
