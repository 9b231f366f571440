//! JSON interchange form. Same content as the DSL, minus source spans.

use std::collections::HashSet;
use std::str::FromStr;

use chrono::NaiveDate;
use serde_json::{json, Map, Number, Value};
use thiserror::Error;

use crate::model::{
    ActivityKind, ApplicationType, Comparator, ConfigParam, Header, InfraResourceSpec, Literal, MetricConstraint,
    Party, PartyRole, ResourceKind, ServiceKind, ServiceSpec, SlaDocument, Slo, SloTarget, WorkflowActivity,
};
use crate::span::Span;
use crate::value::{format_decimal, format_rounded, parse_decimal};

use super::is_keyword;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterchangeError {
    #[error("invalid JSON at {line}:{column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("schema violation at `{pointer}`: {message}")]
    SchemaViolation { pointer: String, message: String },
}

impl InterchangeError {
    pub fn pointer(&self) -> Option<&str> {
        match self {
            InterchangeError::SchemaViolation { pointer, .. } => Some(pointer),
            InterchangeError::Json { .. } => None,
        }
    }
}

fn violation(pointer: &str, message: impl Into<String>) -> InterchangeError {
    InterchangeError::SchemaViolation { pointer: pointer.to_string(), message: message.into() }
}

fn literal_json(lit: &Literal) -> Value {
    match lit {
        Literal::Number(n) => {
            let text = format_decimal(n).unwrap_or_else(|| format_rounded(n, 12));
            Value::Number(Number::from_str(&text).expect("decimal text is a JSON number"))
        }
        Literal::Bool(b) => Value::Bool(*b),
        Literal::Str(s) => Value::String(s.clone()),
    }
}

fn with_unit(mut obj: Map<String, Value>, unit: &Option<String>) -> Value {
    if let Some(u) = unit {
        obj.insert("unit".into(), Value::String(u.clone()));
    }
    Value::Object(obj)
}

fn constraint_json(c: &MetricConstraint) -> Value {
    let mut obj = Map::new();
    obj.insert("metric".into(), json!(c.metric));
    obj.insert("comparator".into(), json!(c.comparator.as_str()));
    obj.insert("value".into(), literal_json(&c.value));
    with_unit(obj, &c.unit)
}

fn config_json(p: &ConfigParam) -> Value {
    let mut obj = Map::new();
    obj.insert("term".into(), json!(p.term));
    obj.insert("value".into(), literal_json(&p.value));
    with_unit(obj, &p.unit)
}

fn slo_json(s: &Slo) -> Value {
    json!({
        "id": s.id,
        "target": s.target.as_str(),
        "constraints": s.constraints.iter().map(constraint_json).collect::<Vec<_>>(),
    })
}

pub fn to_interchange_value(doc: &SlaDocument) -> Value {
    let h = &doc.header;
    json!({
        "title": h.title,
        "id": h.id,
        "application_type": h.application_type.as_str(),
        "start_date": h.start_date.format("%Y-%m-%d").to_string(),
        "end_date": h.end_date.format("%Y-%m-%d").to_string(),
        "parties": doc.parties.iter().map(|p| json!({
            "id": p.id, "name": p.name, "role": p.role.as_str(),
        })).collect::<Vec<_>>(),
        "app_slos": doc.app_slos.iter().map(slo_json).collect::<Vec<_>>(),
        "activities": doc.activities.iter().map(|a| json!({
            "id": a.id, "kind": a.kind.as_str(), "required_services": a.required_services,
        })).collect::<Vec<_>>(),
        "services": doc.services.iter().map(|s| json!({
            "id": s.id,
            "kind": s.kind.as_str(),
            "deployed_on": s.deployed_on,
            "slos": s.slos.iter().map(slo_json).collect::<Vec<_>>(),
            "config": s.config.iter().map(config_json).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "resources": doc.resources.iter().map(|r| json!({
            "id": r.id,
            "kind": r.kind.as_str(),
            "slos": r.slos.iter().map(slo_json).collect::<Vec<_>>(),
            "config": r.config.iter().map(config_json).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

/// Pretty-printed interchange JSON with a trailing newline.
pub fn to_interchange(doc: &SlaDocument) -> String {
    let mut s = serde_json::to_string_pretty(&to_interchange_value(doc)).expect("serializable");
    s.push('\n');
    s
}

pub fn from_interchange(text: &str) -> Result<SlaDocument, InterchangeError> {
    let value: Value = serde_json::from_str(text).map_err(|e| InterchangeError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Reader { ids: HashSet::new() }.document(&value)
}

struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

impl<'a> Obj<'a> {
    fn new(v: &'a Value, path: &str, allowed: &[&str]) -> Result<Self, InterchangeError> {
        let map = v.as_object().ok_or_else(|| violation(path, "expected an object"))?;
        if let Some(extra) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(violation(&format!("{path}/{extra}"), "unexpected field"));
        }
        Ok(Obj { map, path: path.to_string() })
    }

    fn ptr(&self, key: &str) -> String {
        format!("{}/{key}", self.path)
    }

    fn get(&self, key: &str) -> Result<&'a Value, InterchangeError> {
        self.map.get(key).ok_or_else(|| violation(&self.ptr(key), "missing required field"))
    }

    fn str(&self, key: &str) -> Result<&'a str, InterchangeError> {
        self.get(key)?.as_str().ok_or_else(|| violation(&self.ptr(key), "expected a string"))
    }

    fn opt_str(&self, key: &str) -> Result<Option<&'a str>, InterchangeError> {
        match self.map.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(_) => Err(violation(&self.ptr(key), "expected a string")),
        }
    }

    fn array(&self, key: &str) -> Result<&'a Vec<Value>, InterchangeError> {
        self.get(key)?.as_array().ok_or_else(|| violation(&self.ptr(key), "expected an array"))
    }

    fn ident(&self, key: &str) -> Result<String, InterchangeError> {
        ident_at(self.str(key)?, &self.ptr(key))
    }

    fn parsed<T: FromStr>(&self, key: &str, what: &str) -> Result<T, InterchangeError> {
        let s = self.str(key)?;
        s.parse().map_err(|_| violation(&self.ptr(key), format!("unknown {what} `{s}`")))
    }

    fn date(&self, key: &str) -> Result<NaiveDate, InterchangeError> {
        let s = self.str(key)?;
        let ok = s.len() == 10 && s.as_bytes()[4] == b'-' && s.as_bytes()[7] == b'-';
        ok.then(|| NaiveDate::parse_from_str(s, "%Y-%m-%d").ok())
            .flatten()
            .ok_or_else(|| violation(&self.ptr(key), format!("invalid date `{s}`, expected YYYY-MM-DD")))
    }

    fn literal(&self, key: &str) -> Result<Literal, InterchangeError> {
        match self.get(key)? {
            Value::Bool(b) => Ok(Literal::Bool(*b)),
            Value::String(s) => Ok(Literal::Str(s.clone())),
            Value::Number(n) => parse_decimal(&n.to_string())
                .map(Literal::Number)
                .ok_or_else(|| violation(&self.ptr(key), "number out of range")),
            _ => Err(violation(&self.ptr(key), "expected a number, boolean or string")),
        }
    }

    fn unit(&self) -> Result<Option<String>, InterchangeError> {
        let Some(u) = self.opt_str("unit")? else { return Ok(None) };
        let ok = u.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
            && u.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            && !is_keyword(u);
        if !ok {
            return Err(violation(&self.ptr("unit"), format!("`{u}` is not a valid unit name")));
        }
        Ok(Some(u.to_string()))
    }
}

fn ident_at(s: &str, pointer: &str) -> Result<String, InterchangeError> {
    if !crate::is_identifier(s) || is_keyword(s) {
        return Err(violation(pointer, format!("`{s}` is not a valid identifier")));
    }
    Ok(s.to_string())
}

struct Reader {
    ids: HashSet<String>,
}

impl Reader {
    fn declare(&mut self, obj: &Obj<'_>) -> Result<String, InterchangeError> {
        let id = obj.ident("id")?;
        if !self.ids.insert(id.clone()) {
            return Err(violation(&obj.ptr("id"), format!("duplicate identifier `{id}`")));
        }
        Ok(id)
    }

    fn document(&mut self, v: &Value) -> Result<SlaDocument, InterchangeError> {
        let top = Obj::new(
            v,
            "",
            &[
                "title",
                "id",
                "application_type",
                "start_date",
                "end_date",
                "parties",
                "app_slos",
                "activities",
                "services",
                "resources",
            ],
        )?;
        let header = Header {
            title: top.str("title")?.to_string(),
            id: self.declare(&top)?,
            application_type: ApplicationType::parse(&top.ident("application_type")?),
            start_date: top.date("start_date")?,
            end_date: top.date("end_date")?,
            span: Span::NONE,
        };

        let mut parties = Vec::new();
        for (i, p) in top.array("parties")?.iter().enumerate() {
            let o = Obj::new(p, &format!("/parties/{i}"), &["id", "name", "role"])?;
            parties.push(Party {
                id: self.declare(&o)?,
                name: o.str("name")?.to_string(),
                role: o.parsed::<PartyRole>("role", "party role")?,
                span: Span::NONE,
            });
        }

        let mut app_slos = Vec::new();
        for (i, s) in top.array("app_slos")?.iter().enumerate() {
            app_slos.push(self.slo(s, &format!("/app_slos/{i}"), &SloTarget::Application)?);
        }

        let mut activities = Vec::new();
        for (i, a) in top.array("activities")?.iter().enumerate() {
            let o = Obj::new(a, &format!("/activities/{i}"), &["id", "kind", "required_services"])?;
            let id = self.declare(&o)?;
            let kind = o.parsed::<ActivityKind>("kind", "activity kind")?;
            let list = o.array("required_services")?;
            if list.is_empty() {
                return Err(violation(&o.ptr("required_services"), "at least one service is required"));
            }
            let required_services = list
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    let ptr = format!("{}/{j}", o.ptr("required_services"));
                    ident_at(s.as_str().ok_or_else(|| violation(&ptr, "expected a string"))?, &ptr)
                })
                .collect::<Result<_, _>>()?;
            activities.push(WorkflowActivity { id, kind, required_services, span: Span::NONE });
        }

        let mut services = Vec::new();
        for (i, s) in top.array("services")?.iter().enumerate() {
            let o = Obj::new(s, &format!("/services/{i}"), &["id", "kind", "deployed_on", "slos", "config"])?;
            let id = self.declare(&o)?;
            let target = SloTarget::Entity(id.clone());
            services.push(ServiceSpec {
                kind: o.parsed::<ServiceKind>("kind", "service kind")?,
                deployed_on: o.ident("deployed_on")?,
                slos: self.slos(&o, &target)?,
                config: config(&o)?,
                id,
                span: Span::NONE,
            });
        }

        let mut resources = Vec::new();
        for (i, r) in top.array("resources")?.iter().enumerate() {
            let o = Obj::new(r, &format!("/resources/{i}"), &["id", "kind", "slos", "config"])?;
            let id = self.declare(&o)?;
            let target = SloTarget::Entity(id.clone());
            resources.push(InfraResourceSpec {
                kind: o.parsed::<ResourceKind>("kind", "resource kind")?,
                slos: self.slos(&o, &target)?,
                config: config(&o)?,
                id,
                span: Span::NONE,
            });
        }

        Ok(SlaDocument { header, parties, app_slos, activities, services, resources })
    }

    fn slos(&mut self, owner: &Obj<'_>, target: &SloTarget) -> Result<Vec<Slo>, InterchangeError> {
        let mut out = Vec::new();
        for (i, s) in owner.array("slos")?.iter().enumerate() {
            out.push(self.slo(s, &format!("{}/{i}", owner.ptr("slos")), target)?);
        }
        Ok(out)
    }

    /// `target` is implied by where the SLO sits; an explicit one must agree.
    fn slo(&mut self, v: &Value, path: &str, target: &SloTarget) -> Result<Slo, InterchangeError> {
        let o = Obj::new(v, path, &["id", "target", "constraints"])?;
        let id = self.declare(&o)?;
        if let Some(t) = o.opt_str("target")? {
            if t != target.as_str() {
                return Err(violation(&o.ptr("target"), format!("expected `{}`, found `{t}`", target.as_str())));
            }
        }
        let list = o.array("constraints")?;
        if list.is_empty() {
            return Err(violation(&o.ptr("constraints"), "at least one constraint is required"));
        }
        let mut constraints = Vec::new();
        for (i, c) in list.iter().enumerate() {
            let c = Obj::new(c, &format!("{}/{i}", o.ptr("constraints")), &["metric", "comparator", "value", "unit"])?;
            let cmp = c.str("comparator")?;
            constraints.push(MetricConstraint {
                metric: c.ident("metric")?,
                comparator: Comparator::parse(cmp)
                    .ok_or_else(|| violation(&c.ptr("comparator"), format!("unknown comparator `{cmp}`")))?,
                value: c.literal("value")?,
                unit: c.unit()?,
                span: Span::NONE,
            });
        }
        Ok(Slo { id, target: target.clone(), constraints, span: Span::NONE })
    }
}

fn config(owner: &Obj<'_>) -> Result<Vec<ConfigParam>, InterchangeError> {
    let mut out = Vec::new();
    for (i, p) in owner.array("config")?.iter().enumerate() {
        let p = Obj::new(p, &format!("{}/{i}", owner.ptr("config")), &["term", "value", "unit"])?;
        out.push(ConfigParam { term: p.ident("term")?, value: p.literal("value")?, unit: p.unit()?, span: Span::NONE });
    }
    Ok(out)
}
