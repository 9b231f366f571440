#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::path::PathBuf;

use chrono::NaiveDate;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::sample::select;

use iot_sla::model::{
    build_document, ActivityKind, ApplicationType, Comparator, ConfigParam, DocumentParts, EntityRef, Header,
    InfraResourceSpec, Literal, MetricConstraint, Party, PartyRole, ResourceKind, ServiceKind, SlaDocument, Slo,
    SloTarget, WorkflowActivity,
};
use iot_sla::parser::is_keyword;
use iot_sla::value::parse_decimal;
use iot_sla::vocabulary::{Scope, ValueType};
use iot_sla::Catalog;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn dec(s: &str) -> BigRational {
    parse_decimal(s).unwrap_or_else(|| panic!("bad decimal {s}"))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

// ---- syntactic document generator ----

fn ident(prefix: &'static str) -> impl Strategy<Value = String> {
    "[a-z0-9_]{0,8}".prop_map(move |s| format!("{prefix}{s}"))
}

fn word() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,10}".prop_filter("keyword", |s| !is_keyword(s))
}

fn unit_word() -> impl Strategy<Value = String> {
    prop_oneof![
        select(vec!["Hz", "ms", "s", "percent", "ratio", "MBps", "GB", "count", "time_unit", "KiB"])
            .prop_map(String::from),
        "[A-Za-z_][A-Za-z0-9_]{0,6}".prop_filter("keyword", |s| !is_keyword(s)),
    ]
}

fn text() -> impl Strategy<Value = String> {
    prop_oneof![
        "[ -~]{0,14}",
        "(.|\n|\t|\r){0,10}",
        select(vec!["", "\"", "\\", "a\"b\\c", "héllo wörld", "tab\there"]).prop_map(String::from),
    ]
}

fn decimal() -> impl Strategy<Value = BigRational> {
    (any::<i64>(), 0u32..8)
        .prop_map(|(m, scale)| BigRational::new(BigInt::from(m), num_traits::pow(BigInt::from(10), scale as usize)))
}

fn literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        4 => decimal().prop_map(Literal::Number),
        1 => any::<bool>().prop_map(Literal::Bool),
        1 => text().prop_map(Literal::Str),
    ]
}

fn comparator() -> impl Strategy<Value = Comparator> {
    select(Comparator::ALL.to_vec())
}

fn date() -> impl Strategy<Value = NaiveDate> {
    (0i64..40_000).prop_map(|d| NaiveDate::from_ymd_opt(1970, 1, 1).unwrap() + chrono::Duration::days(d))
}

fn constraint() -> impl Strategy<Value = MetricConstraint> {
    (word(), comparator(), literal(), proptest::option::of(unit_word()))
        .prop_map(|(m, c, v, u)| MetricConstraint::new(m, c, v, u.as_deref()))
}

fn config() -> impl Strategy<Value = ConfigParam> {
    (word(), literal(), proptest::option::of(unit_word())).prop_map(|(t, v, u)| ConfigParam::new(t, v, u.as_deref()))
}

fn constraints() -> impl Strategy<Value = Vec<MetricConstraint>> {
    prop::collection::vec(constraint(), 1..4)
}

fn enum_of<T: Clone + std::fmt::Debug + 'static>(all: &[T]) -> impl Strategy<Value = T> {
    select(all.to_vec())
}

const ROLES: [PartyRole; 3] = [PartyRole::Consumer, PartyRole::Provider, PartyRole::ThirdParty];
const SERVICE_KINDS: [ServiceKind; 7] = [
    ServiceKind::Sensing,
    ServiceKind::Networking,
    ServiceKind::Ingestion,
    ServiceKind::BatchProcessing,
    ServiceKind::StreamProcessing,
    ServiceKind::MachineLearning,
    ServiceKind::Database,
];
const RESOURCE_KINDS: [ResourceKind; 3] =
    [ResourceKind::IotDevice, ResourceKind::EdgeResource, ResourceKind::CloudResource];
const ACTIVITY_KINDS: [ActivityKind; 10] = [
    ActivityKind::CaptureEoi,
    ActivityKind::ExamineEoiOnFly,
    ActivityKind::FilterEoi,
    ActivityKind::AggregateEoi,
    ActivityKind::IngestData,
    ActivityKind::SmallScaleRtAnalysis,
    ActivityKind::LargeScaleRtAnalysis,
    ActivityKind::LargeScaleHistAnalysis,
    ActivityKind::StoreStructured,
    ActivityKind::StoreUnstructured,
];

pub fn all_service_kinds() -> &'static [ServiceKind] {
    &SERVICE_KINDS
}

pub fn all_resource_kinds() -> &'static [ResourceKind] {
    &RESOURCE_KINDS
}

pub fn all_activity_kinds() -> &'static [ActivityKind] {
    &ACTIVITY_KINDS
}

type SlosConfig = (Vec<Vec<MetricConstraint>>, Vec<ConfigParam>);

fn owned_parts() -> impl Strategy<Value = SlosConfig> {
    (prop::collection::vec(constraints(), 0..3), prop::collection::vec(config(), 0..3))
}

/// Structurally arbitrary documents: identifiers are unique and every
/// entity SLO sits on a declared service or resource, but nothing else is
/// guaranteed to make sense.
pub fn arb_document() -> impl Strategy<Value = SlaDocument> {
    let header = (text(), ident("d"), word(), date(), date());
    let parties = prop::collection::vec((text(), enum_of(&ROLES)), 0..4);
    let app_slos = prop::collection::vec(constraints(), 0..3);
    let resources = prop::collection::vec((enum_of(&RESOURCE_KINDS), owned_parts()), 0..4);
    let services = prop::collection::vec((enum_of(&SERVICE_KINDS), any::<prop::sample::Index>(), owned_parts()), 0..5);
    let activities = prop::collection::vec(
        (enum_of(&ACTIVITY_KINDS), prop::collection::vec(any::<prop::sample::Index>(), 1..4)),
        0..4,
    );
    (header, parties, app_slos, resources, services, activities).prop_map(
        |((title, id, app, start, end), parties, app_slos, resources, services, activities)| {
            let mut parts = DocumentParts::new(Header::new(title, id, ApplicationType::parse(&app), start, end));
            let mut slo_n = 0;
            let mut next_slo = |target: SloTarget, cs: Vec<MetricConstraint>| {
                slo_n += 1;
                Slo::new(format!("slo_{slo_n}"), target, cs)
            };
            parts.parties = parties
                .into_iter()
                .enumerate()
                .map(|(i, (name, role))| Party::new(format!("pa{i}"), name, role))
                .collect();
            parts.app_slos = app_slos.into_iter().map(|cs| next_slo(SloTarget::Application, cs)).collect();
            for (i, (kind, (slos, config))) in resources.into_iter().enumerate() {
                let mut r = InfraResourceSpec::new(format!("rs{i}"), kind);
                r.slos = slos.into_iter().map(|cs| next_slo(SloTarget::Entity(r.id.clone()), cs)).collect();
                r.config = config;
                parts.resources.push(r);
            }
            // deployment targets include ids that do not exist
            let mut hosts: Vec<String> = parts.resources.iter().map(|r| r.id.clone()).collect();
            hosts.push("nowhere".into());
            hosts.push("pa0".into());
            for (i, (kind, host, (slos, config))) in services.into_iter().enumerate() {
                let mut s = iot_sla::model::ServiceSpec::new(format!("sv{i}"), kind, host.get(&hosts).clone());
                s.slos = slos.into_iter().map(|cs| next_slo(SloTarget::Entity(s.id.clone()), cs)).collect();
                s.config = config;
                parts.services.push(s);
            }
            let mut svc_ids: Vec<String> = parts.services.iter().map(|s| s.id.clone()).collect();
            svc_ids.push("ghost_svc".into());
            for (i, (kind, picks)) in activities.into_iter().enumerate() {
                let req: Vec<&str> = picks.iter().map(|p| p.get(&svc_ids).as_str()).collect();
                parts.activities.push(WorkflowActivity::new(format!("ac{i}"), kind, &req));
            }
            build_document(parts).expect("generated ids are unique")
        },
    )
}

// ---- vocabulary-aware generator ----

/// A constraint or config entry that is well-formed for `scope`.
fn plausible_value(
    catalog: &Catalog,
    scope: Scope,
    kind: iot_sla::vocabulary::TermKind,
    pick: usize,
    n: i64,
) -> Option<(String, Comparator, Literal, Option<String>)> {
    let terms = catalog.terms_in(scope, Some(kind));
    if terms.is_empty() {
        return None;
    }
    let e = terms[pick % terms.len()];
    let cmp = Comparator::ALL[(n.unsigned_abs() as usize) % 5];
    Some(match e.value_type {
        ValueType::Numeric => {
            (e.term.clone(), cmp, Literal::Number(int(n.abs() % 100)), Some(e.canonical_unit.name().into()))
        }
        ValueType::Boolean => (e.term.clone(), Comparator::Eq, Literal::Bool(n % 2 == 0), None),
        _ => (e.term.clone(), Comparator::Eq, Literal::Str(format!("v{n}")), None),
    })
}

/// Documents assembled from catalog terms and compatible kinds, so that a
/// good share of them validate cleanly. `noise` occasionally breaks a
/// reference or a value.
pub fn arb_semantic_document(catalog: &'static Catalog) -> impl Strategy<Value = SlaDocument> {
    let svc = (
        enum_of(&SERVICE_KINDS),
        any::<prop::sample::Index>(),
        any::<usize>(),
        any::<i64>(),
        any::<usize>(),
        any::<i64>(),
    );
    (
        prop::collection::vec(enum_of(&RESOURCE_KINDS), 1..4),
        prop::collection::vec(svc, 1..5),
        prop::collection::vec((enum_of(&ACTIVITY_KINDS), any::<prop::sample::Index>()), 0..4),
        prop::collection::vec((any::<usize>(), any::<i64>()), 1..3),
        prop::collection::vec(0u8..12, 0..2),
    )
        .prop_map(move |(res_kinds, svcs, acts, app, noise)| {
            let start = NaiveDate::from_ymd_opt(2025, 1, 1).unwrap();
            let end = NaiveDate::from_ymd_opt(2026, 1, 1).unwrap();
            let mut parts = DocumentParts::new(Header::new("Generated", "gen", ApplicationType::SmartCity, start, end));
            parts.parties = vec![
                Party::new("buyer", "Buyer", PartyRole::Consumer),
                Party::new("seller", "Seller", PartyRole::Provider),
            ];
            let mut slo_n = 0;
            for (pick, n) in &app {
                let (m, c, v, u) =
                    plausible_value(catalog, Scope::Application, iot_sla::vocabulary::TermKind::QosMetric, *pick, *n)
                        .expect("application metrics exist");
                slo_n += 1;
                parts.app_slos.push(Slo::new(
                    format!("app_slo{slo_n}"),
                    SloTarget::Application,
                    vec![MetricConstraint::new(m, c, v, u.as_deref())],
                ));
            }
            parts.resources =
                res_kinds.iter().enumerate().map(|(i, k)| InfraResourceSpec::new(format!("res{i}"), *k)).collect();
            let hosts: Vec<String> = parts.resources.iter().map(|r| r.id.clone()).collect();
            for (i, (kind, host, mpick, mn, cpick, cn)) in svcs.into_iter().enumerate() {
                let mut s = iot_sla::model::ServiceSpec::new(format!("svc{i}"), kind, host.get(&hosts).clone());
                let scope = Scope::Concept(kind.concept());
                if let Some((m, c, v, u)) =
                    plausible_value(catalog, scope, iot_sla::vocabulary::TermKind::QosMetric, mpick, mn)
                {
                    slo_n += 1;
                    s.slos.push(Slo::new(
                        format!("svc_slo{slo_n}"),
                        SloTarget::Entity(s.id.clone()),
                        vec![MetricConstraint::new(m, c, v, u.as_deref())],
                    ));
                }
                if let Some((t, _, v, u)) =
                    plausible_value(catalog, scope, iot_sla::vocabulary::TermKind::ConfigurationParameter, cpick, cn)
                {
                    s.config.push(ConfigParam::new(t, v, u.as_deref()));
                }
                parts.services.push(s);
            }
            for (i, (kind, pick)) in acts.into_iter().enumerate() {
                let allowed = iot_sla::validator::compatibility(kind);
                let candidates: Vec<&str> =
                    parts.services.iter().filter(|s| allowed.contains(&s.kind)).map(|s| s.id.as_str()).collect();
                if candidates.is_empty() {
                    continue;
                }
                let chosen = *pick.get(&candidates);
                parts.activities.push(WorkflowActivity::new(format!("act{i}"), kind, &[chosen]));
            }
            for n in noise {
                match n {
                    0 => parts.services[0].deployed_on = "missing_host".into(),
                    1 => parts.services[0].deployed_on = "buyer".into(),
                    2 => {
                        if let Some(a) = parts.activities.first_mut() {
                            a.required_services.push("missing_svc".into());
                        }
                    }
                    3 => parts.app_slos[0].constraints[0].unit = Some("furlong".into()),
                    4 => parts.app_slos[0].constraints[0].metric = "sampling_rate".into(),
                    5 => {
                        parts.parties.pop();
                    }
                    6 => parts.header.end_date = parts.header.start_date,
                    _ => {}
                }
            }
            build_document(parts).expect("unique ids")
        })
}

/// Every structural invariant a clean document is expected to satisfy.
/// Returns the first one that fails.
pub fn model_invariant_violation(doc: &SlaDocument, catalog: &Catalog) -> Option<String> {
    let ids = doc.all_ids();
    let unique: HashSet<_> = ids.iter().collect();
    if unique.len() != ids.len() {
        return Some("identifiers are not unique".into());
    }
    for id in &ids {
        if doc.resolve(id).is_none() {
            return Some(format!("`{id}` does not resolve"));
        }
    }
    if doc.parties.len() < 2 {
        return Some("fewer than two parties".into());
    }
    for a in &doc.activities {
        if a.required_services.is_empty() {
            return Some(format!("activity {} requires nothing", a.id));
        }
        for s in &a.required_services {
            if !matches!(doc.resolve(s), Some(EntityRef::Service(_))) {
                return Some(format!("activity {} requires non-service {s}", a.id));
            }
        }
        let services = doc.services_for_activity(&a.id).ok()?;
        if !services.iter().all(|s| doc.services.iter().any(|d| std::ptr::eq(*s, d))) {
            return Some("services_for_activity escaped the document".into());
        }
    }
    for s in &doc.services {
        let hosts = doc.resources.iter().filter(|r| r.id == s.deployed_on).count();
        if hosts != 1 {
            return Some(format!("service {} is on {hosts} resources", s.id));
        }
    }
    for (slo, scope) in doc.all_slos() {
        match &slo.target {
            SloTarget::Application => {
                if scope != Scope::Application {
                    return Some(format!("slo {} has the wrong scope", slo.id));
                }
            }
            SloTarget::Entity(t) => {
                if !matches!(doc.resolve(t), Some(EntityRef::Service(_)) | Some(EntityRef::Resource(_))) {
                    return Some(format!("slo {} targets {t}", slo.id));
                }
            }
        }
        for c in &slo.constraints {
            let entry = catalog.lookup_in(&c.metric, scope)?;
            let ok = match (&c.value, entry.value_type) {
                (Literal::Bool(_), ValueType::Boolean) => c.comparator == Comparator::Eq && c.unit.is_none(),
                (Literal::Number(_), ValueType::Numeric) => true,
                (Literal::Str(_), ValueType::Text | ValueType::Enumerated) => c.comparator == Comparator::Eq,
                _ => false,
            };
            if !ok {
                return Some(format!("constraint `{c}` does not fit {}", entry.term));
            }
        }
    }
    if doc.header.start_date >= doc.header.end_date {
        return Some("dates out of order".into());
    }
    None
}

// ---- matcher oracle ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    Lower,
    Higher,
    Exact,
}

/// What the oracle knows about a metric, written out by hand.
#[derive(Debug, Clone, Copy)]
pub struct OracleMetric {
    pub term: &'static str,
    pub dir: Dir,
    pub capped_at_100: bool,
    pub kind: OracleKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    Percent,
    Rate,
    Abstract,
    Count,
    Frequency,
    Flag,
    Label,
}

pub const ORACLE_METRICS: &[OracleMetric] = &[
    OracleMetric { term: "availability", dir: Dir::Higher, capped_at_100: true, kind: OracleKind::Percent },
    OracleMetric { term: "latency", dir: Dir::Lower, capped_at_100: false, kind: OracleKind::Abstract },
    OracleMetric { term: "throughput", dir: Dir::Higher, capped_at_100: false, kind: OracleKind::Rate },
    OracleMetric { term: "replication_factor", dir: Dir::Higher, capped_at_100: false, kind: OracleKind::Count },
    OracleMetric { term: "publishing_rate", dir: Dir::Exact, capped_at_100: false, kind: OracleKind::Frequency },
    OracleMetric { term: "data_compression_support", dir: Dir::Exact, capped_at_100: false, kind: OracleKind::Flag },
    OracleMetric {
        term: "name_of_ingestion_framework",
        dir: Dir::Exact,
        capped_at_100: false,
        kind: OracleKind::Label,
    },
];

/// A value in oracle terms: numbers are kept in one fixed unit per kind
/// (percent, MBps, time_unit, count, Hz) next to the unit spelling used
/// when the value is handed to the library.
#[derive(Debug, Clone, PartialEq)]
pub enum OValue {
    Num { base: BigRational, text: String, unit: Option<&'static str> },
    Flag(bool),
    Label(String),
}

impl OValue {
    pub fn literal(&self) -> Literal {
        match self {
            OValue::Num { text, .. } => Literal::Number(dec(text)),
            OValue::Flag(b) => Literal::Bool(*b),
            OValue::Label(s) => Literal::Str(s.clone()),
        }
    }

    pub fn unit(&self) -> Option<&'static str> {
        match self {
            OValue::Num { unit, .. } => *unit,
            _ => None,
        }
    }

    pub fn typed(&self) -> iot_sla::value::TypedValue {
        match self {
            OValue::Num { text, unit, .. } => iot_sla::value::TypedValue::number(text, *unit),
            OValue::Flag(b) => iot_sla::value::TypedValue::Boolean(*b),
            OValue::Label(s) => iot_sla::value::TypedValue::text(s.clone()),
        }
    }
}

fn render(x: &BigRational) -> String {
    iot_sla::value::format_decimal(x).expect("terminating decimal")
}

/// Spells `base` (in the oracle unit for `kind`) in one of the accepted
/// units, chosen by `style`.
pub fn spell(kind: OracleKind, base: BigRational, style: u8) -> OValue {
    let (text, unit) = match (kind, style % 3) {
        (OracleKind::Percent, 1) => (render(&(&base / int(100))), Some("ratio")),
        (OracleKind::Percent, _) => (render(&base), Some("percent")),
        (OracleKind::Rate, 1) => (render(&(&base / int(1000))), Some("GBps")),
        (OracleKind::Rate, 2) => (render(&(&base * int(1000))), Some("KBps")),
        (OracleKind::Rate, _) => (render(&base), Some("MBps")),
        (OracleKind::Abstract, _) => (render(&base), Some("time_unit")),
        (OracleKind::Count, 1) => (render(&base), None),
        (OracleKind::Count, _) => (render(&base), Some("count")),
        (OracleKind::Frequency, 1) => (render(&(&base / int(1000))), Some("kHz")),
        (OracleKind::Frequency, _) => (render(&base), Some("Hz")),
        (OracleKind::Flag | OracleKind::Label, _) => unreachable!("not numeric"),
    };
    OValue::Num { base, text, unit }
}

pub fn oracle_metric(term: &str) -> Option<&'static OracleMetric> {
    ORACLE_METRICS.iter().find(|m| m.term == term)
}

fn holds(cmp: Comparator, x: &BigRational, t: &BigRational) -> bool {
    match cmp {
        Comparator::Lt => x < t,
        Comparator::Le => x <= t,
        Comparator::Gt => x > t,
        Comparator::Ge => x >= t,
        Comparator::Eq => x == t,
    }
}

/// Whether every value the provider may deliver meets `cmp t`, checked on
/// a finite set of witness points: the ends of the deliverable range, the
/// threshold, a point past the threshold when the range is unbounded, and
/// midpoints between the threshold and each end.
pub fn oracle_guarantees(m: &OracleMetric, offered: &BigRational, cmp: Comparator, t: &BigRational) -> bool {
    let zero = BigRational::zero();
    let (lo, hi) = match m.dir {
        Dir::Lower => (offered.clone().min(zero), Some(offered.clone())),
        Dir::Higher if m.capped_at_100 => (offered.clone(), Some(offered.clone().max(int(100)))),
        Dir::Higher => (offered.clone(), None),
        Dir::Exact => (offered.clone(), Some(offered.clone())),
    };
    let inside = |x: &BigRational| x >= &lo && hi.as_ref().is_none_or(|h| x <= h);
    let two = int(2);
    let far = lo.clone().max(t.clone()) + BigRational::one();
    let top = hi.clone().unwrap_or(far);
    let mut witnesses = vec![lo.clone(), top.clone(), t.clone(), (&lo + t) / &two, (t + &top) / &two];
    witnesses.retain(|x| inside(x));
    witnesses.iter().all(|x| holds(cmp, x, t))
}

#[derive(Debug, Clone)]
pub struct OracleConstraint {
    pub metric: &'static str,
    pub cmp: Comparator,
    pub value: OValue,
}

impl OracleConstraint {
    pub fn to_model(&self) -> MetricConstraint {
        MetricConstraint::new(self.metric, self.cmp, self.value.literal(), self.value.unit())
    }
}

#[derive(Debug, Clone)]
pub struct OracleOffer {
    pub id: String,
    pub caps: Vec<(&'static str, OValue)>,
}

impl OracleOffer {
    pub fn cap(&self, metric: &str) -> Option<&OValue> {
        self.caps.iter().find(|(m, _)| *m == metric).map(|(_, v)| v)
    }

    pub fn to_model(&self, catalog: &Catalog) -> iot_sla::matcher::ProviderOffer {
        let mut o = iot_sla::matcher::ProviderOffer::new(self.id.clone(), iot_sla::vocabulary::Concept::Ingestion);
        for (m, v) in &self.caps {
            o = o.with(m, v.typed(), catalog).expect("oracle capability is valid");
        }
        o
    }
}

pub fn oracle_satisfied(c: &OracleConstraint, offer: &OracleOffer) -> bool {
    let m = oracle_metric(c.metric).expect("oracle metric");
    let Some(offered) = offer.cap(c.metric) else { return false };
    match (offered, &c.value) {
        (OValue::Num { base: b, .. }, OValue::Num { base: t, .. }) => oracle_guarantees(m, b, c.cmp, t),
        (OValue::Flag(a), OValue::Flag(b)) => c.cmp == Comparator::Eq && a == b,
        (OValue::Label(a), OValue::Label(b)) => c.cmp == Comparator::Eq && a == b,
        _ => false,
    }
}

pub fn oracle_score(
    reqs: &[OracleConstraint],
    offer: &OracleOffer,
    weights: &HashMap<&str, BigRational>,
) -> BigRational {
    let w = |c: &OracleConstraint| weights.get(c.metric).cloned().unwrap_or_else(BigRational::one);
    let total: BigRational = reqs.iter().map(w).sum();
    if total.is_zero() {
        return BigRational::one();
    }
    let got: BigRational = reqs.iter().filter(|c| oracle_satisfied(c, offer)).map(w).sum();
    got / total
}

/// (provider, rank, score) in presentation order.
pub fn oracle_ranking(
    reqs: &[OracleConstraint],
    offers: &[OracleOffer],
    weights: &HashMap<&str, BigRational>,
) -> Vec<(String, usize, BigRational)> {
    let mut scored: Vec<(String, BigRational)> =
        offers.iter().map(|o| (o.id.clone(), oracle_score(reqs, o, weights))).collect();
    scored.sort_by(|a, b| match b.1.cmp(&a.1) {
        Ordering::Equal => a.0.cmp(&b.0),
        o => o,
    });
    let mut out: Vec<(String, usize, BigRational)> = Vec::new();
    for (i, (id, s)) in scored.into_iter().enumerate() {
        // competition ranking: ties share the rank of their first member
        let rank = match out.last() {
            Some((_, r, prev)) if *prev == s => *r,
            _ => i + 1,
        };
        out.push((id, rank, s));
    }
    out
}

fn oracle_value(m: &OracleMetric, rng: &mut impl rand::Rng) -> OValue {
    match m.kind {
        OracleKind::Percent => spell(m.kind, int(180 + rng.gen_range(0..=20)) / int(2), rng.gen()),
        OracleKind::Rate => spell(m.kind, int(10 * rng.gen_range(0..=20)), rng.gen()),
        OracleKind::Abstract => spell(m.kind, int(rng.gen_range(0..=10)), rng.gen()),
        OracleKind::Count => spell(m.kind, int(rng.gen_range(1..=5)), rng.gen()),
        OracleKind::Frequency => spell(m.kind, int(rng.gen_range(1..=4)), rng.gen()),
        OracleKind::Flag => OValue::Flag(rng.gen()),
        OracleKind::Label => OValue::Label(["kafka", "pulsar", "mqtt"][rng.gen_range(0..3)].into()),
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub reqs: Vec<OracleConstraint>,
    pub offers: Vec<OracleOffer>,
    pub weights: HashMap<&'static str, BigRational>,
}

/// A random matching problem over ingestion offers: up to 5 offers and up
/// to 6 constraints with random comparators, units and weights.
pub fn random_instance(rng: &mut impl rand::Rng) -> Instance {
    let n_reqs = rng.gen_range(0..=6);
    let reqs = (0..n_reqs)
        .map(|_| {
            let m = &ORACLE_METRICS[rng.gen_range(0..ORACLE_METRICS.len())];
            let cmp = match m.kind {
                OracleKind::Flag | OracleKind::Label if rng.gen_bool(0.8) => Comparator::Eq,
                _ => Comparator::ALL[rng.gen_range(0..5)],
            };
            OracleConstraint { metric: m.term, cmp, value: oracle_value(m, rng) }
        })
        .collect();
    let n_offers = rng.gen_range(1..=5);
    let mut offers = Vec::new();
    for i in 0..n_offers {
        let mut caps = Vec::new();
        for m in ORACLE_METRICS {
            if rng.gen_bool(0.75) {
                caps.push((m.term, oracle_value(m, rng)));
            }
        }
        offers.push(OracleOffer { id: format!("p{}", (b'a' + i as u8) as char), caps });
    }
    let mut weights = HashMap::new();
    for m in ORACLE_METRICS {
        if rng.gen_bool(0.6) {
            weights.insert(
                m.term,
                BigRational::new(BigInt::from(rng.gen_range(1..=9)), BigInt::from(rng.gen_range(1..=4))),
            );
        }
    }
    Instance { reqs, offers, weights }
}

/// A copy of `offer` that is at least as strong on every metric and may
/// advertise extra ones.
pub fn strengthen(offer: &OracleOffer, rng: &mut impl rand::Rng) -> OracleOffer {
    let mut caps: Vec<(&'static str, OValue)> = offer
        .caps
        .iter()
        .map(|(term, v)| {
            let m = oracle_metric(term).unwrap();
            let v = match (v, m.dir) {
                (OValue::Num { base, .. }, Dir::Lower) => {
                    let lowered = (base - int(rng.gen_range(0..=3))).max(BigRational::zero());
                    spell(m.kind, lowered, rng.gen())
                }
                (OValue::Num { base, .. }, Dir::Higher) => {
                    let mut raised = base + int(rng.gen_range(0..=3));
                    if m.capped_at_100 {
                        raised = raised.min(int(100));
                    }
                    spell(m.kind, raised, rng.gen())
                }
                (other, _) => other.clone(),
            };
            (*term, v)
        })
        .collect();
    for m in ORACLE_METRICS {
        if offer.cap(m.term).is_none() && rng.gen_bool(0.5) {
            caps.push((m.term, oracle_value(m, rng)));
        }
    }
    OracleOffer { id: format!("{}_plus", offer.id), caps }
}

pub fn library_weights(w: &HashMap<&'static str, BigRational>) -> iot_sla::matcher::Weights {
    let mut out = iot_sla::matcher::Weights::uniform();
    for (k, v) in w {
        out.set(*k, v.clone()).unwrap();
    }
    out
}

// ---- telemetry ----

pub fn load_telemetry(rel: &str) -> Vec<iot_sla::monitor::TelemetryRecord> {
    let mut out = Vec::new();
    let skipped = iot_sla::monitor::read_telemetry(read_fixture(rel).as_bytes(), |r| out.push(r)).unwrap();
    assert_eq!(skipped, 0, "{rel}");
    out
}

/// Delay samples for the three activities of the health monitoring
/// fixture (capture, ingest, analyse_rt). `maxima[w]` gives each
/// activity's largest sample in window `w`; every activity also reports a
/// smaller value earlier in the same window.
pub fn pipeline_records(maxima: &[[i64; 3]], width: u64) -> Vec<iot_sla::monitor::TelemetryRecord> {
    use iot_sla::monitor::TelemetryRecord;
    use iot_sla::value::TypedValue;
    let sources = [("sensing_svc", "data_freshness"), ("ingest_svc", "latency"), ("stream_svc", "latency")];
    let mut out = Vec::new();
    for (w, row) in maxima.iter().enumerate() {
        let start = w as u64 * width;
        for (i, ((target, metric), max)) in sources.iter().zip(row).enumerate() {
            let low = (max - 1).max(0);
            let unit = Some(iot_sla::units::Unit::parse("time_unit").unwrap());
            out.push(TelemetryRecord::new(start + i as u64, *target, *metric, TypedValue::integer(low, unit)));
            out.push(TelemetryRecord::new(
                start + width / 2 + i as u64,
                *target,
                *metric,
                TypedValue::integer(*max, unit),
            ));
        }
    }
    out
}
