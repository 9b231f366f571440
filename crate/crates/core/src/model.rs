//! In-memory SLA documents: the agreement header, parties, SLOs, workflow
//! activities, services and the infrastructure they are deployed on.

use std::collections::HashSet;
use std::fmt;

use chrono::NaiveDate;
use num_rational::BigRational;
use thiserror::Error;

use crate::span::Span;
use crate::units::Unit;
use crate::value::{format_rational, TypedValue};
use crate::vocabulary::{string_enum, Concept, Scope};

string_enum! {
    PartyRole {
        Consumer => "consumer",
        Provider => "provider",
        ThirdParty => "third_party",
    }
}

string_enum! {
    /// Stages of the IoT data flow.
    ActivityKind {
        CaptureEoi => "capture_eoi",
        ExamineEoiOnFly => "examine_eoi_on_fly",
        FilterEoi => "filter_eoi",
        AggregateEoi => "aggregate_eoi",
        IngestData => "ingest_data",
        SmallScaleRtAnalysis => "small_scale_rt_analysis",
        LargeScaleRtAnalysis => "large_scale_rt_analysis",
        LargeScaleHistAnalysis => "large_scale_hist_analysis",
        StoreStructured => "store_structured",
        StoreUnstructured => "store_unstructured",
    }
}

string_enum! {
    ServiceKind {
        Sensing => "sensing",
        Networking => "networking",
        Ingestion => "ingestion",
        BatchProcessing => "batch_processing",
        StreamProcessing => "stream_processing",
        MachineLearning => "machine_learning",
        Database => "database",
    }
}

string_enum! {
    ResourceKind {
        IotDevice => "iot_device",
        EdgeResource => "edge_resource",
        CloudResource => "cloud_resource",
    }
}

impl ServiceKind {
    pub fn concept(self) -> Concept {
        match self {
            ServiceKind::Sensing => Concept::Sensing,
            ServiceKind::Networking => Concept::Networking,
            ServiceKind::Ingestion => Concept::Ingestion,
            ServiceKind::BatchProcessing => Concept::BatchProcessing,
            ServiceKind::StreamProcessing => Concept::StreamProcessing,
            ServiceKind::MachineLearning => Concept::MachineLearning,
            ServiceKind::Database => Concept::Database,
        }
    }
}

impl ResourceKind {
    pub fn concept(self) -> Concept {
        match self {
            ResourceKind::IotDevice => Concept::IotDevice,
            ResourceKind::EdgeResource => Concept::EdgeResource,
            ResourceKind::CloudResource => Concept::CloudResource,
        }
    }
}

/// Application domain. Unrecognised identifiers are kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApplicationType {
    SmartHome,
    SmartHealth,
    SmartCity,
    Other(String),
}

impl ApplicationType {
    pub fn parse(s: &str) -> ApplicationType {
        match s {
            "smart_home" => ApplicationType::SmartHome,
            "smart_health" => ApplicationType::SmartHealth,
            "smart_city" => ApplicationType::SmartCity,
            other => ApplicationType::Other(other.to_string()),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            ApplicationType::SmartHome => "smart_home",
            ApplicationType::SmartHealth => "smart_health",
            ApplicationType::SmartCity => "smart_city",
            ApplicationType::Other(s) => s,
        }
    }
}

impl fmt::Display for ApplicationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparator {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl Comparator {
    pub const ALL: [Comparator; 5] = [Comparator::Lt, Comparator::Le, Comparator::Gt, Comparator::Ge, Comparator::Eq];

    pub fn as_str(self) -> &'static str {
        match self {
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
            Comparator::Eq => "==",
        }
    }

    pub fn parse(s: &str) -> Option<Comparator> {
        Comparator::ALL.into_iter().find(|c| c.as_str() == s)
    }

    pub fn holds<T: Ord + ?Sized>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Comparator::Lt => lhs < rhs,
            Comparator::Le => lhs <= rhs,
            Comparator::Gt => lhs > rhs,
            Comparator::Ge => lhs >= rhs,
            Comparator::Eq => lhs == rhs,
        }
    }
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value as written in a document. Numbers are exact decimals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Number(BigRational),
    Bool(bool),
    Str(String),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Number(n) => f.write_str(&format_rational(n)),
            Literal::Bool(b) => write!(f, "{b}"),
            Literal::Str(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown unit `{0}`")]
pub struct UnknownUnit(pub String);

/// Resolves a literal plus optional unit name into a [`TypedValue`].
pub fn typed_value(value: &Literal, unit: Option<&str>) -> Result<TypedValue, UnknownUnit> {
    let unit = match unit {
        Some(name) => Some(Unit::parse(name).ok_or_else(|| UnknownUnit(name.to_string()))?),
        None => None,
    };
    Ok(match value {
        Literal::Number(n) => TypedValue::Numeric { magnitude: n.clone(), unit },
        Literal::Bool(b) => TypedValue::Boolean(*b),
        Literal::Str(s) => TypedValue::Text(s.clone()),
    })
}

/// One `metric comparator value [unit]` clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricConstraint {
    pub metric: String,
    pub comparator: Comparator,
    pub value: Literal,
    pub unit: Option<String>,
    pub span: Span,
}

impl MetricConstraint {
    pub fn new(metric: impl Into<String>, comparator: Comparator, value: Literal, unit: Option<&str>) -> Self {
        MetricConstraint { metric: metric.into(), comparator, value, unit: unit.map(str::to_string), span: Span::NONE }
    }

    pub fn typed_value(&self) -> Result<TypedValue, UnknownUnit> {
        typed_value(&self.value, self.unit.as_deref())
    }
}

impl fmt::Display for MetricConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.metric, self.comparator, self.value)?;
        if let Some(u) = &self.unit {
            write!(f, " {u}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigParam {
    pub term: String,
    pub value: Literal,
    pub unit: Option<String>,
    pub span: Span,
}

impl ConfigParam {
    pub fn new(term: impl Into<String>, value: Literal, unit: Option<&str>) -> Self {
        ConfigParam { term: term.into(), value, unit: unit.map(str::to_string), span: Span::NONE }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SloTarget {
    Application,
    Entity(String),
}

impl SloTarget {
    pub fn as_str(&self) -> &str {
        match self {
            SloTarget::Application => "app",
            SloTarget::Entity(id) => id,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slo {
    pub id: String,
    pub target: SloTarget,
    pub constraints: Vec<MetricConstraint>,
    pub span: Span,
}

impl Slo {
    pub fn new(id: impl Into<String>, target: SloTarget, constraints: Vec<MetricConstraint>) -> Self {
        Slo { id: id.into(), target, constraints, span: Span::NONE }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Party {
    pub id: String,
    pub name: String,
    pub role: PartyRole,
    pub span: Span,
}

impl Party {
    pub fn new(id: impl Into<String>, name: impl Into<String>, role: PartyRole) -> Self {
        Party { id: id.into(), name: name.into(), role, span: Span::NONE }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkflowActivity {
    pub id: String,
    pub kind: ActivityKind,
    pub required_services: Vec<String>,
    pub span: Span,
}

impl WorkflowActivity {
    pub fn new(id: impl Into<String>, kind: ActivityKind, required_services: &[&str]) -> Self {
        WorkflowActivity {
            id: id.into(),
            kind,
            required_services: required_services.iter().map(|s| s.to_string()).collect(),
            span: Span::NONE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceSpec {
    pub id: String,
    pub kind: ServiceKind,
    pub deployed_on: String,
    pub slos: Vec<Slo>,
    pub config: Vec<ConfigParam>,
    pub span: Span,
}

impl ServiceSpec {
    pub fn new(id: impl Into<String>, kind: ServiceKind, deployed_on: impl Into<String>) -> Self {
        ServiceSpec {
            id: id.into(),
            kind,
            deployed_on: deployed_on.into(),
            slos: Vec::new(),
            config: Vec::new(),
            span: Span::NONE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfraResourceSpec {
    pub id: String,
    pub kind: ResourceKind,
    pub slos: Vec<Slo>,
    pub config: Vec<ConfigParam>,
    pub span: Span,
}

impl InfraResourceSpec {
    pub fn new(id: impl Into<String>, kind: ResourceKind) -> Self {
        InfraResourceSpec { id: id.into(), kind, slos: Vec::new(), config: Vec::new(), span: Span::NONE }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub title: String,
    pub id: String,
    pub application_type: ApplicationType,
    pub start_date: NaiveDate,
    pub end_date: NaiveDate,
    pub span: Span,
}

impl Header {
    pub fn new(
        title: impl Into<String>,
        id: impl Into<String>,
        application_type: ApplicationType,
        start_date: NaiveDate,
        end_date: NaiveDate,
    ) -> Self {
        Header { title: title.into(), id: id.into(), application_type, start_date, end_date, span: Span::NONE }
    }
}

/// Everything needed to assemble a document. Service and resource SLOs
/// travel inside their owners.
#[derive(Debug, Clone)]
pub struct DocumentParts {
    pub header: Header,
    pub parties: Vec<Party>,
    pub app_slos: Vec<Slo>,
    pub activities: Vec<WorkflowActivity>,
    pub services: Vec<ServiceSpec>,
    pub resources: Vec<InfraResourceSpec>,
}

impl DocumentParts {
    pub fn new(header: Header) -> Self {
        DocumentParts {
            header,
            parties: Vec::new(),
            app_slos: Vec::new(),
            activities: Vec::new(),
            services: Vec::new(),
            resources: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlaDocument {
    pub header: Header,
    pub parties: Vec<Party>,
    pub app_slos: Vec<Slo>,
    pub activities: Vec<WorkflowActivity>,
    pub services: Vec<ServiceSpec>,
    pub resources: Vec<InfraResourceSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("unknown activity `{0}`")]
    UnknownActivity(String),
}

/// A borrowed view of whichever entity an identifier names.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntityRef<'a> {
    Header(&'a Header),
    Party(&'a Party),
    Slo(&'a Slo),
    Activity(&'a WorkflowActivity),
    Service(&'a ServiceSpec),
    Resource(&'a InfraResourceSpec),
}

/// Assembles a document, rejecting only duplicate identifiers. References
/// between entities are left for the validator.
pub fn build_document(parts: DocumentParts) -> Result<SlaDocument, ModelError> {
    let doc = SlaDocument {
        header: parts.header,
        parties: parts.parties,
        app_slos: parts.app_slos,
        activities: parts.activities,
        services: parts.services,
        resources: parts.resources,
    };
    let mut seen = HashSet::new();
    for id in doc.all_ids() {
        if !seen.insert(id) {
            return Err(ModelError::DuplicateId(id.to_string()));
        }
    }
    Ok(doc)
}

impl SlaDocument {
    /// Every identifier in declaration order, the document id first.
    pub fn all_ids(&self) -> Vec<&str> {
        let mut ids = vec![self.header.id.as_str()];
        ids.extend(self.parties.iter().map(|p| p.id.as_str()));
        ids.extend(self.app_slos.iter().map(|s| s.id.as_str()));
        ids.extend(self.activities.iter().map(|a| a.id.as_str()));
        for s in &self.services {
            ids.push(&s.id);
            ids.extend(s.slos.iter().map(|s| s.id.as_str()));
        }
        for r in &self.resources {
            ids.push(&r.id);
            ids.extend(r.slos.iter().map(|s| s.id.as_str()));
        }
        ids
    }

    /// Parties, application SLOs, activities, services and resources.
    pub fn entity_count(&self) -> usize {
        self.parties.len() + self.app_slos.len() + self.activities.len() + self.services.len() + self.resources.len()
    }

    pub fn resolve(&self, id: &str) -> Option<EntityRef<'_>> {
        if self.header.id == id {
            return Some(EntityRef::Header(&self.header));
        }
        if let Some(p) = self.parties.iter().find(|p| p.id == id) {
            return Some(EntityRef::Party(p));
        }
        if let Some(s) = self.all_slos().find(|(s, _)| s.id == id) {
            return Some(EntityRef::Slo(s.0));
        }
        if let Some(a) = self.activity(id) {
            return Some(EntityRef::Activity(a));
        }
        if let Some(s) = self.service(id) {
            return Some(EntityRef::Service(s));
        }
        self.resource(id).map(EntityRef::Resource)
    }

    pub fn activity(&self, id: &str) -> Option<&WorkflowActivity> {
        self.activities.iter().find(|a| a.id == id)
    }

    pub fn service(&self, id: &str) -> Option<&ServiceSpec> {
        self.services.iter().find(|s| s.id == id)
    }

    pub fn resource(&self, id: &str) -> Option<&InfraResourceSpec> {
        self.resources.iter().find(|r| r.id == id)
    }

    /// Vocabulary scope of a service, resource, or the application itself.
    pub fn scope_of(&self, id: &str) -> Option<Scope> {
        if id == self.header.id {
            return Some(Scope::Application);
        }
        if let Some(s) = self.service(id) {
            return Some(Scope::Concept(s.kind.concept()));
        }
        self.resource(id).map(|r| Scope::Concept(r.kind.concept()))
    }

    pub fn target_scope(&self, target: &SloTarget) -> Option<Scope> {
        match target {
            SloTarget::Application => Some(Scope::Application),
            SloTarget::Entity(id) => self.scope_of(id),
        }
    }

    /// All SLOs with the scope their metrics are drawn from: application
    /// SLOs first, then service SLOs, then resource SLOs.
    pub fn all_slos(&self) -> impl Iterator<Item = (&Slo, Scope)> {
        let app = self.app_slos.iter().map(|s| (s, Scope::Application));
        let svc =
            self.services.iter().flat_map(|svc| svc.slos.iter().map(move |s| (s, Scope::Concept(svc.kind.concept()))));
        let res = self.resources.iter().flat_map(|r| r.slos.iter().map(move |s| (s, Scope::Concept(r.kind.concept()))));
        app.chain(svc).chain(res)
    }

    /// Services an activity requires, in the order it lists them. Unknown
    /// service ids are skipped.
    pub fn services_for_activity(&self, activity_id: &str) -> Result<Vec<&ServiceSpec>, ModelError> {
        let activity =
            self.activity(activity_id).ok_or_else(|| ModelError::UnknownActivity(activity_id.to_string()))?;
        Ok(activity.required_services.iter().filter_map(|id| self.service(id)).collect())
    }
}

pub fn services_for_activity<'a>(doc: &'a SlaDocument, activity_id: &str) -> Result<Vec<&'a ServiceSpec>, ModelError> {
    doc.services_for_activity(activity_id)
}

pub fn resolve<'a>(doc: &'a SlaDocument, id: &str) -> Option<EntityRef<'a>> {
    doc.resolve(id)
}
