//! QoS metric and configuration-parameter vocabulary for IoT SLAs.
//!
//! The built-in catalog holds one entry per (term, concept) pair across the
//! ten concepts an agreement can talk about: three infrastructure layers and
//! seven service kinds. A small separate set covers application-level SLOs.

mod builtin;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

use crate::units::Unit;

macro_rules! string_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl ::std::fmt::Display for $name {
            fn fmt(&self, f: &mut ::std::fmt::Formatter<'_>) -> ::std::fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl ::std::str::FromStr for $name {
            type Err = $crate::vocabulary::UnknownVariant;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err($crate::vocabulary::UnknownVariant { kind: stringify!($name), value: s.to_string() }),
                }
            }
        }
    };
}
pub(crate) use string_enum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {kind} `{value}`")]
pub struct UnknownVariant {
    pub kind: &'static str,
    pub value: String,
}

string_enum! {
    /// What a vocabulary entry applies to.
    Concept {
        IotDevice => "iot_device",
        EdgeResource => "edge_resource",
        CloudResource => "cloud_resource",
        Sensing => "sensing",
        Networking => "networking",
        Ingestion => "ingestion",
        StreamProcessing => "stream_processing",
        BatchProcessing => "batch_processing",
        MachineLearning => "machine_learning",
        Database => "database",
    }
}

string_enum! {
    ValueType {
        Numeric => "numeric",
        Boolean => "boolean",
        Enumerated => "enumerated",
        Text => "text",
    }
}

string_enum! {
    Direction {
        HigherIsBetter => "higher_is_better",
        LowerIsBetter => "lower_is_better",
        TargetEquality => "target_equality",
        None => "none",
    }
}

string_enum! {
    /// How samples of a metric are folded within one evaluation window.
    Aggregator {
        Mean => "mean",
        Max => "max",
        Min => "min",
        Ratio => "ratio",
        Sum => "sum",
        None => "none",
    }
}

string_enum! {
    TermKind {
        QosMetric => "qos_metric",
        ConfigurationParameter => "configuration_parameter",
    }
}

/// Lookup scope: one of the ten concepts, or the application as a whole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scope {
    Application,
    Concept(Concept),
}

impl Scope {
    pub fn as_str(self) -> &'static str {
        match self {
            Scope::Application => "application",
            Scope::Concept(c) => c.as_str(),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scope {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "application" {
            Ok(Scope::Application)
        } else {
            s.parse().map(Scope::Concept).map_err(|_| UnknownVariant { kind: "concept", value: s.to_string() })
        }
    }
}

impl From<Concept> for Scope {
    fn from(c: Concept) -> Self {
        Scope::Concept(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabularyEntry {
    pub term: String,
    pub scope: Scope,
    /// Heading as it appears in the source table.
    pub label: String,
    pub description: String,
    pub value_type: ValueType,
    pub canonical_unit: Unit,
    pub direction: Direction,
    pub aggregator: Aggregator,
    pub kind: TermKind,
    pub aliases: Vec<String>,
}

impl VocabularyEntry {
    pub fn concept(&self) -> Option<Concept> {
        match self.scope {
            Scope::Concept(c) => Some(c),
            Scope::Application => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        self.value_type == ValueType::Numeric
    }

    pub fn to_json(&self) -> Value {
        json!({
            "term": self.term,
            "concept": self.scope.as_str(),
            "label": self.label,
            "description": self.description,
            "value_type": self.value_type.as_str(),
            "canonical_unit": self.canonical_unit.name(),
            "direction": self.direction.as_str(),
            "aggregator": self.aggregator.as_str(),
            "kind": self.kind.as_str(),
            "aliases": self.aliases,
        })
    }

    pub fn from_json(value: &Value, path: &str) -> Result<Self, CatalogError> {
        let obj = value.as_object().ok_or_else(|| CatalogError::schema(path, "expected an object"))?;
        let field = |name: &str| -> Result<&str, CatalogError> {
            obj.get(name)
                .and_then(Value::as_str)
                .ok_or_else(|| CatalogError::schema(&format!("{path}/{name}"), "expected a string"))
        };
        let parse_enum = |name: &str| -> Result<String, CatalogError> { field(name).map(str::to_string) };
        let bad = |name: &str, e: UnknownVariant| CatalogError::schema(&format!("{path}/{name}"), &e.to_string());

        let term = field("term")?.to_string();
        let scope: Scope = parse_enum("concept")?.parse().map_err(|e| bad("concept", e))?;
        let value_type: ValueType = parse_enum("value_type")?.parse().map_err(|e| bad("value_type", e))?;
        let unit_name = obj.get("canonical_unit").and_then(Value::as_str).unwrap_or("dimensionless");
        let canonical_unit = Unit::parse(unit_name).ok_or_else(|| {
            CatalogError::schema(&format!("{path}/canonical_unit"), &format!("unknown unit `{unit_name}`"))
        })?;
        let direction: Direction = parse_enum("direction")?.parse().map_err(|e| bad("direction", e))?;
        let aggregator: Aggregator = parse_enum("aggregator")?.parse().map_err(|e| bad("aggregator", e))?;
        let kind: TermKind = parse_enum("kind")?.parse().map_err(|e| bad("kind", e))?;
        let aliases = match obj.get("aliases") {
            None | Some(Value::Null) => Vec::new(),
            Some(Value::Array(items)) => items
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    a.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| CatalogError::schema(&format!("{path}/aliases/{i}"), "expected a string"))
                })
                .collect::<Result<_, _>>()?,
            Some(_) => return Err(CatalogError::schema(&format!("{path}/aliases"), "expected an array")),
        };
        Ok(VocabularyEntry {
            label: obj.get("label").and_then(Value::as_str).unwrap_or(&term).to_string(),
            description: obj.get("description").and_then(Value::as_str).unwrap_or_default().to_string(),
            term,
            scope,
            value_type,
            canonical_unit,
            direction,
            aggregator,
            kind,
            aliases,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("alias `{alias}` of {term}/{scope} collides with an existing term or alias")]
    AliasCollision { alias: String, term: String, scope: Scope },
    #[error("boolean entry {term}/{scope} must use direction target_equality and aggregator none")]
    BooleanShape { term: String, scope: Scope },
    #[error("invalid term identifier `{0}`")]
    BadTerm(String),
    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("invalid JSON: {0}")]
    Json(String),
}

impl CatalogError {
    fn schema(pointer: &str, message: &str) -> Self {
        CatalogError::Schema {
            pointer: if pointer.is_empty() { "/".to_string() } else { pointer.to_string() },
            message: message.to_string(),
        }
    }
}

/// Immutable-after-build set of vocabulary entries.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    entries: Vec<VocabularyEntry>,
    by_key: HashMap<(String, Scope), usize>,
    by_alias: HashMap<String, usize>,
}

/// The catalog compiled into the crate.
pub fn load_builtin_catalog() -> Catalog {
    Catalog::builtin()
}

impl Catalog {
    pub fn builtin() -> Catalog {
        let mut catalog = Catalog::default();
        let rows = builtin::rows()
            .into_iter()
            .map(|(c, rows)| (Scope::Concept(c), rows))
            .chain(std::iter::once((Scope::Application, builtin::APPLICATION)));
        for (scope, rows) in rows {
            for row in rows {
                let entry = VocabularyEntry {
                    term: row.term.to_string(),
                    scope,
                    label: row.label.to_string(),
                    description: row.description.to_string(),
                    value_type: row.value_type,
                    canonical_unit: Unit::parse(row.unit).expect("built-in units exist"),
                    direction: row.direction,
                    aggregator: row.aggregator,
                    kind: row.kind,
                    aliases: row.aliases.iter().map(|a| a.to_string()).collect(),
                };
                catalog.insert(entry).expect("built-in catalog is consistent");
            }
        }
        catalog
    }

    /// Adds an entry, replacing any existing entry with the same term and
    /// scope.
    pub fn insert(&mut self, entry: VocabularyEntry) -> Result<(), CatalogError> {
        if !crate::is_identifier(&entry.term) {
            return Err(CatalogError::BadTerm(entry.term));
        }
        if entry.value_type == ValueType::Boolean
            && (entry.direction != Direction::TargetEquality || entry.aggregator != Aggregator::None)
        {
            return Err(CatalogError::BooleanShape { term: entry.term, scope: entry.scope });
        }
        let key = (entry.term.clone(), entry.scope);
        let replacing = self.by_key.get(&key).copied();
        for alias in &entry.aliases {
            let owned_by_self = replacing.is_some_and(|i| self.by_alias.get(alias) == Some(&i));
            let collides = (self.by_alias.contains_key(alias) && !owned_by_self)
                || self.entries.iter().any(|e| &e.term == alias)
                || entry.aliases.iter().filter(|a| *a == alias).count() > 1
                || alias == &entry.term;
            if collides {
                return Err(CatalogError::AliasCollision {
                    alias: alias.clone(),
                    term: entry.term.clone(),
                    scope: entry.scope,
                });
            }
        }
        if self.by_alias.contains_key(&entry.term) {
            return Err(CatalogError::AliasCollision {
                alias: entry.term.clone(),
                term: entry.term.clone(),
                scope: entry.scope,
            });
        }
        match replacing {
            Some(i) => {
                self.by_alias.retain(|_, idx| *idx != i);
                for alias in &entry.aliases {
                    self.by_alias.insert(alias.clone(), i);
                }
                self.entries[i] = entry;
            }
            None => {
                let i = self.entries.len();
                for alias in &entry.aliases {
                    self.by_alias.insert(alias.clone(), i);
                }
                self.by_key.insert(key, i);
                self.entries.push(entry);
            }
        }
        Ok(())
    }

    /// Entry for `term` (or one of its aliases) under `concept`.
    pub fn lookup(&self, term: &str, concept: Concept) -> Option<&VocabularyEntry> {
        self.lookup_in(term, Scope::Concept(concept))
    }

    pub fn lookup_in(&self, term: &str, scope: Scope) -> Option<&VocabularyEntry> {
        if let Some(&i) = self.by_key.get(&(term.to_string(), scope)) {
            return Some(&self.entries[i]);
        }
        self.by_alias.get(term).map(|&i| &self.entries[i]).filter(|e| e.scope == scope)
    }

    /// All entries for `concept`, optionally restricted to one kind, sorted
    /// by term.
    pub fn applicable_terms(&self, concept: Concept, kind: Option<TermKind>) -> Vec<&VocabularyEntry> {
        self.terms_in(Scope::Concept(concept), kind)
    }

    pub fn terms_in(&self, scope: Scope, kind: Option<TermKind>) -> Vec<&VocabularyEntry> {
        let mut out: Vec<_> =
            self.entries.iter().filter(|e| e.scope == scope && kind.is_none_or(|k| e.kind == k)).collect();
        out.sort_by(|a, b| a.term.cmp(&b.term));
        out
    }

    /// Entries attached to one of the ten concepts (application-level terms
    /// excluded).
    pub fn concept_entries(&self) -> impl Iterator<Item = &VocabularyEntry> {
        self.entries.iter().filter(|e| e.scope != Scope::Application)
    }

    pub fn all_entries(&self) -> &[VocabularyEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.concept_entries().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All entries sorted by (concept, term), application terms first.
    pub fn sorted_entries(&self) -> Vec<&VocabularyEntry> {
        let mut out: Vec<_> = self.entries.iter().collect();
        out.sort_by(|a, b| (a.scope.as_str(), &a.term).cmp(&(b.scope.as_str(), &b.term)));
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.sorted_entries().into_iter().map(VocabularyEntry::to_json).collect())
    }

    /// Pretty-printed export, stable across runs.
    pub fn export(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("catalog serializes");
        s.push('\n');
        s
    }

    /// Merges a JSON array of entries; an entry with an existing
    /// (term, concept) replaces it.
    pub fn merge_overlay(&mut self, json_text: &str) -> Result<usize, CatalogError> {
        let value: Value = serde_json::from_str(json_text).map_err(|e| CatalogError::Json(e.to_string()))?;
        let items = value.as_array().ok_or_else(|| CatalogError::schema("", "expected an array of entries"))?;
        let parsed = items
            .iter()
            .enumerate()
            .map(|(i, v)| VocabularyEntry::from_json(v, &format!("/{i}")))
            .collect::<Result<Vec<_>, _>>()?;
        let n = parsed.len();
        for entry in parsed {
            self.insert(entry)?;
        }
        Ok(n)
    }
}
