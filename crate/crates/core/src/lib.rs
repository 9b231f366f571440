//! Service-level agreements for IoT applications.
//!
//! A small text language for end-to-end agreements (parties, SLOs,
//! workflow activities, services and infrastructure), a QoS vocabulary
//! catalog, a semantic validator, a provider-offer matcher and a
//! telemetry-driven SLO monitor.
//!
//! ```
//! use iot_sla::{parser, validator, vocabulary::Catalog};
//!
//! let doc = parser::parse(include_str!("../fixtures/rhms.sla")).unwrap();
//! let diagnostics = validator::validate(&doc, &Catalog::builtin());
//! assert!(diagnostics.is_empty());
//! ```

pub mod cli;
pub mod constraints;
pub mod matcher;
pub mod model;
pub mod monitor;
pub mod parser;
pub mod span;
pub mod units;
pub mod validator;
pub mod value;
pub mod vocabulary;

pub use model::SlaDocument;
pub use vocabulary::{load_builtin_catalog, Catalog};

/// `[a-z][a-z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut bytes = s.bytes();
    matches!(bytes.next(), Some(b'a'..=b'z')) && bytes.all(|b| matches!(b, b'a'..=b'z' | b'0'..=b'9' | b'_'))
}
