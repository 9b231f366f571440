//! Look up vocabulary terms, resolve aliases and extend the catalog with an
//! overlay.
//!
//! ```text
//! cargo run --example catalog
//! ```

use iot_sla::vocabulary::{Catalog, Concept, Scope, TermKind};

fn main() {
    let mut catalog = Catalog::builtin();
    println!("{} concept terms in the built-in catalog", catalog.len());

    let rate = catalog.lookup("sampling_rate", Concept::Sensing).expect("builtin term");
    println!("{} [{}]: {}", rate.term, rate.canonical_unit.name(), rate.description);

    // aliases resolve to the canonical entry
    let vcpus = catalog.lookup("no_of_vcpus", Concept::CloudResource).unwrap();
    println!("no_of_vcpus -> {}", vcpus.term);

    // the same word may mean different things under different concepts
    assert!(catalog.lookup("sampling_rate", Concept::StreamProcessing).is_none());

    let metrics = catalog.applicable_terms(Concept::Networking, Some(TermKind::QosMetric));
    let names: Vec<_> = metrics.iter().map(|e| e.term.as_str()).collect();
    println!("networking metrics: {}", names.join(", "));

    let overlay = r#"[{
        "term": "battery_temperature", "concept": "iot_device", "label": "Battery temperature",
        "description": "Temperature of the device battery pack.", "value_type": "numeric",
        "canonical_unit": "dimensionless", "direction": "lower_is_better", "aggregator": "max",
        "kind": "qos_metric", "aliases": []
    }]"#;
    let added = catalog.merge_overlay(overlay).expect("valid overlay");
    println!(
        "overlay added {added} term(s); iot_device now has {}",
        catalog.terms_in(Scope::Concept(Concept::IotDevice), None).len()
    );
}
