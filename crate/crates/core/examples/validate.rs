//! Validate the remote health monitoring agreement, then break it in a few
//! ways and print the diagnostics.
//!
//! ```text
//! cargo run --example validate
//! ```

use iot_sla::parser::parse;
use iot_sla::validator::validate;
use iot_sla::Catalog;

const RHMS: &str = include_str!("../fixtures/rhms.sla");

fn main() {
    let catalog = Catalog::builtin();
    let doc = parse(RHMS).unwrap();
    println!("rhms.sla: {} entities, {} diagnostics", doc.entity_count(), validate(&doc, &catalog).len());

    let broken = RHMS
        .replace("requires ingest_svc", "requires net_svc")
        .replace("ends = 2025-12-31", "ends = 2024-06-30")
        .replace("latency <= 5 time_unit", "latency <= 5 s");
    for d in validate(&parse(&broken).unwrap(), &catalog) {
        println!("{}", d.render("broken.sla"));
    }
}
