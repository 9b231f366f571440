//! Replay telemetry against an agreement: per-service SLOs, the end-to-end
//! response time of the pipeline, and the stream-processing ratios.
//!
//! ```text
//! cargo run --example monitor_telemetry
//! ```

use iot_sla::monitor::{data_completeness, miss_ratio, monitor_records, read_telemetry, render_summary, Window};
use iot_sla::parser::parse;
use iot_sla::value::format_rational;
use iot_sla::Catalog;

fn main() {
    let catalog = Catalog::builtin();
    let doc = parse(include_str!("../fixtures/rhms.sla")).unwrap();

    let mut records = Vec::new();
    read_telemetry(include_str!("../fixtures/spike.telemetry").as_bytes(), |r| records.push(r)).unwrap();

    let report = monitor_records(&doc, &catalog, Window::default(), &records);
    for ev in &report.events {
        println!("{ev}");
    }
    for (start, total) in &report.end_to_end {
        println!("window {start}: end-to-end {}", format_rational(total));
    }
    print!("{}", render_summary(&report));

    println!("completeness 15/30 = {}%", format_rational(&data_completeness(15, 30).unwrap()));
    println!("miss ratio 2/10 = {}%", format_rational(&miss_ratio(2, 10).unwrap()));
}
