mod common;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use iot_sla::model::SlaDocument;
use iot_sla::monitor::{
    data_completeness, end_to_end_response, evaluate_window, miss_ratio, monitor_records, StreamingMonitor,
    TelemetryRecord, Window,
};
use iot_sla::parser::parse;
use iot_sla::value::TypedValue;
use iot_sla::vocabulary::Scope;
use iot_sla::Catalog;

use common::{int, load_telemetry, pipeline_records, read_fixture};

fn rhms() -> SlaDocument {
    parse(&read_fixture("rhms.sla")).unwrap()
}

#[test]
fn calm_trace_has_no_violations() {
    let catalog = Catalog::builtin();
    let records = load_telemetry("calm.telemetry");
    let report = monitor_records(&rhms(), &catalog, Window::default(), &records);
    assert!(report.events.is_empty(), "{:?}", report.events);
    assert_eq!(report.stats.accepted, records.len());
    assert!(report.summaries.iter().all(|s| s.windows_evaluated == 3 && s.violations == 0));
}

#[test]
fn spike_is_caught_in_its_window() {
    let catalog = Catalog::builtin();
    let doc = rhms();
    let records = load_telemetry("spike.telemetry");
    let slo = &doc.service("ingest_svc").unwrap().slos[0];
    let events = evaluate_window(
        slo,
        Scope::Concept(iot_sla::vocabulary::Concept::Ingestion),
        &records,
        Window::default(),
        &catalog,
    );
    assert_eq!(events.len(), 1);
    let e = &events[0];
    assert_eq!((e.window_start, e.window_end), (60, 120));
    assert_eq!(e.slo_id, "ingest_latency");
    assert_eq!(e.observed, iot_sla::constraints::Scalar::Number(int(7)));

    // the same spike pushes the pipeline total over its bound too
    let report = monitor_records(&doc, &catalog, Window::default(), &records);
    let ids: Vec<_> = report.events.iter().map(|e| (e.slo_id.as_str(), e.window_start)).collect();
    assert_eq!(ids, vec![("ingest_latency", 60), ("urgent_response", 60)]);
}

#[test]
fn end_to_end_flags_only_slow_windows() {
    let catalog = Catalog::builtin();
    let maxima = [[1, 2, 1], [2, 3, 2], [1, 1, 1], [2, 3, 2], [2, 2, 1]];
    let records = pipeline_records(&maxima, 60);
    let e2e = end_to_end_response(&rhms(), &records, Window::default(), &catalog);
    let flagged: Vec<u64> = e2e.events.iter().map(|e| e.window_start).collect();
    assert_eq!(flagged, vec![60, 180]);
    let totals: Vec<(u64, BigRational)> =
        maxima.iter().enumerate().map(|(w, m)| (w as u64 * 60, int(m.iter().sum()))).collect();
    assert_eq!(e2e.observed, totals);
    assert!(e2e.warnings.is_empty(), "{:?}", e2e.warnings);
}

#[test]
fn a_silent_activity_counts_as_zero_and_warns() {
    let catalog = Catalog::builtin();
    let records: Vec<_> =
        pipeline_records(&[[2, 3, 2]], 60).into_iter().filter(|r| r.target_id != "stream_svc").collect();
    let e2e = end_to_end_response(&rhms(), &records, Window::default(), &catalog);
    assert_eq!(e2e.observed, vec![(0, int(5))]);
    assert!(e2e.events.is_empty());
    assert_eq!(e2e.warnings.len(), 1);
    assert!(
        e2e.warnings[0].message.contains("analyse_rt") || e2e.warnings[0].subject == "analyse_rt",
        "{:?}",
        e2e.warnings
    );
}

#[test]
fn record_order_does_not_matter() {
    let catalog = Catalog::builtin();
    let doc = rhms();
    let mut records = load_telemetry("spike.telemetry");
    records.extend(pipeline_records(&[[1, 1, 1], [2, 3, 2], [0, 0, 0]], 60).into_iter().map(|mut r| {
        r.timestamp += 180;
        r
    }));
    let base = monitor_records(&doc, &catalog, Window::default(), &records);
    assert!(!base.events.is_empty());
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..100 {
        records.shuffle(&mut rng);
        assert_eq!(monitor_records(&doc, &catalog, Window::default(), &records), base);
    }
}

#[test]
fn streaming_matches_batch_on_sorted_input() {
    let catalog = Catalog::builtin();
    let doc = rhms();
    let mut records = load_telemetry("spike.telemetry");
    records.sort_by_key(|r| r.timestamp);
    let mut m = StreamingMonitor::new(&doc, &catalog, Window::default());
    let mut streamed = Vec::new();
    for r in &records {
        streamed.extend(m.push(r));
    }
    let (tail, report) = m.finish();
    streamed.extend(tail);
    assert_eq!(streamed, report.events);
    assert_eq!(report, monitor_records(&doc, &catalog, Window::default(), &records));
}

#[test]
fn availability_state_feeds_availability() {
    let catalog = Catalog::builtin();
    let text = read_fixture("rhms.sla").replace(
        "resource cloud_vm : cloud_resource {",
        "slo vm_up on cloud_vm {\n  availability >= 75 percent\n}\n\nresource cloud_vm : cloud_resource {",
    );
    // entity SLOs are declared before activities
    let text = text.replacen("slo vm_up on cloud_vm {\n  availability >= 75 percent\n}\n\n", "", 1);
    let text = text
        .replace("activity capture", "slo vm_up on cloud_vm {\n  availability >= 75 percent\n}\n\nactivity capture");
    let doc = parse(&text).unwrap();
    let states = [true, true, false, true, true, false, false, true];
    let records: Vec<_> = states
        .iter()
        .enumerate()
        .map(|(i, up)| TelemetryRecord::new(i as u64 * 10, "cloud_vm", "availability_state", TypedValue::Boolean(*up)))
        .collect();
    // window 0: 6 samples, 4 up = 66.67 percent; window 1: 2 samples, 1 up = 50 percent
    let report = monitor_records(&doc, &catalog, Window::default(), &records);
    let vm: Vec<_> = report.events.iter().filter(|e| e.slo_id == "vm_up").collect();
    assert_eq!(vm.len(), 2);
    assert_eq!(vm[0].observed, iot_sla::constraints::Scalar::Number(int(200) / int(3)));
    assert_eq!(vm[1].observed, iot_sla::constraints::Scalar::Number(int(50)));
}

proptest! {
    #[test]
    fn windows_partition_time(ts in any::<u64>(), width in 1u64..10_000) {
        let w = Window::new(width).unwrap();
        let (start, end) = w.bounds(w.index(ts));
        prop_assert!(start <= ts);
        prop_assert!(ts < end || end == u64::MAX);
        if w.index(ts) > 0 {
            prop_assert!(w.bounds(w.index(ts) - 1).1 <= ts);
        }
    }

    #[test]
    fn ratios_stay_in_range(total in 1u64..1_000_000, part in any::<u64>()) {
        let used = part % (total + 1);
        for r in [data_completeness(used, total).unwrap(), miss_ratio(used, total).unwrap()] {
            prop_assert!(r >= int(0) && r <= int(100));
        }
        prop_assert!(data_completeness(total + 1, total).is_err());
        prop_assert!(miss_ratio(total + 1, total).is_err());
    }

    #[test]
    fn pipeline_total_covers_each_stage(
        maxima in prop::collection::vec(prop::array::uniform3(0i64..20), 1..6),
    ) {
        let catalog = Catalog::builtin();
        let e2e = end_to_end_response(&rhms(), &pipeline_records(&maxima, 60), Window::default(), &catalog);
        prop_assert_eq!(e2e.observed.len(), maxima.len());
        for ((_, total), row) in e2e.observed.iter().zip(&maxima) {
            prop_assert!(row.iter().all(|m| total >= &int(*m)));
            prop_assert_eq!(total, &int(row.iter().sum()));
        }
        let flagged = e2e.events.len();
        prop_assert_eq!(flagged, maxima.iter().filter(|r| r.iter().sum::<i64>() > 5).count());
    }
}

#[test]
fn zero_width_is_rejected() {
    assert!(Window::new(0).is_err());
}
