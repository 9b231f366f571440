//! Parse an agreement, print it in canonical form and as interchange JSON,
//! and show what a syntax error looks like.
//!
//! ```text
//! cargo run --example parse_and_format
//! ```

use iot_sla::parser::{from_interchange, parse, serialize, to_interchange};

const MESSY: &str = r#"
sla "Smart parking"{id=parking application=smart_city starts=2025-05-01 ends=2025-11-01}
party city{name="City" role=consumer} party telco{name="Telco" role=provider}
slo quick on app{end_to_end_response_time<=3 time_unit}
activity spot : capture_eoi requires cams
service cams : sensing on poles { sampling_rate = 0.5 Hz }
resource poles : iot_device {}
"#;

fn main() {
    let doc = parse(MESSY).expect("valid agreement");
    let canonical = serialize(&doc);
    print!("{canonical}");

    // canonical text is a fixed point
    assert_eq!(serialize(&parse(&canonical).unwrap()), canonical);

    let json = to_interchange(&doc);
    println!("\ninterchange form is {} bytes", json.len());
    assert_eq!(from_interchange(&json).unwrap(), doc);

    let broken = MESSY.replace("<=3", "<=");
    let err = parse(&broken).unwrap_err();
    println!("\nbroken input -> {err}");
}
