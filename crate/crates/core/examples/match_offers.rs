//! Rank cloud offers against the requirements of an agreement.
//!
//! ```text
//! cargo run --example match_offers
//! ```

use iot_sla::cli::requirements_for;
use iot_sla::matcher::{rank_offers, render_table, ProviderOffer, Weights};
use iot_sla::parser::parse;
use iot_sla::value::TypedValue;
use iot_sla::vocabulary::Concept;
use iot_sla::Catalog;

fn main() {
    let catalog = Catalog::builtin();
    let doc = parse(include_str!("../fixtures/request.sla")).unwrap();
    let reqs = requirements_for(&doc, Concept::CloudResource);

    let mut offers: Vec<ProviderOffer> = ["acme", "bolt", "cirrus"]
        .iter()
        .map(|name| {
            let text =
                std::fs::read_to_string(format!("{}/fixtures/offers/{name}.offer.json", env!("CARGO_MANIFEST_DIR")))
                    .unwrap();
            ProviderOffer::from_json(&text, &catalog).unwrap()
        })
        .collect();

    // offers can also be built in code
    offers.push(
        ProviderOffer::new("dyn", Concept::CloudResource)
            .with("availability", TypedValue::number("99.99", Some("percent")), &catalog)
            .unwrap()
            .with("throughput", TypedValue::number("1", Some("GBps")), &catalog)
            .unwrap(),
    );

    let uniform = rank_offers(&reqs, &offers, &Weights::uniform(), &catalog).unwrap();
    print!("{}", render_table(&uniform));

    let weights = Weights::from_json(r#"{"throughput": 4}"#).unwrap();
    println!();
    print!("{}", render_table(&rank_offers(&reqs, &offers, &weights, &catalog).unwrap()));
}
