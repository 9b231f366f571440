use std::fmt::Write;

use crate::model::{ConfigParam, Literal, MetricConstraint, SlaDocument, Slo};
use crate::value::{format_decimal, format_rounded};

use super::lexer::quote;

pub(crate) fn literal_text(lit: &Literal) -> String {
    match lit {
        Literal::Number(n) => format_decimal(n).unwrap_or_else(|| format_rounded(n, 12)),
        Literal::Bool(b) => b.to_string(),
        Literal::Str(s) => quote(s),
    }
}

fn with_unit(mut out: String, unit: &Option<String>) -> String {
    if let Some(u) = unit {
        out.push(' ');
        out.push_str(u);
    }
    out
}

fn constraint_line(c: &MetricConstraint) -> String {
    with_unit(format!("{} {} {}", c.metric, c.comparator, literal_text(&c.value)), &c.unit)
}

fn config_line(p: &ConfigParam) -> String {
    with_unit(format!("{} = {}", p.term, literal_text(&p.value)), &p.unit)
}

fn block(out: &mut String, head: &str, lines: impl Iterator<Item = String>) {
    let lines: Vec<String> = lines.collect();
    if lines.is_empty() {
        writeln!(out, "{head} {{}}").unwrap();
        return;
    }
    writeln!(out, "{head} {{").unwrap();
    for l in lines {
        writeln!(out, "  {l}").unwrap();
    }
    out.push_str("}\n");
}

fn slo(out: &mut String, s: &Slo) {
    out.push('\n');
    block(out, &format!("slo {} on {}", s.id, s.target.as_str()), s.constraints.iter().map(constraint_line));
}

/// Canonical text for `doc`. Parsing the result gives back an equal document.
pub fn serialize(doc: &SlaDocument) -> String {
    let mut out = String::new();
    let h = &doc.header;
    block(
        &mut out,
        &format!("sla {}", quote(&h.title)),
        [
            format!("id = {}", h.id),
            format!("application = {}", h.application_type),
            format!("starts = {}", h.start_date.format("%Y-%m-%d")),
            format!("ends = {}", h.end_date.format("%Y-%m-%d")),
        ]
        .into_iter(),
    );

    for p in &doc.parties {
        out.push('\n');
        block(
            &mut out,
            &format!("party {}", p.id),
            [format!("name = {}", quote(&p.name)), format!("role = {}", p.role)].into_iter(),
        );
    }

    for s in &doc.app_slos {
        slo(&mut out, s);
    }
    for s in doc.services.iter().flat_map(|s| &s.slos) {
        slo(&mut out, s);
    }
    for s in doc.resources.iter().flat_map(|r| &r.slos) {
        slo(&mut out, s);
    }

    if !doc.activities.is_empty() {
        out.push('\n');
        for a in &doc.activities {
            writeln!(out, "activity {} : {} requires {}", a.id, a.kind, a.required_services.join(", ")).unwrap();
        }
    }

    for s in &doc.services {
        out.push('\n');
        block(
            &mut out,
            &format!("service {} : {} on {}", s.id, s.kind, s.deployed_on),
            s.config.iter().map(config_line),
        );
    }
    for r in &doc.resources {
        out.push('\n');
        block(&mut out, &format!("resource {} : {}", r.id, r.kind), r.config.iter().map(config_line));
    }
    out
}
