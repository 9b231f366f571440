//! The `iot-sla` command line.
//!
//! Exit codes: 0 success, 1 error diagnostics or SLO violations, 2 usage
//! or I/O failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::matcher::{rank_offers, render_table, reports_to_json, ProviderOffer, Weights};
use crate::model::{MetricConstraint, SlaDocument};
use crate::monitor::{read_telemetry, render_summary, StreamingMonitor, ViolationEvent, Window, DEFAULT_WINDOW};
use crate::parser::{from_interchange, parse, serialize};
use crate::validator::{diagnostics_to_json, has_errors, validate, Diagnostic, Severity};
use crate::vocabulary::{Catalog, Concept, Scope, VocabularyEntry};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "iot-sla", version, about = "Specify, validate, match and monitor IoT service-level agreements")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// JSON vocabulary overlay merged into the built-in catalog.
    #[arg(long, global = true, value_name = "PATH")]
    pub catalog: Option<PathBuf>,
    /// Treat warnings as errors.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an agreement against the conceptual model and the vocabulary.
    Validate {
        path: PathBuf,
        #[arg(long)]
        verbose: bool,
    },
    /// Browse the QoS vocabulary.
    Vocab {
        #[command(subcommand)]
        action: VocabAction,
    },
    /// Rank provider offers against an agreement's requirements.
    Match {
        request: PathBuf,
        #[arg(required = true)]
        offers: Vec<PathBuf>,
        #[arg(long, value_name = "PATH")]
        weights: Option<PathBuf>,
    },
    /// Evaluate SLOs over a telemetry file (`-` for stdin).
    Monitor {
        sla: PathBuf,
        telemetry: String,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: u64,
    },
    /// Rewrite an agreement in canonical form.
    Fmt {
        path: PathBuf,
        #[arg(long)]
        check: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum VocabAction {
    List {
        #[arg(long)]
        concept: Option<String>,
    },
    Show {
        term: String,
        concept: String,
    },
    Export {
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// Standard streams, swappable for tests.
pub struct Io<'a> {
    pub stdin: &'a mut dyn BufRead,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

macro_rules! out {
    ($io:expr, $($arg:tt)*) => { let _ = writeln!($io.stdout, $($arg)*); };
}
macro_rules! err {
    ($io:expr, $($arg:tt)*) => { let _ = writeln!($io.stderr, $($arg)*); };
}

/// Runs the process with real standard streams.
pub fn main_with_std() -> i32 {
    let stdin = std::io::stdin();
    let mut stdin = stdin.lock();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    run(std::env::args_os(), &mut Io { stdin: &mut stdin, stdout: &mut stdout, stderr: &mut stderr })
}

pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(io.stderr, "{text}");
            } else {
                let _ = write!(io.stdout, "{text}");
            }
            return code;
        }
    };
    let catalog = match load_catalog(cli.catalog.as_deref()) {
        Ok(c) => c,
        Err(msg) => {
            err!(io, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let ctx = Ctx { json: cli.json, strict: cli.strict, catalog };
    match cli.command {
        Command::Validate { path, verbose } => ctx.validate(&path, verbose, io),
        Command::Vocab { action } => ctx.vocab(action, io),
        Command::Match { request, offers, weights } => ctx.match_offers(&request, &offers, weights.as_deref(), io),
        Command::Monitor { sla, telemetry, window } => ctx.monitor(&sla, &telemetry, window, io),
        Command::Fmt { path, check } => fmt(&path, check, io),
    }
}

fn load_catalog(overlay: Option<&Path>) -> Result<Catalog, String> {
    let mut catalog = Catalog::builtin();
    if let Some(path) = overlay {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        catalog.merge_overlay(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(catalog)
}

enum Load {
    Doc(SlaDocument),
    /// The file was read but is not a well-formed agreement.
    Invalid(String),
    Io(String),
}

/// Reads a `.sla` file, or a `.json` file in the interchange form.
fn load_document(path: &Path) -> Load {
    let name = path.display().to_string();
    let text = match fs::read(path) {
        Ok(b) => b,
        Err(e) => return Load::Io(format!("{name}: {e}")),
    };
    if path.extension().is_some_and(|e| e == "json") {
        let Ok(text) = String::from_utf8(text) else {
            return Load::Invalid(format!("{name}: error[parse]: invalid UTF-8"));
        };
        return match from_interchange(&text) {
            Ok(d) => Load::Doc(d),
            Err(e) => Load::Invalid(format!("{name}: error[parse]: {e}")),
        };
    }
    match crate::parser::parse_bytes(&text) {
        Ok(d) => Load::Doc(d),
        Err(e) => Load::Invalid(format!("{name}:{}:{}: error[parse]: {}", e.line, e.column, message_of(&e))),
    }
}

fn message_of(e: &crate::parser::ParseError) -> String {
    if e.expected.is_empty() {
        e.message.clone()
    } else {
        format!("{} (expected {})", e.message, e.expected.join(" or "))
    }
}

struct Ctx {
    json: bool,
    strict: bool,
    catalog: Catalog,
}

impl Ctx {
    fn failing(&self, diags: &[Diagnostic]) -> bool {
        has_errors(diags) || (self.strict && !diags.is_empty())
    }

    /// Loads and validates, or gives the exit code to stop with.
    fn checked_document(&self, path: &Path, io: &mut Io<'_>) -> Result<SlaDocument, i32> {
        let doc = match load_document(path) {
            Load::Doc(d) => d,
            Load::Invalid(msg) => {
                err!(io, "{msg}");
                return Err(EXIT_FAIL);
            }
            Load::Io(msg) => {
                err!(io, "error: {msg}");
                return Err(EXIT_USAGE);
            }
        };
        let diags = validate(&doc, &self.catalog);
        if has_errors(&diags) {
            for d in &diags {
                err!(io, "{}", d.render(&path.display().to_string()));
            }
            return Err(EXIT_FAIL);
        }
        Ok(doc)
    }

    fn validate(&self, path: &Path, verbose: bool, io: &mut Io<'_>) -> i32 {
        let file = path.display().to_string();
        let doc = match load_document(path) {
            Load::Doc(d) => d,
            Load::Invalid(msg) => {
                if self.json {
                    out!(
                        io,
                        "{}",
                        json!([{"code": "parse", "severity": "error", "message": msg, "subject": null, "span": null}])
                    );
                } else {
                    out!(io, "{msg}");
                }
                return EXIT_FAIL;
            }
            Load::Io(msg) => {
                err!(io, "error: {msg}");
                return EXIT_USAGE;
            }
        };
        let diags = validate(&doc, &self.catalog);
        if self.json {
            out!(io, "{}", serde_json::to_string_pretty(&diagnostics_to_json(&diags)).expect("serializable"));
        } else {
            for d in &diags {
                out!(io, "{}", d.render(&file));
            }
            if verbose {
                let errors = diags.iter().filter(|d| d.severity == Severity::Error).count();
                out!(io, "{file}: {errors} error(s), {} warning(s)", diags.len() - errors);
            }
        }
        if self.failing(&diags) {
            EXIT_FAIL
        } else {
            EXIT_OK
        }
    }

    fn vocab(&self, action: VocabAction, io: &mut Io<'_>) -> i32 {
        match action {
            VocabAction::List { concept } => {
                let scopes: Vec<Scope> = match concept {
                    Some(c) => match c.parse::<Scope>() {
                        Ok(s) => vec![s],
                        Err(e) => {
                            err!(io, "error: {e}");
                            return EXIT_USAGE;
                        }
                    },
                    None => {
                        let mut v: Vec<Scope> = Concept::ALL.iter().map(|c| Scope::Concept(*c)).collect();
                        v.push(Scope::Application);
                        v
                    }
                };
                if self.json {
                    let entries: Vec<_> = scopes
                        .iter()
                        .flat_map(|s| self.catalog.terms_in(*s, None))
                        .map(VocabularyEntry::to_json)
                        .collect();
                    out!(io, "{}", serde_json::to_string_pretty(&entries).expect("serializable"));
                    return EXIT_OK;
                }
                for (i, scope) in scopes.iter().enumerate() {
                    if i > 0 {
                        out!(io, "");
                    }
                    out!(io, "{scope}:");
                    let entries = self.catalog.terms_in(*scope, None);
                    let tw = entries.iter().map(|e| e.term.len()).max().unwrap_or(0);
                    let uw = entries.iter().map(|e| e.canonical_unit.name().len()).max().unwrap_or(0);
                    let dw = entries.iter().map(|e| e.direction.as_str().len()).max().unwrap_or(0);
                    for e in entries {
                        let unit = e.canonical_unit.name();
                        let dir = e.direction.as_str();
                        out!(io, "  {:<tw$}  {unit:<uw$}  {dir:<dw$}  {}", e.term, e.kind);
                    }
                }
                EXIT_OK
            }
            VocabAction::Show { term, concept } => {
                let scope = match concept.parse::<Scope>() {
                    Ok(s) => s,
                    Err(e) => {
                        err!(io, "error: {e}");
                        return EXIT_USAGE;
                    }
                };
                let Some(e) = self.catalog.lookup_in(&term, scope) else {
                    err!(io, "error: no term `{term}` for {scope}");
                    return EXIT_USAGE;
                };
                if self.json {
                    out!(io, "{}", serde_json::to_string_pretty(&e.to_json()).expect("serializable"));
                } else {
                    out!(io, "term:        {}", e.term);
                    out!(io, "concept:     {}", e.scope);
                    out!(io, "label:       {}", e.label);
                    out!(io, "kind:        {}", e.kind);
                    out!(io, "value type:  {}", e.value_type);
                    out!(io, "unit:        {}", e.canonical_unit.name());
                    out!(io, "direction:   {}", e.direction);
                    out!(io, "aggregator:  {}", e.aggregator);
                    if !e.aliases.is_empty() {
                        out!(io, "aliases:     {}", e.aliases.join(", "));
                    }
                    out!(io, "description: {}", e.description);
                }
                EXIT_OK
            }
            VocabAction::Export { output } => {
                let text = self.catalog.export();
                match output {
                    Some(path) => {
                        if let Err(e) = fs::write(&path, text) {
                            err!(io, "error: {}: {e}", path.display());
                            return EXIT_USAGE;
                        }
                    }
                    None => {
                        let _ = write!(io.stdout, "{text}");
                    }
                }
                EXIT_OK
            }
        }
    }

    fn match_offers(&self, request: &Path, offer_paths: &[PathBuf], weights: Option<&Path>, io: &mut Io<'_>) -> i32 {
        let doc = match self.checked_document(request, io) {
            Ok(d) => d,
            Err(code) => return code,
        };
        let weights = match weights {
            None => Weights::uniform(),
            Some(p) => match fs::read_to_string(p)
                .map_err(|e| e.to_string())
                .and_then(|t| Weights::from_json(&t).map_err(|e| e.to_string()))
            {
                Ok(w) => w,
                Err(e) => {
                    err!(io, "error: {}: {e}", p.display());
                    return EXIT_USAGE;
                }
            },
        };
        let mut by_concept: BTreeMap<Concept, Vec<ProviderOffer>> = BTreeMap::new();
        for p in offer_paths {
            let offer = fs::read_to_string(p)
                .map_err(|e| e.to_string())
                .and_then(|t| ProviderOffer::from_json(&t, &self.catalog).map_err(|e| e.to_string()));
            match offer {
                Ok(o) => by_concept.entry(o.concept).or_default().push(o),
                Err(e) => {
                    err!(io, "error: {}: {e}", p.display());
                    return EXIT_USAGE;
                }
            }
        }
        let mut json_out = Vec::new();
        for (i, (concept, offers)) in by_concept.iter().enumerate() {
            let reqs = requirements_for(&doc, *concept);
            let reports = rank_offers(&reqs, offers, &weights, &self.catalog).expect("offers grouped by concept");
            if self.json {
                json_out.push(json!({"concept": concept.as_str(), "reports": reports_to_json(&reports)}));
            } else {
                if i > 0 {
                    out!(io, "");
                }
                out!(io, "{concept} ({} requirement(s))", reqs.len());
                let _ = write!(io.stdout, "{}", render_table(&reports));
            }
        }
        if self.json {
            out!(io, "{}", serde_json::to_string_pretty(&json_out).expect("serializable"));
        }
        EXIT_OK
    }

    fn monitor(&self, sla: &Path, telemetry: &str, width: u64, io: &mut Io<'_>) -> i32 {
        let doc = match self.checked_document(sla, io) {
            Ok(d) => d,
            Err(code) => return code,
        };
        let Ok(window) = Window::new(width) else {
            err!(io, "error: --window must be positive");
            return EXIT_USAGE;
        };
        let mut file_reader;
        let reader: &mut dyn BufRead = if telemetry == "-" {
            &mut *io.stdin
        } else {
            match fs::File::open(telemetry) {
                Ok(f) => {
                    file_reader = BufReader::new(f);
                    &mut file_reader
                }
                Err(e) => {
                    err!(io, "error: {telemetry}: {e}");
                    return EXIT_USAGE;
                }
            }
        };
        let mut monitor = StreamingMonitor::new(&doc, &self.catalog, window);
        let mut violations = 0usize;
        let json = self.json;
        let stdout = &mut *io.stdout;
        let mut emit = |events: Vec<ViolationEvent>, out: &mut dyn Write| {
            for ev in events {
                violations += 1;
                let _ = if json { writeln!(out, "{}", ev.to_json()) } else { writeln!(out, "violation: {ev}") };
            }
        };
        let read = read_telemetry(reader, |r| {
            let evs = monitor.push(&r);
            emit(evs, stdout);
        });
        let value_errors = match read {
            Ok(n) => n,
            Err(e) => {
                err!(io, "error: {telemetry}: {e}");
                return EXIT_USAGE;
            }
        };
        let (last, report) = monitor.finish();
        emit(last, io.stdout);
        for w in &report.warnings {
            err!(io, "warning: {w}");
        }
        if value_errors > 0 {
            err!(io, "warning: {value_errors} telemetry line(s) with unreadable values skipped");
        }
        if self.json {
            let summary: Vec<_> = report
                .summaries
                .iter()
                .map(|s| json!({"slo": s.slo_id, "target": s.target, "windows": s.windows_evaluated, "violations": s.violations}))
                .collect();
            let st = report.stats;
            out!(
                io,
                "{}",
                json!({"summary": summary, "records": {
                    "accepted": st.accepted, "unknown": st.unknown, "mistyped": st.mistyped, "late": st.late,
                    "unreadable": value_errors,
                }})
            );
        } else {
            let _ = write!(io.stdout, "{}", render_summary(&report));
        }
        if violations > 0 {
            EXIT_FAIL
        } else {
            EXIT_OK
        }
    }
}

/// Constraints from SLOs on services and resources of `concept`.
pub fn requirements_for(doc: &SlaDocument, concept: Concept) -> Vec<MetricConstraint> {
    doc.all_slos()
        .filter(|(_, scope)| *scope == Scope::Concept(concept))
        .flat_map(|(slo, _)| slo.constraints.iter().cloned())
        .collect()
}

fn fmt(path: &Path, check: bool, io: &mut Io<'_>) -> i32 {
    let name = path.display().to_string();
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            err!(io, "error: {name}: {e}");
            return EXIT_USAGE;
        }
    };
    let doc = match parse(&text) {
        Ok(d) => d,
        Err(e) => {
            err!(io, "{name}:{}:{}: error[parse]: {}", e.line, e.column, message_of(&e));
            return EXIT_USAGE;
        }
    };
    let canonical = serialize(&doc);
    if canonical == text {
        return EXIT_OK;
    }
    if check {
        out!(io, "{name}: not in canonical form");
        return EXIT_FAIL;
    }
    if let Err(e) = fs::write(path, canonical) {
        err!(io, "error: {name}: {e}");
        return EXIT_USAGE;
    }
    EXIT_OK
}
