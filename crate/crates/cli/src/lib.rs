//! The four pipeline commands behind the `kaos2b` binary.
//!
//! Each `run_*` function is one command: it prints its report (to stdout)
//! and its errors (to stderr) and returns the process exit code. The codes
//! are a stable contract:
//!
//! * `0` — success;
//! * `1` — semantic rejection: constraint violations, a rejected delta
//!   batch, or warnings under `--strict`;
//! * `2` — operational failure: missing paths, unreadable or unparseable
//!   files, bad configuration.
//!
//! Only [`run_backprop`] writes into the workspace, and only after its
//! whole delta batch has been applied and the enriched models have passed
//! validation; every other command treats the workspace as read-only.

use kaos2b_core::backprop::backprop_batch;
use kaos2b_core::bsystem::{parse_deltas, print_component};
use kaos2b_core::domain::{validate_chain, DomainModel, RefinementChain, ValidationReport};
use kaos2b_core::frontend::{load_workspace, save_workspace};
use kaos2b_core::translate::translate_chain;
use serde_json::json;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::{env, fs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

/// Report format, selected by the `KAOS2B_FORMAT` environment variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl Format {
    /// Parse the value of `KAOS2B_FORMAT`; `None` (unset) means text.
    pub fn parse(value: Option<&str>) -> Result<Format, String> {
        match value.map(str::to_ascii_lowercase).as_deref() {
            None | Some("" | "text") => Ok(Format::Text),
            Some("json") => Ok(Format::Json),
            Some(other) => {
                Err(format!("KAOS2B_FORMAT must be 'text' or 'json', not '{other}'"))
            }
        }
    }

    pub fn from_env() -> Result<Format, String> {
        Format::parse(env::var("KAOS2B_FORMAT").ok().as_deref())
    }
}

/// Everything a command invocation needs.
pub struct RunConfig {
    /// Directory of `.dom` model files.
    pub workspace: PathBuf,
    /// Where generated files go; the workspace itself when absent.
    pub out: Option<PathBuf>,
    /// Delta file for `backprop`.
    pub delta: Option<PathBuf>,
    /// Treat warnings as errors.
    pub strict: bool,
    pub format: Format,
}

impl RunConfig {
    fn out_dir(&self) -> &Path {
        self.out.as_deref().unwrap_or(&self.workspace)
    }
}

fn fail(message: impl std::fmt::Display) -> i32 {
    eprintln!("error: {message}");
    EXIT_FAILURE
}

/// Load the workspace, mapping every loading problem — I/O, parse errors,
/// misnamed files, models that do not form a chain — to exit code 2: a
/// workspace that cannot even be loaded is an operational failure, not a
/// semantic verdict about its models.
fn load(cfg: &RunConfig) -> Result<RefinementChain, i32> {
    load_workspace(&cfg.workspace).map_err(fail)
}

fn print_report(format: Format, models: usize, report: &ValidationReport) {
    match format {
        Format::Json => {
            let status = if report.is_valid() { "ok" } else { "violations" };
            println!(
                "{}",
                json!({ "status": status, "models": models, "violations": report.violations })
            );
        }
        Format::Text if report.is_valid() => {
            println!("ok: {models} model(s), no violations");
        }
        Format::Text => {
            for id in report.constraints() {
                let group: Vec<_> =
                    report.violations.iter().filter(|v| v.constraint == id).collect();
                println!("{id}: {} violation(s)", group.len());
                for v in group {
                    println!("    {}: {}", v.subject, v.message);
                }
            }
        }
    }
}

fn print_files(format: Format, files: &[String]) {
    match format {
        Format::Text => {
            for f in files {
                println!("wrote {f}");
            }
        }
        Format::Json => println!("{}", json!({ "status": "ok", "files": files })),
    }
}

/// Validate every model of the workspace and report the violations,
/// grouped by constraint.
pub fn run_check(cfg: &RunConfig) -> i32 {
    let chain = match load(cfg) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let report = validate_chain(&chain);
    print_report(cfg.format, chain.models().len(), &report);
    if report.is_valid() {
        EXIT_OK
    } else {
        EXIT_REJECTED
    }
}

/// Check the workspace, then emit one `.bsys` component file per model.
pub fn run_translate(cfg: &RunConfig) -> i32 {
    let chain = match load(cfg) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let report = validate_chain(&chain);
    if !report.is_valid() {
        print_report(cfg.format, chain.models().len(), &report);
        return EXIT_REJECTED;
    }
    let translation = match translate_chain(&chain) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    for w in &translation.warnings {
        eprintln!("{w}");
    }
    if cfg.strict && !translation.warnings.is_empty() {
        eprintln!(
            "error: {} warning(s) treated as errors (--strict); nothing written",
            translation.warnings.len()
        );
        return EXIT_REJECTED;
    }
    let out = cfg.out_dir();
    if let Err(e) = fs::create_dir_all(out) {
        return fail(format_args!("{}: {e}", out.display()));
    }
    let mut files = Vec::new();
    for component in &translation.components {
        let text = match print_component(component) {
            Ok(t) => t,
            Err(e) => return fail(e),
        };
        let path = out.join(format!("{}.bsys", component.name));
        if let Err(e) = fs::write(&path, text) {
            return fail(format_args!("{}: {e}", path.display()));
        }
        files.push(path.display().to_string());
    }
    print_files(cfg.format, &files);
    EXIT_OK
}

/// Apply a delta file to the workspace models, all or nothing, and rewrite
/// the `.dom` files on success.
pub fn run_backprop(cfg: &RunConfig) -> i32 {
    let Some(delta_path) = cfg.delta.as_deref() else {
        return fail("backprop needs a delta file: --delta FILE");
    };
    let text = match fs::read_to_string(delta_path) {
        Ok(t) => t,
        Err(e) => return fail(format_args!("{}: {e}", delta_path.display())),
    };
    let deltas = match parse_deltas(&text) {
        Ok(d) => d,
        Err(e) => return fail(format_args!("{}: {e}", delta_path.display())),
    };
    let chain = match load(cfg) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if deltas.is_empty() {
        match cfg.format {
            Format::Text => println!("no deltas; workspace unchanged"),
            Format::Json => println!("{}", json!({ "status": "ok", "updates": [] })),
        }
        return EXIT_OK;
    }
    let report = validate_chain(&chain);
    if !report.is_valid() {
        print_report(cfg.format, chain.models().len(), &report);
        return EXIT_REJECTED;
    }
    // The name correspondence comes from translating the current models,
    // exactly as the delta author saw them.
    let translation = match translate_chain(&chain) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    match backprop_batch(&chain, &translation.symbols, &deltas) {
        Err(e) => {
            match cfg.format {
                Format::Text => println!("rejected: {e}"),
                Format::Json => {
                    println!("{}", json!({ "status": "rejected", "reason": e.to_string() }));
                }
            }
            EXIT_REJECTED
        }
        Ok(outcome) => {
            if let Err(e) = save_workspace(&cfg.workspace, &outcome.chain) {
                return fail(e);
            }
            match cfg.format {
                Format::Text => {
                    for u in &outcome.updates {
                        println!("{u}");
                    }
                    println!("ok: {} update(s) applied", outcome.updates.len());
                }
                Format::Json => {
                    println!("{}", json!({ "status": "ok", "updates": outcome.updates }));
                }
            }
            EXIT_OK
        }
    }
}

/// Emit one text diagram per model.
pub fn run_render(cfg: &RunConfig) -> i32 {
    let chain = match load(cfg) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let out = cfg.out_dir();
    if let Err(e) = fs::create_dir_all(out) {
        return fail(format_args!("{}: {e}", out.display()));
    }
    let mut files = Vec::new();
    for model in chain.models() {
        let path = out.join(format!("{}.mmd", model.name));
        if let Err(e) = fs::write(&path, render_model(model)) {
            return fail(format_args!("{}: {e}", path.display()));
        }
        files.push(path.display().to_string());
    }
    print_files(cfg.format, &files);
    EXIT_OK
}

/// A model as a Mermaid flowchart: concepts are boxes, named individuals
/// circles, and the structural references become labelled edges
/// (`in --individualOf--> T_IN`). Declaration order is kept throughout,
/// so equal models render to identical bytes.
pub fn render_model(model: &DomainModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "%% domainmodel {}", model.name);
    let _ = writeln!(out, "graph TD");
    for c in &model.concepts {
        let _ = writeln!(out, "    {0}[\"{0}\"]", c.name);
    }
    for name in model.individuals.iter().filter_map(|i| i.name.as_deref()) {
        let _ = writeln!(out, "    {name}((\"{name}\"))");
    }
    for c in &model.concepts {
        if let Some(parent) = &c.parent {
            let _ = writeln!(out, "    {} --parent--> {parent}", c.name);
        }
        if let Some(spec) = c.as_association() {
            let _ = writeln!(out, "    {} --domain--> {}", c.name, spec.domain);
            let _ = writeln!(out, "    {} --range--> {}", c.name, spec.range);
        }
    }
    for i in &model.individuals {
        if let Some(name) = &i.name {
            let _ = writeln!(out, "    {name} --individualOf--> {}", i.individual_of);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use kaos2b_core::domain::{Concept, Individual};

    #[test]
    fn format_parses_the_documented_values() {
        assert_eq!(Format::parse(None), Ok(Format::Text));
        assert_eq!(Format::parse(Some("text")), Ok(Format::Text));
        assert_eq!(Format::parse(Some("JSON")), Ok(Format::Json));
        assert!(Format::parse(Some("yaml")).is_err());
    }

    #[test]
    fn diagrams_spell_out_every_reference_edge() {
        let mut m = DomainModel::new("Saturn_1");
        m.concepts.push(Concept::plain("T_IN"));
        m.concepts.push(Concept {
            parent: Some("T_IN".into()),
            ..Concept::plain("SUB")
        });
        m.individuals.push(Individual::named("in", "T_IN"));
        let text = render_model(&m);
        assert!(text.starts_with("%% domainmodel Saturn_1\ngraph TD\n"), "{text}");
        assert!(text.contains("in --individualOf--> T_IN"), "{text}");
        assert!(text.contains("SUB --parent--> T_IN"), "{text}");
    }

    #[test]
    fn an_empty_model_renders_header_only() {
        let m = DomainModel::new("Empty");
        assert_eq!(render_model(&m), "%% domainmodel Empty\ngraph TD\n");
    }

    #[test]
    fn associations_render_domain_and_range_edges() {
        use kaos2b_core::domain::{AssociationSpec, Bound, Cardinality, ConceptKind};
        let mut m = DomainModel::new("M");
        m.concepts.push(Concept::plain("D"));
        m.concepts.push(Concept::plain("R"));
        m.concepts.push(Concept {
            kind: ConceptKind::Association(AssociationSpec {
                domain: "D".into(),
                range: "R".into(),
                domain_cardinality: Cardinality::new(0, Bound::Unbounded),
                range_cardinality: Cardinality::new(0, Bound::Unbounded),
            }),
            ..Concept::plain("AS")
        });
        let text = render_model(&m);
        assert!(text.contains("AS --domain--> D"), "{text}");
        assert!(text.contains("AS --range--> R"), "{text}");
    }
}
