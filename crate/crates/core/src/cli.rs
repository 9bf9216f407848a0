//! Command-line front end. Exit codes: 0 clean, 1 findings, 2 input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::constraints::{evaluate, generate_constraints, report_to_json, CheckOptions, ConstraintSet};
use crate::diff::{diff_to_json, diff_views, load_diff, DiffOptions};
use crate::domain::DomainRuleMatrix;
use crate::dsl::{has_errors, parse_pa, validate_pa, PlannedArchitecture};
use crate::model::{load_model_document, model_to_json, pa_to_model, to_package_view, ModelDocument};
use crate::recovery::{build_ca, facts_to_json, lift_indirect, load_facts, load_mappings, scan_sources, ScanOptions};
use crate::render::{render_conformance, render_view};
use crate::SCHEMA_VERSION;

/// Environment variable consulted when `--domain-config` is absent.
pub const DOMAIN_CONFIG_ENV: &str = "REMEDY_DOMAIN_CONFIG";

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "remedy", version, about = "Architectural conformance checking for MAPE-K self-adaptive systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a planned architecture.
    Validate {
        pa: PathBuf,
        #[arg(long)]
        domain_config: Option<PathBuf>,
    },
    /// Emit the constraint set generated from a planned architecture.
    Constraints {
        pa: PathBuf,
        #[arg(long)]
        domain_config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract code facts from a source tree.
    Extract {
        src: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Source file extension, repeatable.
        #[arg(long = "ext", default_value = "java")]
        extensions: Vec<String>,
    },
    /// Recover the current architecture model.
    Recover {
        pa: PathBuf,
        facts: PathBuf,
        mappings: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Keep only direct relations.
        #[arg(long)]
        no_lift: bool,
    },
    /// Check conformance of the code against the planned architecture.
    Check {
        pa: PathBuf,
        facts: PathBuf,
        mappings: PathBuf,
        #[arg(long, overrides_with = "no_implicit_deny")]
        implicit_deny: bool,
        #[arg(long, overrides_with = "implicit_deny")]
        no_implicit_deny: bool,
        #[arg(long)]
        domain_config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_lift: bool,
    },
    /// Compare the planned architecture with a recovered model.
    Diff {
        pa: PathBuf,
        ca: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Name glob of elements to leave out, repeatable.
        #[arg(long)]
        ignore: Vec<String>,
    },
    /// Render the planned view, or the conformance view when given a report and a diff.
    Render {
        pa: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        diff: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Hex SHA-256 of a planned-architecture file's bytes.
pub fn pa_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

struct Io<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    fn emit(&mut self, out: Option<&Path>, text: &str) -> Result<(), Failure> {
        match out {
            Some(p) => fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
            None => self.stdout.write_all(text.as_bytes()).map_err(Failure::from),
        }
    }

    fn warn(&mut self, msg: impl std::fmt::Display) {
        let _ = writeln!(self.stderr, "warning: {msg}");
    }
}

struct LoadedPa {
    pa: PlannedArchitecture,
    hash: String,
    path: PathBuf,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_pa(path: &Path, io: &mut Io) -> Result<Result<LoadedPa, i32>, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    match parse_pa(&text) {
        Ok(pa) => Ok(Ok(LoadedPa { pa, hash: pa_hash(&bytes), path: path.to_path_buf() })),
        Err(diags) => {
            for d in diags {
                let _ = writeln!(io.stderr, "{}:{d}", path.display());
            }
            Ok(Err(EXIT_FINDINGS))
        }
    }
}

/// Parses and validates; any error diagnostic is an input error here.
fn load_valid_pa(path: &Path, matrix: &DomainRuleMatrix, io: &mut Io) -> Result<LoadedPa, Failure> {
    let loaded = match read_pa(path, io)? {
        Ok(l) => l,
        Err(_) => return Err(Failure(format!("{}: planned architecture does not parse", path.display()))),
    };
    let diags = validate_pa(&loaded.pa, matrix);
    for d in &diags {
        let _ = writeln!(io.stderr, "{}:{d}", path.display());
    }
    if has_errors(&diags) {
        return Err(Failure(format!("{}: planned architecture is invalid", path.display())));
    }
    Ok(loaded)
}

fn domain_matrix(flag: Option<&Path>) -> Result<DomainRuleMatrix, Failure> {
    let path = flag.map(Path::to_path_buf).or_else(|| std::env::var_os(DOMAIN_CONFIG_ENV).map(PathBuf::from));
    match path {
        Some(p) => DomainRuleMatrix::from_config_json(&read(&p)?).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => Ok(DomainRuleMatrix::all_active()),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ConstraintDocument<'a> {
    schema_version: u32,
    pa_hash: &'a str,
    #[serde(flatten)]
    set: &'a ConstraintSet,
}

fn validate(pa: &Path, config: Option<&Path>, io: &mut Io) -> Outcome {
    let matrix = domain_matrix(config)?;
    let loaded = match read_pa(pa, io)? {
        Ok(l) => l,
        Err(code) => return Ok(code),
    };
    let diags = validate_pa(&loaded.pa, &matrix);
    for d in &diags {
        let _ = writeln!(io.stdout, "{}:{d}", loaded.path.display());
    }
    let errors = diags.iter().filter(|d| d.severity == crate::dsl::Severity::Error).count();
    let _ = writeln!(io.stdout, "{}: {errors} error(s), {} warning(s)", loaded.path.display(), diags.len() - errors);
    Ok(if errors > 0 { EXIT_FINDINGS } else { EXIT_CLEAN })
}

fn constraints(pa: &Path, config: Option<&Path>, out: Option<&Path>, io: &mut Io) -> Outcome {
    let matrix = domain_matrix(config)?;
    let loaded = load_valid_pa(pa, &matrix, io)?;
    let set = generate_constraints(&loaded.pa, &matrix);
    let doc = ConstraintDocument { schema_version: SCHEMA_VERSION, pa_hash: &loaded.hash, set: &set };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    io.emit(out, &text)?;
    Ok(EXIT_CLEAN)
}

fn extract(src: &Path, out: Option<&Path>, extensions: Vec<String>, io: &mut Io) -> Outcome {
    if !src.is_dir() {
        return Err(Failure(format!("{}: not a directory", src.display())));
    }
    let scanned = scan_sources(src, &ScanOptions { extensions });
    for line in &scanned.log {
        io.warn(line);
    }
    io.emit(out, &facts_to_json(&scanned.facts))?;
    Ok(EXIT_CLEAN)
}

fn recover_model(
    loaded: &LoadedPa,
    facts: &Path,
    mappings: &Path,
    lift: bool,
    io: &mut Io,
) -> Result<crate::model::ArchModel, Failure> {
    let facts = load_facts(facts).map_err(|e| Failure(format!("{}: {e}", facts.display())))?;
    let maps = load_mappings(mappings, &facts, &loaded.pa).map_err(|e| Failure(format!("{}: {e}", mappings.display())))?;
    let recovered = build_ca(&facts, &maps, &loaded.pa);
    for w in &recovered.warnings {
        io.warn(w);
    }
    Ok(if lift { lift_indirect(&recovered.model, &facts, &maps) } else { recovered.model })
}

fn recover(pa: &Path, facts: &Path, mappings: &Path, out: Option<&Path>, lift: bool, io: &mut Io) -> Outcome {
    let loaded = load_valid_pa(pa, &domain_matrix(None)?, io)?;
    let model = recover_model(&loaded, facts, mappings, lift, io)?;
    io.emit(out, &model_to_json(&ModelDocument::new(model, Some(loaded.hash))))?;
    Ok(EXIT_CLEAN)
}

struct CheckArgs<'a> {
    pa: &'a Path,
    facts: &'a Path,
    mappings: &'a Path,
    implicit_deny: bool,
    config: Option<&'a Path>,
    out: Option<&'a Path>,
    lift: bool,
}

fn check(args: CheckArgs, io: &mut Io) -> Outcome {
    let matrix = domain_matrix(args.config)?;
    let loaded = load_valid_pa(args.pa, &matrix, io)?;
    let set = generate_constraints(&loaded.pa, &matrix);
    let ca = recover_model(&loaded, args.facts, args.mappings, args.lift, io)?;
    let mut report = evaluate(&set, &ca, CheckOptions { implicit_deny: args.implicit_deny })?;
    report.pa_hash = Some(loaded.hash.clone());
    let text = report_to_json(&report);
    let summary = &report.summary;
    let line = format!(
        "existence {}/{} structural {}/{} communication {}/{} domain {}/{} (violations/total)",
        summary.existence.violation,
        summary.existence.pass + summary.existence.violation,
        summary.structural.violation,
        summary.structural.pass + summary.structural.violation,
        summary.communication.violation,
        summary.communication.pass + summary.communication.violation,
        summary.domain.violation,
        summary.domain.pass + summary.domain.violation,
    );
    match args.out {
        Some(p) => {
            io.emit(Some(p), &text)?;
            for f in report.violations() {
                let _ = writeln!(io.stdout, "violation {}: {}", f.constraint_id, f.detail);
            }
            let _ = writeln!(io.stdout, "{line}");
        }
        None => {
            io.emit(None, &text)?;
            let _ = writeln!(io.stderr, "{line}");
        }
    }
    Ok(if report.is_conformant() { EXIT_CLEAN } else { EXIT_FINDINGS })
}

fn diff(pa: &Path, ca: &Path, out: Option<&Path>, ignore: &[String], io: &mut Io) -> Outcome {
    let options = DiffOptions::with_ignore(ignore)?;
    let loaded = load_valid_pa(pa, &domain_matrix(None)?, io)?;
    let doc = load_model_document(ca).map_err(|e| Failure(format!("{}: {e}", ca.display())))?;
    if doc.pa_hash.as_deref().is_some_and(|h| h != loaded.hash) {
        io.warn(format!("{} was recovered against a different planned architecture", ca.display()));
    }
    let pa_view = to_package_view(&pa_to_model(&loaded.pa))?;
    let ca_view = to_package_view(&doc.model).map_err(|e| Failure(format!("{}: {e}", ca.display())))?;
    let mut result = diff_views(&pa_view, &ca_view, &options);
    result.pa_hash = Some(loaded.hash);
    io.emit(out, &diff_to_json(&result))?;
    Ok(if result.is_empty() { EXIT_CLEAN } else { EXIT_FINDINGS })
}

fn render(pa: &Path, report: Option<&Path>, diff: Option<&Path>, out: Option<&Path>, io: &mut Io) -> Outcome {
    let loaded = load_valid_pa(pa, &domain_matrix(None)?, io)?;
    let view = to_package_view(&pa_to_model(&loaded.pa))?;
    let body = match (report, diff) {
        (None, None) => render_view(&view),
        (Some(r), Some(d)) => {
            let report =
                crate::constraints::load_report(r).map_err(|e| Failure(format!("{}: {e}", r.display())))?;
            let diff = load_diff(d).map_err(|e| Failure(format!("{}: {e}", d.display())))?;
            for (name, hash) in [(r, &report.pa_hash), (d, &diff.pa_hash)] {
                if hash.as_deref().is_some_and(|h| h != loaded.hash) {
                    return Err(Failure(format!("{}: produced from a different planned architecture", name.display())));
                }
            }
            render_conformance(&view, &diff, &report)?
        }
        _ => return Err(Failure("--report and --diff must be given together".into())),
    };
    let text = body.replacen("@startuml\n", &format!("@startuml\n' pa-sha256 {}\n", loaded.hash), 1);
    io.emit(out, &text)?;
    Ok(EXIT_CLEAN)
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_CLEAN };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut io = Io { stdout, stderr };
    let outcome = match cli.command {
        Command::Validate { pa, domain_config } => validate(&pa, domain_config.as_deref(), &mut io),
        Command::Constraints { pa, domain_config, out } => {
            constraints(&pa, domain_config.as_deref(), out.as_deref(), &mut io)
        }
        Command::Extract { src, out, extensions } => extract(&src, out.as_deref(), extensions, &mut io),
        Command::Recover { pa, facts, mappings, out, no_lift } => {
            recover(&pa, &facts, &mappings, out.as_deref(), !no_lift, &mut io)
        }
        Command::Check { pa, facts, mappings, implicit_deny: _, no_implicit_deny, domain_config, out, no_lift } => check(
            CheckArgs {
                pa: &pa,
                facts: &facts,
                mappings: &mappings,
                implicit_deny: !no_implicit_deny,
                config: domain_config.as_deref(),
                out: out.as_deref(),
                lift: !no_lift,
            },
            &mut io,
        ),
        Command::Diff { pa, ca, out, ignore } => diff(&pa, &ca, out.as_deref(), &ignore, &mut io),
        Command::Render { pa, report, diff, out } => {
            render(&pa, report.as_deref(), diff.as_deref(), out.as_deref(), &mut io)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(io.stderr, "error: {msg}");
            EXIT_INPUT
        }
    }
}
