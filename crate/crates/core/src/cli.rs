//! The `ddbar` command line.
//!
//! Exit codes: 0 success, 1 domain or validation error, 2 usage or parse error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::bicomplex::{BicomplexError, CohomologySummary};
use crate::constructions::{self, BlowupStep, Direction, SequenceState};
use crate::diamond::{self, BigradedTable, DeltaVector, ManifoldModel, Mode};
use crate::expr::{self, ExprError};
use crate::registry::{self, int_list, Builtin, RegistryError};
use crate::verify::{self, Suite, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "ddbar",
    version,
    about = "Non-Kählerness degrees, Bott-Chern numbers and the ddbar-lemma"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a model with its degrees and verdict.
    Inspect {
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        builtin: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        /// Report the formula verdict even for non-realizable tables.
        #[arg(long)]
        lenient: bool,
    },
    /// Decide the ddbar-property of a model source or construction expression.
    Decide {
        model: String,
        #[arg(long)]
        lenient: bool,
    },
    /// Evaluate a construction expression such as `proj(builtin:point, rank=3)`.
    Construct {
        expression: String,
        /// Write the constructed model as a canonical .ddm document.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[arg(long)]
        lenient: bool,
    },
    /// Compute all cohomology tables of a Chevalley-Eilenberg complex.
    CeCompute {
        #[arg(conflicts_with = "builtin", required_unless_present = "builtin")]
        file: Option<PathBuf>,
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Run an invariant suite over builtins and seeded random instances.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Evaluate a sequence of blow-ups and blow-downs.
    Sequence {
        /// Start model: a source or construction expression.
        #[arg(long)]
        start: String,
        /// JSON document `{"steps": [{"direction": "up", "center": "...", "codim": 2}]}`.
        #[arg(long)]
        steps: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        /// Write the final model as a canonical .ddm document.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn domain(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<RegistryError> for Failure {
    fn from(e: RegistryError) -> Self {
        match e {
            RegistryError::Engine(_) => Failure::domain(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<ExprError> for Failure {
    fn from(e: ExprError) -> Self {
        match e {
            ExprError::Parse(_) => Failure::usage(e.to_string()),
            ExprError::Registry(r) => r.into(),
            ExprError::Construction(_) => Failure::domain(e.to_string()),
        }
    }
}

impl From<BicomplexError> for Failure {
    fn from(e: BicomplexError) -> Self {
        Failure::domain(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(format!("io-error: {e}"))
    }
}

fn verdict_word(v: bool) -> &'static str {
    if v {
        "ddbar"
    } else {
        "not ddbar"
    }
}

fn table_lines(out: &mut String, title: &str, t: &BigradedTable) {
    let _ = writeln!(out, "{title} (row p, column q):");
    let rows = t.rows();
    let width = rows
        .iter()
        .flatten()
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1)
        + 1;
    for (p, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .map(|v| format!("{v:>width$}", width = width.max(3)))
            .collect();
        let _ = writeln!(out, "  p={p}:{}", cells.join(""));
    }
}

fn model_table(m: &ManifoldModel, d: &DeltaVector, verdict: Option<bool>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name: {}", m.name);
    let _ = writeln!(out, "dim: {}", m.dim());
    let _ = writeln!(out, "betti: {}", int_list(m.betti().as_slice()));
    table_lines(&mut out, "bott_chern", m.bott_chern());
    let _ = writeln!(out, "delta: {}", int_list(d.as_slice()));
    if let Some(v) = verdict {
        let _ = writeln!(out, "verdict: {}", verdict_word(v));
    }
    out
}

fn indent(text: &str, by: &str) -> String {
    text.lines()
        .map(|l| format!("{by}{l}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Canonical `.ddm` text with `delta` and `verdict` appended.
fn model_json(m: &ManifoldModel, d: &DeltaVector, verdict: bool) -> String {
    let ddm = registry::model_to_string(m);
    let body = ddm.trim_end().strip_suffix('}').expect("object").trim_end();
    format!(
        "{body},\n  \"delta\": {},\n  \"verdict\": {verdict}\n}}\n",
        int_list(d.as_slice())
    )
}

fn report_model(m: &ManifoldModel, strict: bool, format: Format) -> Result<String, Failure> {
    let mode = if strict { Mode::Strict } else { Mode::Lenient };
    let verdict =
        diamond::is_ddbar(m, mode).map_err(|e| Failure::domain(format!("{}: {e}", m.name)))?;
    let d = diamond::delta(m);
    Ok(match format {
        Format::Table => {
            let mut out = model_table(m, &d, Some(verdict));
            if !strict {
                let _ = writeln!(out, "validation: {}", diamond::validate_model(m));
            }
            out
        }
        Format::Json => model_json(m, &d, verdict),
    })
}

fn summary_table(s: &CohomologySummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name: {}", s.name);
    let _ = writeln!(out, "dim: {}", s.n);
    let _ = writeln!(out, "betti: {}", int_list(s.betti.as_slice()));
    table_lines(&mut out, "dolbeault", &s.dolbeault);
    table_lines(&mut out, "bott_chern", &s.bott_chern);
    table_lines(&mut out, "aeppli", &s.aeppli);
    let _ = writeln!(out, "delta: {}", int_list(s.delta.as_slice()));
    let _ = writeln!(out, "verdict: {}", verdict_word(s.ddbar_verdict));
    out
}

fn json_rows(t: &BigradedTable) -> String {
    let rows: Vec<String> = t
        .rows()
        .iter()
        .map(|r| format!("    {}", int_list(r)))
        .collect();
    format!("[\n{}\n  ]", rows.join(",\n"))
}

fn summary_json(s: &CohomologySummary) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(
        out,
        "  \"name\": {},",
        serde_json::to_string(&s.name).expect("string")
    );
    let _ = writeln!(out, "  \"dim\": {},", s.n);
    let _ = writeln!(out, "  \"betti\": {},", int_list(s.betti.as_slice()));
    let _ = writeln!(out, "  \"dolbeault\": {},", json_rows(&s.dolbeault));
    let _ = writeln!(out, "  \"bott_chern\": {},", json_rows(&s.bott_chern));
    let _ = writeln!(out, "  \"aeppli\": {},", json_rows(&s.aeppli));
    let _ = writeln!(out, "  \"delta\": {},", int_list(s.delta.as_slice()));
    let _ = writeln!(out, "  \"verdict\": {}", s.ddbar_verdict);
    out.push_str("}\n");
    out
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepsDocument {
    steps: Vec<StepEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepEntry {
    direction: String,
    center: String,
    codim: i64,
}

fn load_steps(path: &Path, strict: bool) -> Result<Vec<BlowupStep>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("io-error: {}: {e}", path.display())))?;
    let doc: StepsDocument =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("parse-error: {e}")))?;
    let base = path.parent().unwrap_or(Path::new("."));
    doc.steps
        .iter()
        .map(|s| {
            let direction = match s.direction.as_str() {
                "up" => Direction::Up,
                "down" => Direction::Down,
                other => {
                    return Err(Failure::usage(format!(
                        "parse-error: unknown direction '{other}'"
                    )))
                }
            };
            let center = expr::construct(&s.center, base, strict)?;
            Ok(BlowupStep {
                direction,
                center,
                codim: s.codim,
            })
        })
        .collect()
}

fn sequence_output(
    start: &ManifoldModel,
    steps: &[BlowupStep],
    states: &[SequenceState],
    format: Format,
) -> String {
    let label = |s: &BlowupStep| {
        let dir = match s.direction {
            Direction::Up => "up",
            Direction::Down => "down",
        };
        (dir, s.center.name.clone(), s.codim)
    };
    let start_delta = diamond::delta(start);
    let start_verdict = start_delta.is_zero();
    match format {
        Format::Table => {
            let mut out = String::from("== start\n");
            out.push_str(&model_table(start, &start_delta, Some(start_verdict)));
            for (i, (step, state)) in steps.iter().zip(states).enumerate() {
                let (dir, center, codim) = label(step);
                let _ = writeln!(
                    out,
                    "== step {} ({dir}, center={center}, codim={codim})",
                    i + 1
                );
                out.push_str(&model_table(
                    &state.model,
                    &state.delta,
                    Some(state.verdict),
                ));
            }
            out
        }
        Format::Json => {
            let mut entries = vec![format!(
                "    {{\n      \"step\": 0,\n      \"model\": {}\n    }}",
                indent(&model_json(start, &start_delta, start_verdict), "      ").trim_start()
            )];
            for (i, (step, state)) in steps.iter().zip(states).enumerate() {
                let (dir, center, codim) = label(step);
                entries.push(format!(
                    "    {{\n      \"step\": {},\n      \"direction\": \"{dir}\",\n      \"center\": {},\n      \"codim\": {codim},\n      \"model\": {}\n    }}",
                    i + 1,
                    serde_json::to_string(&center).expect("string"),
                    indent(&model_json(&state.model, &state.delta, state.verdict), "      ").trim_start()
                ));
            }
            format!("{{\n  \"states\": [\n{}\n  ]\n}}\n", entries.join(",\n"))
        }
    }
}

fn execute(cli: Cli, cwd: &Path) -> Result<String, Failure> {
    match cli.command {
        Command::Inspect {
            builtin,
            file,
            format,
            lenient,
        } => {
            let model = match (builtin, file) {
                (Some(name), _) => registry::builtin_model(&name)?,
                (None, Some(path)) => registry::load_model_file(&cwd.join(path))?,
                (None, None) => return Err(Failure::usage("inspect needs --builtin or --file")),
            };
            report_model(&model, !lenient, format)
        }
        Command::Decide { model, lenient } => {
            let m = expr::construct(&model, cwd, !lenient)?;
            let mode = if lenient { Mode::Lenient } else { Mode::Strict };
            let verdict = diamond::is_ddbar(&m, mode)
                .map_err(|e| Failure::domain(format!("{}: {e}", m.name)))?;
            Ok(format!("{}: {}\n", m.name, verdict_word(verdict)))
        }
        Command::Construct {
            expression,
            out,
            format,
            lenient,
        } => {
            let m = expr::construct(&expression, cwd, !lenient)?;
            let text = report_model(&m, !lenient, format)?;
            if let Some(path) = out {
                std::fs::write(cwd.join(path), registry::model_to_string(&m))?;
            }
            Ok(text)
        }
        Command::CeCompute {
            file,
            builtin,
            format,
        } => {
            let s = match (file, builtin) {
                (_, Some(name)) => match registry::builtin(&name)? {
                    Builtin::Structure(s) => s,
                    Builtin::Model(_) => {
                        return Err(Failure::usage(format!(
                            "builtin '{name}' is a closed-form model, not structure equations"
                        )))
                    }
                },
                (Some(path), None) => registry::load_structure_file(&cwd.join(path))?,
                (None, None) => return Err(Failure::usage("ce-compute needs a file or --builtin")),
            };
            let summary = registry::engine_summary(&s)?;
            Ok(match format {
                Format::Table => summary_table(&summary),
                Format::Json => summary_json(&summary),
            })
        }
        Command::Verify { suite, seed, count } => {
            let suite: Suite = suite.parse().map_err(Failure::usage)?;
            let report = verify::run_suite(suite, VerifyOptions { seed, count })?;
            let mut out = String::new();
            for f in &report.failures {
                let _ = writeln!(out, "counterexample: {f}");
            }
            let status = if report.ok() { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{suite}: {status} ({} checks, {} failures, seed {seed}, count {count})",
                report.checked,
                report.failures.len()
            );
            if report.ok() {
                Ok(out)
            } else {
                Err(Failure::domain(out.trim_end()))
            }
        }
        Command::Sequence {
            start,
            steps,
            format,
            out,
        } => {
            let start_model = expr::construct(&start, cwd, true)?;
            let steps = load_steps(&cwd.join(steps), true)?;
            let states = constructions::evaluate_blowup_sequence(&start_model, &steps)
                .map_err(|e| Failure::domain(e.to_string()))?;
            if let (Some(path), Some(last)) = (out, states.last()) {
                std::fs::write(cwd.join(path), registry::model_to_string(&last.model))?;
            }
            Ok(sequence_output(&start_model, &steps, &states, format))
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, cwd: &Path, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match execute(cli, cwd) {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
