//! Command-line front end. Every subcommand parses its input, calls the
//! core library and renders the result as a table or as JSON.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use knotform_core::invariants::summarize;
use knotform_core::seifert::Construction;
use knotform_core::verify::StepStatus;
use knotform_core::{
    braid_seifert, construct, normalize, obstruction_report, parse, verify_paper, BraidWord, FoxMilnor, ParseError,
    Summary,
};

/// Exit code for usage and input errors.
pub const EXIT_USAGE: i32 = 1;
/// Exit code when a required check fails.
pub const EXIT_FAILED: i32 = 2;
/// Exit code when a required check is only inconclusive.
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "knotform",
    version,
    about = "Exact Seifert-form invariants and sliceness obstructions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Alexander polynomial, signature, determinant, Arf invariant, fiberedness.
    Compute {
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Algebraic sliceness obstructions.
    Obstruct {
        expr: String,
        /// Grid size for sampling the signature function.
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        resolution: u64,
        #[arg(long)]
        json: bool,
    },
    /// Seifert matrix with block provenance.
    Dump {
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Full check of LM and its regrouping as a plumbing of ribbon knots.
    VerifyPaper {
        #[arg(long)]
        json: bool,
    },
    /// Independent cross-checks.
    Oracle {
        #[command(subcommand)]
        target: OracleTarget,
    },
}

#[derive(Debug, Subcommand)]
enum OracleTarget {
    /// Invariants of a braid closure, e.g. "3: 1 2 1 2 1 2 1 2".
    Braid {
        spec: String,
        #[arg(long)]
        json: bool,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(code: i32, stderr: String) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

pub fn init_logging() {
    let env = env_logger::Env::new().filter_or("KNOT_LOG", "off");
    let _ = env_logger::Builder::from_env(env).try_init();
}

fn render_json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn parse_error_message(text: &str, e: &ParseError) -> String {
    format!("error: {e}\n  {text}\n  {}^\n", " ".repeat(e.position))
}

fn build(text: &str) -> Result<Construction, Output> {
    let expr = parse(text).map_err(|e| Output::error(EXIT_USAGE, parse_error_message(text, &e)))?;
    construct(&expr).map_err(|e| Output::error(EXIT_USAGE, format!("error: {e}\n")))
}

fn summary_table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().fold(String::new(), |mut out, (k, v)| {
        let _ = writeln!(out, "{k:<width$}  {v}");
        out
    })
}

fn summary_rows(s: &Summary) -> Vec<(&'static str, String)> {
    vec![
        ("size", s.size.to_string()),
        ("alexander", s.alexander.to_string()),
        ("signature", s.signature.to_string()),
        ("determinant", s.determinant.to_string()),
        ("arf", s.arf.to_string()),
        ("fibered", s.fibered.to_string()),
    ]
}

fn compute(text: &str, json: bool) -> Output {
    let c = match build(text) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let expr = normalize(&parse(text).expect("parsed above"));
    let s = summarize(&c.matrix);
    if json {
        let mut v = s.to_json();
        v["expression"] = serde_json::json!(expr.to_string());
        Output::ok(render_json(&v))
    } else {
        let mut rows = vec![("expression", expr.to_string())];
        rows.extend(summary_rows(&s));
        Output::ok(summary_table(&rows))
    }
}

fn obstruct(text: &str, resolution: u64, json: bool) -> Output {
    let c = match build(text) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let r = obstruction_report(&c.matrix, resolution);
    if json {
        let mut v = r.to_json();
        v["resolution"] = serde_json::json!(resolution);
        return Output::ok(render_json(&v));
    }
    let fm = match &r.fox_milnor {
        FoxMilnor::Pass(f) => format!("pass, f = {f}"),
        FoxMilnor::Fail => "fail".to_string(),
        FoxMilnor::Inconclusive => "inconclusive".to_string(),
    };
    let det = match &r.determinant_root {
        Some(root) => format!("{} = {root}^2", r.determinant),
        None => format!("{} (not a square)", r.determinant),
    };
    let sigs = format!(
        "{} at {} certified samples, {} jumps",
        if r.signatures_vanish { "vanish" } else { "do not vanish" },
        r.certified_samples(),
        r.profile.jumps.len()
    );
    let rows = vec![
        ("alexander", r.alexander.to_string()),
        ("fox-milnor", fm),
        ("signature", r.signature.to_string()),
        ("signatures", sigs),
        ("determinant", det),
        ("arf", r.arf.to_string()),
        ("verdict", r.verdict.as_str().to_string()),
    ];
    Output::ok(summary_table(&rows))
}

fn dump(text: &str, json: bool) -> Output {
    let c = match build(text) {
        Ok(c) => c,
        Err(o) => return o,
    };
    if json {
        return Output::ok(render_json(&c.matrix.to_json(&c.blocks)));
    }
    let n = c.matrix.size();
    let cells: Vec<Vec<String>> = (0..n)
        .map(|i| (0..n).map(|j| c.matrix.get(i, j).to_string()).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = format!("size {n}\n");
    for row in &cells {
        let line: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    for b in &c.blocks {
        let _ = writeln!(out, "block offset {} size {} {}", b.offset, b.size, b.path);
    }
    Output::ok(out)
}

fn verify(json: bool) -> Output {
    let report = verify_paper();
    let code = report.exit_code();
    let stdout = if json {
        render_json(&report.to_json())
    } else {
        let mut out = String::new();
        for s in &report.steps {
            let _ = writeln!(out, "[{}] {}: {}", s.status.as_str(), s.id, s.detail);
        }
        for n in &report.notes {
            let _ = writeln!(out, "note {}: {}", n.id, n.text);
        }
        if let Some(v) = report.verdict() {
            let _ = writeln!(out, "verdict: {}", v.as_str());
        }
        out
    };
    let stderr = match report.failed_step() {
        Some(s) => format!("step {} failed: {}\n", s.id, s.detail),
        None if code == EXIT_INCONCLUSIVE => {
            let ids: Vec<&str> = report
                .steps
                .iter()
                .filter(|s| s.status == StepStatus::Inconclusive)
                .map(|s| s.id)
                .collect();
            format!("inconclusive steps: {}\n", ids.join(", "))
        }
        None => String::new(),
    };
    Output { code, stdout, stderr }
}

fn oracle_braid(spec: &str, json: bool) -> Output {
    let word: BraidWord = match spec.parse() {
        Ok(w) => w,
        Err(e) => return Output::error(EXIT_USAGE, format!("error: {e}\n")),
    };
    let v = match braid_seifert(&word) {
        Ok(v) => v,
        Err(e) => return Output::error(EXIT_USAGE, format!("error: {e}\n")),
    };
    let s = summarize(&v);
    if json {
        let mut j = s.to_json();
        j["braid"] = serde_json::json!(word.to_string());
        Output::ok(render_json(&j))
    } else {
        let mut rows = vec![("braid", word.to_string())];
        rows.extend(summary_rows(&s));
        Output::ok(summary_table(&rows))
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Output::ok(text),
                _ => Output::error(EXIT_USAGE, text),
            };
        }
    };
    match cli.command {
        Command::Compute { expr, json } => compute(&expr, json),
        Command::Obstruct { expr, resolution, json } => obstruct(&expr, resolution, json),
        Command::Dump { expr, json } => dump(&expr, json),
        Command::VerifyPaper { json } => verify(json),
        Command::Oracle {
            target: OracleTarget::Braid { spec, json },
        } => oracle_braid(&spec, json),
    }
}
