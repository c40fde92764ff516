//! Command-line front end for `nbvote`.
//!
//! Results go to the output stream, diagnostics to the error stream. Exit
//! status is 0 on success, 1 when the input data is invalid or cannot be
//! processed, and 2 on usage errors.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nbvote::bounds::{self, CounterexampleKind};
use nbvote::exact::{self, Enumerator, DEFAULT_N_MAX};
use nbvote::montecarlo;
use nbvote::rule::{format_bits, parse_bits};
use nbvote::{DecisionRule, ExpertPanel, ProductBernoulli};
use serde::Serialize;
use serde_json::{json, Value};

/// Caps the worker count when `--threads` is not given.
pub const THREADS_ENV: &str = "NBVOTE_THREADS";

const MACHINE_DIGITS: usize = 12;
const HUMAN_DIGITS: usize = 6;

#[derive(Debug, Parser)]
#[command(name = "nbvote", version, about = "Optimal aggregation of binary experts: rule, exact error, bounds")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a panel file and print it in normalized form.
    Validate { panel: PathBuf },
    /// Apply the optimal rule to one vote vector.
    Decide {
        panel: PathBuf,
        /// Votes as a 0/1 string, expert 1 leftmost.
        #[arg(long = "x")]
        x: String,
    },
    /// Optimal error probability, exact or by simulation.
    Error {
        panel: PathBuf,
        #[arg(long, value_enum)]
        method: Option<ErrorMethod>,
        /// Monte Carlo trials (only with --method mc).
        #[arg(long)]
        trials: Option<u64>,
        /// Monte Carlo seed (only with --method mc).
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        compute: Compute,
    },
    /// All closed-form bounds for a panel.
    Bounds {
        panel: PathBuf,
        /// Also compute the exact error by enumeration.
        #[arg(long)]
        with_exact: bool,
        #[command(flatten)]
        compute: Compute,
    },
    /// Distances between two product Bernoulli measures.
    Tv {
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        q: Vec<f64>,
        #[command(flatten)]
        compute: Compute,
    },
    /// Counterexample table: eps, exact, bound, ratio.
    Sweep {
        #[arg(long, value_enum)]
        kind: SweepKind,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        eps: Vec<f64>,
    },
    /// Simulate the generative model and count errors of the optimal rule.
    Simulate {
        panel: PathBuf,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct Compute {
    /// Largest dimension to enumerate exhaustively.
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    n_max: usize,
    /// Worker threads; overrides NBVOTE_THREADS.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ErrorMethod {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    Asym,
    Sym,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Invalid(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Invalid(m) => f.write_str(m),
        }
    }
}

impl From<nbvote::Error> for CliError {
    fn from(e: nbvote::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(CliError::Invalid(msg)) if msg.contains('\n') => {
            let _ = writeln!(err, "{msg}");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Validate { panel } => {
            let panel = load_panel(panel)?;
            write_panel(out, fmt, &panel)
        }
        Command::Decide { panel, x } => {
            let panel = load_panel(panel)?;
            let x = parse_bits(x)?;
            let rule = DecisionRule::from_panel(&panel);
            let score = rule.score(&x)?;
            let decision = u8::from(score >= 0.0);
            match fmt {
                Format::Json => write_json(out, &json!({ "x": format_bits(&x), "decision": decision, "score": score })),
                _ => Ok(writeln!(out, "{decision}")?),
            }
        }
        Command::Error { panel, method, trials, seed, compute } => {
            let panel = load_panel(panel)?;
            let enumerator = compute.enumerator();
            let method = match method {
                Some(m) => *m,
                None if panel.len() <= enumerator.n_max => ErrorMethod::Exact,
                None => {
                    return Err(CliError::Invalid(format!(
                        "{} experts exceed --n-max {}; rerun with --method mc",
                        panel.len(),
                        enumerator.n_max
                    )))
                }
            };
            match method {
                ErrorMethod::Exact => {
                    if trials.is_some() || seed.is_some() {
                        return Err(CliError::Usage("--trials and --seed require --method mc".into()));
                    }
                    let value = enumerator.optimal_error(&panel)?;
                    write_record(out, fmt, &[("method", Cell::Text("exact")), ("error", Cell::Num(value))])
                }
                ErrorMethod::Mc => {
                    let trials = trials.unwrap_or(1_000_000);
                    let r = montecarlo::simulate_error_with(&panel, trials, seed.unwrap_or(0), enumerator.workers)?;
                    write_record(
                        out,
                        fmt,
                        &[
                            ("method", Cell::Text("mc")),
                            ("error", Cell::Num(r.empirical_error)),
                            ("std_error", Cell::Num(r.std_error)),
                            ("trials", Cell::Int(r.trials)),
                            ("seed", Cell::Int(r.seed)),
                        ],
                    )
                }
            }
        }
        Command::Bounds { panel, with_exact, compute } => {
            let panel = load_panel(panel)?;
            let report = bounds::full_report_with(&panel, *with_exact, &compute.enumerator())?;
            write_struct(out, fmt, &report)
        }
        Command::Tv { p, q, compute } => {
            let p = ProductBernoulli::new(p.clone())?;
            let q = ProductBernoulli::new(q.clone())?;
            let affinity = compute.enumerator().affinity(&p, &q)?;
            let (hellinger_lower, hellinger_upper) = bounds::hellinger_envelopes(&p, &q)?;
            let fields = [
                ("tv", Cell::Num(affinity.tv)),
                ("min_mass", Cell::Num(affinity.min_mass)),
                ("bhattacharyya", Cell::Num(affinity.bhattacharyya)),
                ("hellinger_lower", Cell::Num(hellinger_lower)),
                ("hellinger_upper", Cell::Num(hellinger_upper)),
            ];
            write_record(out, fmt, &fields)
        }
        Command::Sweep { kind, eps } => {
            let kind = match kind {
                SweepKind::Asym => CounterexampleKind::AsymmetricL2,
                SweepKind::Sym => CounterexampleKind::SymmetricThm4,
            };
            let rows = bounds::counterexample_sweep(kind, eps)?;
            if fmt == Format::Json {
                return write_json(out, &round_json(serde_json::to_value(&rows).expect("rows serialize")));
            }
            // CSV is the table format for this command; human output only
            // shortens the numbers.
            let digits = if fmt == Format::Human { HUMAN_DIGITS } else { MACHINE_DIGITS };
            writeln!(out, "eps,exact,bound,ratio")?;
            for r in rows {
                let cells = [r.eps, r.exact, r.bound, r.ratio].map(|v| fmt_sig(v, digits));
                writeln!(out, "{}", cells.join(","))?;
            }
            Ok(())
        }
        Command::Simulate { panel, trials, seed, threads } => {
            let panel = load_panel(panel)?;
            let r = montecarlo::simulate_error_with(&panel, *trials, *seed, resolve_threads(*threads))?;
            write_struct(out, fmt, &r)
        }
    }
}

impl Compute {
    fn enumerator(&self) -> Enumerator {
        Enumerator::new(self.n_max, resolve_threads(self.threads))
    }
}

/// `--threads` wins; otherwise the environment variable caps the default.
fn resolve_threads(flag: Option<usize>) -> usize {
    let available = exact::default_workers();
    match flag {
        Some(n) => n.max(1),
        None => std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map_or(available, |cap| cap.clamp(1, available)),
    }
}

fn load_panel(path: &Path) -> Result<ExpertPanel, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    match ExpertPanel::from_json(&text) {
        Ok(panel) => Ok(panel),
        Err(nbvote::Error::InvalidPanel(issues)) => {
            let lines: Vec<String> = issues.iter().map(|i| format!("error: {i}")).collect();
            Err(CliError::Invalid(format!("{}\n{}", path.display(), lines.join("\n"))))
        }
        Err(e) => Err(e.into()),
    }
}

/// Round to `digits` significant digits; the result prints in shortest form.
fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

fn fmt_sig(x: f64, digits: usize) -> String {
    format!("{}", round_sig(x, digits))
}

fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"), MACHINE_DIGITS);
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

fn write_json(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    writeln!(out, "{}", serde_json::to_string(&round_json(v.clone())).expect("json value serializes"))?;
    Ok(())
}

#[derive(Debug, Clone, Copy)]
enum Cell<'a> {
    Text(&'a str),
    Num(f64),
    Int(u64),
}

fn write_record(out: &mut dyn Write, fmt: Format, fields: &[(&str, Cell)]) -> Result<(), CliError> {
    let obj: serde_json::Map<String, Value> = fields
        .iter()
        .map(|(k, c)| {
            let v = match *c {
                Cell::Text(s) => json!(s),
                Cell::Num(x) => json!(x),
                Cell::Int(i) => json!(i),
            };
            (k.to_string(), v)
        })
        .collect();
    write_value(out, fmt, &Value::Object(obj))
}

fn write_struct<T: Serialize>(out: &mut dyn Write, fmt: Format, value: &T) -> Result<(), CliError> {
    write_value(out, fmt, &serde_json::to_value(value).expect("report serializes"))
}

/// Render a flat object: JSON as is, CSV as header plus one row, human as
/// aligned `key  value` lines. Arrays become `;`-joined cells.
fn write_value(out: &mut dyn Write, fmt: Format, value: &Value) -> Result<(), CliError> {
    let Value::Object(obj) = value else { unreachable!("records are objects") };
    match fmt {
        Format::Json => write_json(out, value),
        Format::Csv => {
            let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
            let cells: Vec<String> = obj.values().map(|v| cell_text(v, MACHINE_DIGITS, "")).collect();
            writeln!(out, "{}", keys.join(","))?;
            writeln!(out, "{}", cells.join(","))?;
            Ok(())
        }
        Format::Human => {
            let width = obj.keys().map(String::len).max().unwrap_or(0);
            for (k, v) in obj {
                writeln!(out, "{k:<width$}  {}", cell_text(v, HUMAN_DIGITS, "-"))?;
            }
            Ok(())
        }
    }
}

fn cell_text(v: &Value, digits: usize, null: &str) -> String {
    match v {
        Value::Null => null.to_string(),
        Value::Number(n) if n.is_f64() => fmt_sig(n.as_f64().expect("f64 number"), digits),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Array(a) => a.iter().map(|x| cell_text(x, digits, null)).collect::<Vec<_>>().join(";"),
        Value::Object(_) => v.to_string(),
    }
}

fn write_panel(out: &mut dyn Write, fmt: Format, panel: &ExpertPanel) -> Result<(), CliError> {
    match fmt {
        Format::Json => write_struct(out, fmt, panel),
        Format::Csv => {
            writeln!(out, "expert,psi,eta,p_y")?;
            for (i, (s, e)) in panel.psi().iter().zip(panel.eta()).enumerate() {
                let row = [*s, *e, panel.p_y()].map(|v| fmt_sig(v, MACHINE_DIGITS));
                writeln!(out, "{},{}", i + 1, row.join(","))?;
            }
            Ok(())
        }
        Format::Human => {
            writeln!(out, "valid panel: {} experts, p_y = {}", panel.len(), fmt_sig(panel.p_y(), HUMAN_DIGITS))?;
            writeln!(out, "expert  psi       eta")?;
            for (i, (s, e)) in panel.psi().iter().zip(panel.eta()).enumerate() {
                writeln!(out, "{:<6}  {:<8}  {}", i + 1, fmt_sig(*s, HUMAN_DIGITS), fmt_sig(*e, HUMAN_DIGITS))?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_rounding() {
        assert_eq!(fmt_sig(0.005, 6), "0.005");
        assert_eq!(fmt_sig(0.4898979485566356, 6), "0.489898");
        assert_eq!(fmt_sig(0.4898979485566356, 12), "0.489897948557");
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(round_sig(123456789.0, 3), 123000000.0);
    }

    #[test]
    fn rounding_json_leaves_integers() {
        let v = round_json(json!({"n": 3, "x": 0.123456789012345, "a": [1.0000000000001, null]}));
        assert_eq!(v["n"], 3);
        assert_eq!(v["x"], 0.123456789012);
        assert_eq!(v["a"][0], 1.0);
        assert!(v["a"][1].is_null());
    }

    #[test]
    fn thread_flag_overrides() {
        assert_eq!(resolve_threads(Some(3)), 3);
        assert_eq!(resolve_threads(Some(0)), 1);
    }
}
