//! Command-line front end. [`run`] takes the argument list and the three
//! standard streams so it can be driven from tests without a subprocess.
//!
//! Exit codes: 0 success, 1 domain failure (infeasible, ambiguous,
//! inconsistent, violated condition, exhausted budget), 2 usage error.

use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use abgame_core::{
    audit, build_strategy, decode, find_collision, min_k, structured_decode, AnswerSignature,
    Budget, DecodeOutcome, Error, GameSpec, SearchOptions, Strategy, StructuredOutcome, Variant,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

/// Environment variable holding the default search node budget.
pub const BUDGET_ENV: &str = "ABGAME_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "abgame", version, about = "Static black-peg AB game and Mastermind strategies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the strategy for a game.
    Generate {
        #[arg(long)]
        pegs: usize,
        #[arg(long)]
        colors: usize,
        #[arg(long, default_value = "ab", value_parser = parse_variant)]
        variant: Variant,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that every secret gets a distinct answer signature.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Recover the secret from a comma-separated list of answers.
    Decode {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        answers: String,
        /// Also print the step-by-step reasoning (generated strategies only).
        #[arg(long)]
        explain: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Check the necessary conditions on a strategy and report the counting bound.
    Audit {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Find the smallest feasible strategy by exhaustive search.
    Search {
        #[arg(long)]
        pegs: usize,
        #[arg(long)]
        colors: usize,
        #[arg(long, default_value = "ab", value_parser = parse_variant)]
        variant: Variant,
        #[arg(long)]
        max_k: Option<usize>,
        /// Node budget; defaults to $ABGAME_BUDGET, then to the library default.
        #[arg(long)]
        budget: Option<u64>,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        time_limit: Option<u64>,
        /// Disable symmetry breaking and pruning.
        #[arg(long)]
        paranoid: bool,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Print the questions, read one line of answers, print the secret.
    Play {
        #[arg(long)]
        pegs: usize,
        #[arg(long)]
        colors: usize,
        #[arg(long)]
        explain: bool,
    },
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    /// Report already written to stdout.
    Domain,
    DomainMsg(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExhausted { .. } => Failure::DomainMsg(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match dispatch(cli.command, stdin, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(Failure::Domain) => EXIT_DOMAIN,
        Err(Failure::DomainMsg(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_DOMAIN
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Generate { pegs, colors, variant, format, output } => {
            let spec = GameSpec::new(variant, pegs, colors)?;
            let s = build_strategy(&spec)?;
            let text = render_strategy(&s, format);
            match output {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(())
        }
        Command::Verify { input, format } => {
            let s = load(&input)?;
            let collision = find_collision(&s);
            match format {
                Format::Json => {
                    let v = json!({
                        "feasible": collision.is_none(),
                        "collision": collision.map(|(a, b)| [a, b]),
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
                }
                Format::Table => match collision {
                    None => writeln!(out, "feasible")?,
                    Some((a, b)) => writeln!(out, "infeasible; collision {a} vs {b}")?,
                },
            }
            if collision.is_some() {
                return Err(Failure::Domain);
            }
            Ok(())
        }
        Command::Decode { input, answers, explain, format } => {
            let s = load(&input)?;
            let sig: AnswerSignature = answers.parse()?;
            let outcome = decode(&s, &sig)?;
            let trace = if explain {
                match structured_decode(&s, &sig) {
                    Ok((structured, trace)) => {
                        check_agreement(&outcome, &structured)?;
                        Some(trace)
                    }
                    Err(Error::Unsupported(msg)) => {
                        writeln!(err, "note: no explanation available: {msg}")?;
                        None
                    }
                    Err(e) => return Err(e.into()),
                }
            } else {
                None
            };
            match format {
                Format::Json => {
                    let mut v = serde_json::to_value(&outcome).expect("json");
                    if let Some(t) = &trace {
                        v["trace"] = serde_json::to_value(t).expect("json");
                    }
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
                }
                Format::Table => {
                    writeln!(out, "{}", describe(&outcome))?;
                    if let Some(t) = &trace {
                        write!(out, "{t}")?;
                    }
                }
            }
            match outcome {
                DecodeOutcome::Unique { .. } => Ok(()),
                _ => Err(Failure::Domain),
            }
        }
        Command::Audit { input, format } => {
            let s = load(&input)?;
            let report = audit(&s)?;
            match format {
                Format::Json => writeln!(out, "{}", report.to_json())?,
                Format::Table => {
                    writeln!(out, "questions: {}", report.questions)?;
                    writeln!(out, "singles per peg: {:?}", report.l)?;
                    writeln!(out, "lower bound: {}", report.lower_bound)?;
                    if !report.not_applicable.is_empty() {
                        writeln!(out, "not applicable: {}", report.not_applicable.join(", "))?;
                    }
                    if report.is_clean() {
                        writeln!(out, "violations: none")?;
                    }
                    for v in &report.violations {
                        let qs: Vec<String> = v.questions.iter().map(|q| format!("Q{}", q + 1)).collect();
                        writeln!(out, "{} pegs {:?} {}: {}", v.code, v.pegs, qs.join(","), v.detail)?;
                    }
                }
            }
            if report.is_clean() {
                Ok(())
            } else {
                Err(Failure::Domain)
            }
        }
        Command::Search {
            pegs,
            colors,
            variant,
            max_k,
            budget,
            time_limit,
            paranoid,
            threads,
            format,
        } => {
            let spec = GameSpec::new(variant, pegs, colors)?;
            let max_nodes = match budget {
                Some(n) => Some(n),
                None => env_budget()?,
            };
            let mut b = Budget::default();
            if let Some(n) = max_nodes {
                b.max_nodes = n;
            }
            if let Some(secs) = time_limit {
                b.max_time = Some(Duration::from_secs(secs));
            }
            if threads == Some(0) {
                return Err(Failure::Usage("--threads must be at least 1".into()));
            }
            let mut opts = if paranoid { SearchOptions::paranoid() } else { SearchOptions::default() };
            opts = opts.with_budget(b);
            opts.threads = threads;
            let report = min_k(&spec, &opts, max_k);
            match format {
                Format::Json => writeln!(out, "{}", report.to_json())?,
                Format::Table => {
                    writeln!(out, "game: {}", report.spec)?;
                    for r in &report.infeasible_sizes_checked {
                        writeln!(out, "k = {}: no feasible strategy ({} nodes)", r.k, r.nodes)?;
                    }
                    match (&report.min_k, &report.witness) {
                        (Some(k), Some(w)) => {
                            writeln!(out, "min k = {k}")?;
                            write!(out, "{}", w.to_table())?;
                        }
                        _ if report.budget_exhausted => writeln!(out, "budget exhausted")?,
                        _ => writeln!(out, "no feasible strategy up to k = {}", max_k.unwrap_or(0))?,
                    }
                    writeln!(out, "nodes: {}, elapsed: {:.3}s", report.nodes_explored, report.elapsed_secs)?;
                }
            }
            if report.min_k.is_some() {
                Ok(())
            } else {
                Err(Failure::Domain)
            }
        }
        Command::Play { pegs, colors, explain } => {
            let spec = GameSpec::ab(pegs, colors)?;
            let s = build_strategy(&spec)?;
            writeln!(
                err,
                "{} questions; answer each with its number of black pegs, as one comma-separated line",
                s.len()
            )?;
            for (i, q) in s.questions().iter().enumerate() {
                writeln!(out, "Q{}: {q}", i + 1)?;
            }
            out.flush()?;
            let mut line = String::new();
            stdin.read_line(&mut line)?;
            let sig: AnswerSignature = line.parse()?;
            let outcome = decode(&s, &sig)?;
            writeln!(out, "{}", describe(&outcome))?;
            if explain {
                if let Ok((_, trace)) = structured_decode(&s, &sig) {
                    write!(out, "{trace}")?;
                }
            }
            match outcome {
                DecodeOutcome::Unique { .. } => Ok(()),
                _ => Err(Failure::Domain),
            }
        }
    }
}

fn render_strategy(s: &Strategy, format: Format) -> String {
    match format {
        Format::Json => s.to_json() + "\n",
        Format::Table => s.to_table(),
    }
}

fn load(path: &Path) -> std::result::Result<Strategy, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Strategy::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn env_budget() -> std::result::Result<Option<u64>, Failure> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("{BUDGET_ENV}={v:?} is not a node count"))),
        Err(_) => Ok(None),
    }
}

fn describe(outcome: &DecodeOutcome) -> String {
    match outcome {
        DecodeOutcome::Unique { secret } => secret.to_string(),
        DecodeOutcome::Inconsistent => "inconsistent: no secret gives these answers".into(),
        DecodeOutcome::Ambiguous { candidates, total } => {
            let listed: Vec<String> = candidates.iter().map(|c| c.to_string()).collect();
            let more = if *total > candidates.len() { ", ..." } else { "" };
            format!("ambiguous; {total} candidates: {}{more}", listed.join(", "))
        }
    }
}

fn check_agreement(generic: &DecodeOutcome, structured: &StructuredOutcome) -> Outcome {
    let same = match (generic, structured) {
        (DecodeOutcome::Unique { secret }, StructuredOutcome::Secret { secret: s }) => secret == s,
        (DecodeOutcome::Inconsistent, StructuredOutcome::Inconsistent) => true,
        _ => false,
    };
    if same {
        Ok(())
    } else {
        Err(Failure::DomainMsg(format!(
            "structured decoder disagrees: {generic:?} vs {structured:?}"
        )))
    }
}
