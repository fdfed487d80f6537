//! Command-line front end: argument parsing, dispatch and exit codes.
//!
//! Exit codes: `0` success, `1` oracle mismatch or internal failure,
//! `2` usage error, `3` scenario error.

pub mod commands;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use gradalg_core::exact::parse_rational;
use gradalg_core::{load_scenario, preset, Rational, Scenario};

use report::{Cell, Format, ReportDocument, Row};

#[derive(Debug, Parser)]
#[command(
    name = "gradalg",
    version,
    about = "Exact diagnostics for graded subalgebras of Q(x) built from formal divisors"
)]
pub struct Cli {
    /// Built-in scenario: chen, harmonic or finite:<d>
    #[arg(long, global = true, conflicts_with = "scenario")]
    pub preset: Option<String>,
    /// Scenario document (TOML)
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    /// Output format; defaults to json for `report` and table otherwise
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for sweeps; output does not depend on it
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Floor divisor entries I(n) and J(n) for 1 ≤ n ≤ N
    Seq {
        #[arg(long, default_value_t = 16)]
        n: u64,
    },
    /// dim Bₙ = J(n) + 1 for 0 ≤ n ≤ N
    Dim {
        #[arg(long, default_value_t = 16)]
        n: u64,
    },
    /// Sampled approximability certificate
    Certify {
        #[arg(long, default_value = "1/16", value_parser = parse_epsilon)]
        epsilon: Rational,
        #[arg(long, value_delimiter = ',', default_values_t = [16u64, 32, 64],
              value_parser = clap::value_parser!(u64).range(1..))]
        p_list: Vec<u64>,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
    },
    /// Growth of the negative-valuation support of b/b₁ⁿ
    Support {
        #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
    },
    /// dim Bₙ / n at powers of two up to N
    Volume {
        #[arg(long, default_value_t = 1 << 20, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
    },
    /// Compare brute-force oracle ranks with the closed forms
    OracleCheck {
        #[arg(long, default_value_t = 12)]
        cap: u64,
        /// Random closure checks
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
    /// Every command above with its defaults, as one document
    Report,
}

fn parse_epsilon(text: &str) -> Result<Rational, String> {
    let eps = parse_rational(text)
        .ok_or_else(|| format!("{text:?} is not an exact rational like 1/16"))?;
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    if eps <= zero || eps >= one {
        return Err(format!(
            "epsilon must lie strictly between 0 and 1, got {text}"
        ));
    }
    Ok(eps)
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Scenario(String),
    Oracle(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Scenario(_) => 3,
            Failure::Oracle(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Scenario(m) | Failure::Oracle(m) => m,
        }
    }
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };

    let outcome = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build()
        {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Failure::Usage(format!("cannot start {t} threads: {e}"))),
        },
        None => execute(&cli),
    };

    match outcome {
        Ok((text, mismatches)) => {
            if out
                .write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return 1;
            }
            if mismatches > 0 {
                let _ = writeln!(
                    err,
                    "error: {mismatches} oracle check(s) disagree with the closed forms"
                );
                return 1;
            }
            0
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn load(cli: &Cli) -> Result<Scenario, Failure> {
    match (&cli.preset, &cli.scenario) {
        (_, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Scenario(format!("{}: {e}", path.display())))?;
            load_scenario(&text).map_err(|e| Failure::Scenario(format!("{}: {e}", path.display())))
        }
        (Some(name), None) => preset(name).map_err(|e| Failure::Scenario(e.to_string())),
        (None, None) => Ok(preset("chen").expect("built-in preset")),
    }
}

fn execute(cli: &Cli) -> Result<(String, usize), Failure> {
    let s = load(cli)?;
    let oracle = |cap, samples| {
        commands::oracle_check(&s, cap, samples, cli.seed)
            .map_err(|e| Failure::Oracle(e.to_string()))
    };
    let (doc, mismatches) = match &cli.command {
        Command::Seq { n } => (commands::seq(&s, *n), 0),
        Command::Dim { n } => (commands::dim(&s, *n), 0),
        Command::Certify {
            epsilon,
            p_list,
            n_max,
        } => {
            if p_list.is_empty() {
                return Err(Failure::Usage("--p-list needs at least one value".into()));
            }
            (commands::certify(&s, epsilon, p_list, *n_max), 0)
        }
        Command::Support { n_max } => (commands::support(&s, *n_max), 0),
        Command::Volume { n_max } => (commands::volume(&s, *n_max), 0),
        Command::OracleCheck { cap, samples } => oracle(*cap, *samples)?,
        Command::Report => {
            let (check, mismatches) = oracle(12, 32)?;
            (full_report(&s, cli.seed, check), mismatches)
        }
    };
    let format = cli.format.unwrap_or(match cli.command {
        Command::Report => Format::Json,
        _ => Format::Table,
    });
    Ok((report::render(&doc, format), mismatches))
}

fn full_report(s: &Scenario, seed: u64, oracle_check: ReportDocument) -> ReportDocument {
    let eps = Rational::new(1.into(), 16.into());
    let sections = vec![
        commands::seq(s, 16),
        commands::dim(s, 16),
        commands::certify(s, &eps, &[16, 32, 64], 1000),
        commands::support(s, 4096),
        commands::volume(s, 1 << 20),
        oracle_check,
    ];
    let mut doc = ReportDocument::new("report", s.name()).param("seed", Cell::int(seed));
    let mut summary = Row::new().with("description", Cell::text(s.description()));
    for (section, key, field) in [
        (2, "certificate", "verdict"),
        (3, "support_final_count", "final_count"),
        (4, "total_mass", "total_mass"),
        (5, "oracle", "verdict"),
    ] {
        let value = sections[section]
            .summary_value(field)
            .cloned()
            .unwrap_or(Cell::Missing);
        summary = summary.with(key, value);
    }
    doc.summary = summary;
    doc.sections = sections;
    doc
}
