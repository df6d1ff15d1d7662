//! `hres`: exact higher residue symbols from the command line.
//!
//! Every command prints one JSON object on standard output. Exit status is
//! 0 on success, 1 when a check ran but did not hold (a `verify` failure, a
//! failed `nodal` check, or a batch line that errored) and 2 on invalid
//! input or a library error, which is reported as `{"error": ...}`.

mod command;

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use command::{run, run_batch_line, Command, DEFAULT_CASES, DEFAULT_SEED};
use residue_core::parallel::par_map;

#[derive(Parser, Debug)]
#[command(name = "hres", version, about = "Exact higher residue symbols, traces and verifications")]
struct Cli {
    /// Run every JSON object in FILE (one per line, `-` for stdin) and print
    /// one result line per task, in input order.
    #[arg(long, value_name = "FILE", global = true)]
    json_lines: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Residue of a differential form, e.g. "t1^-1*t2^-1 d(t1) ^ d(t2)".
    Res {
        /// Number of variables.
        #[arg(long)]
        n: Option<usize>,
        /// Extension modulus such as "x^2+1"; coefficients may then use x.
        #[arg(long)]
        ext: Option<String>,
        form: String,
    },
    /// Tate trace of an operator given as JSON:
    /// [{"coeff": "1", "shift": [0], "window": [[0, 3]]}].
    Trace {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        ext: Option<String>,
        operator: String,
    },
    /// Laurent expansion of a rational function at a place ("inf" or an
    /// irreducible polynomial in t).
    Expand {
        #[arg(long)]
        place: String,
        /// Coefficients below u^ORDER are returned exactly.
        #[arg(long)]
        order: i64,
        rf: String,
    },
    /// Sum of the residues of r dt over all places of the projective line.
    GlobalSum { rf: String },
    /// Randomized property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Cases per property.
        #[arg(long, default_value_t = DEFAULT_CASES)]
        cases: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Checks the nodal-cubic factorization to the given total degree.
    Nodal {
        #[arg(long)]
        order: i64,
    },
}

impl TryFrom<Cmd> for Command {
    type Error = String;

    fn try_from(c: Cmd) -> Result<Self, String> {
        Ok(match c {
            Cmd::Res { n, ext, form } => Command::Res { form, n, ext },
            Cmd::Trace { n, ext, operator } => {
                let operator =
                    serde_json::from_str(&operator).map_err(|e| format!("operator is not valid JSON: {e}"))?;
                Command::Trace { operator, n, ext }
            }
            Cmd::Expand { place, order, rf } => Command::Expand { rf, place, order },
            Cmd::GlobalSum { rf } => Command::GlobalSum { rf },
            Cmd::Verify { suite, cases, seed } => Command::Verify { suite, cases: Some(cases), seed: Some(seed) },
            Cmd::Nodal { order } => Command::Nodal { order },
        })
    }
}

fn emit(value: &Value) {
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "{value}");
}

fn fail(message: impl Into<String>) -> ExitCode {
    emit(&json!({ "error": message.into() }));
    ExitCode::from(2)
}

fn run_batch(path: &PathBuf) -> ExitCode {
    let reader: Box<dyn BufRead> = if path.as_os_str() == "-" {
        Box::new(BufReader::new(io::stdin()))
    } else {
        match File::open(path) {
            Ok(f) => Box::new(BufReader::new(f)),
            Err(e) => return fail(format!("cannot open {}: {e}", path.display())),
        }
    };
    let lines: Vec<String> = match reader.lines().collect::<io::Result<Vec<String>>>() {
        Ok(lines) => lines.into_iter().filter(|l| !l.trim().is_empty()).collect(),
        Err(e) => return fail(format!("cannot read {}: {e}", path.display())),
    };
    let results = par_map(&lines, |l: &String| run_batch_line(l));
    let mut all_ok = true;
    for (value, ok) in &results {
        emit(value);
        all_ok &= ok;
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(e.render().to_string().trim_end()),
    };
    match (cli.json_lines, cli.command) {
        (Some(path), None) => run_batch(&path),
        (Some(_), Some(_)) => fail("--json-lines cannot be combined with a subcommand"),
        (None, None) => fail("a subcommand or --json-lines is required (see --help)"),
        (None, Some(cmd)) => {
            let cmd = match Command::try_from(cmd) {
                Ok(cmd) => cmd,
                Err(e) => return fail(e),
            };
            match run(&cmd) {
                Ok(outcome) => {
                    emit(&outcome.value);
                    if outcome.ok {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => fail(e),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn unknown_flags_and_defaults() {
        assert!(Cli::try_parse_from(["hres", "nodal", "--order", "12", "--verbose"]).is_err());
        let cli = Cli::try_parse_from(["hres", "verify"]).unwrap();
        let cmd = Command::try_from(cli.command.unwrap()).unwrap();
        assert_eq!(
            cmd,
            Command::Verify { suite: "all".into(), cases: Some(DEFAULT_CASES), seed: Some(DEFAULT_SEED) }
        );
    }
}
