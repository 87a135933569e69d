use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use sphtet::tolerances::DEFAULT_FD_STEP;

use sphtet_cli::document::{parse_documents, Format, TetDocument, Writer};
use sphtet_cli::{convert, parse_pair, sample, verify, wigner, CliError};

/// Spherical tetrahedra: length/angle conversion and Wigner derivatives.
///
/// All input is in radians. Exit status: 0 success, 1 invalid input or
/// failed verification, 2 degenerate or unrealizable geometry.
#[derive(Parser)]
#[command(name = "sphtet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert lengths to dihedral angles or back, one output per input document.
    Convert {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Derivative report for one edge and its opposite.
    Wigner {
        #[command(flatten)]
        input: InputArgs,
        /// Edge as two vertex digits, e.g. 01 or 23.
        #[arg(long)]
        pair: String,
        #[arg(long, default_value_t = DEFAULT_FD_STEP)]
        fd_step: f64,
    },
    /// Check every identity and derivative on sampled tetrahedra.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_FD_STEP)]
        fd_step: f64,
    },
    /// Print reproducible random tetrahedra as length documents.
    Sample {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct InputArgs {
    /// JSON or CSV file; `-` reads stdin.
    #[arg(long, default_value = "-")]
    input: PathBuf,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Show values in degrees. Output in degrees cannot be read back.
    #[arg(long)]
    degrees: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl OutputArgs {
    fn writer(&self) -> DocWriter {
        let format = match self.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        };
        DocWriter {
            inner: Writer::new(format),
            degrees: self.degrees,
        }
    }
}

struct DocWriter {
    inner: Writer,
    degrees: bool,
}

impl DocWriter {
    fn emit(&mut self, doc: &TetDocument) {
        let text = if self.degrees {
            self.inner.render(&doc.to_degrees())
        } else {
            self.inner.render(doc)
        };
        emit(&text);
    }
}

fn read_input(args: &InputArgs) -> Result<Vec<TetDocument>, CliError> {
    let text = if args.input.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::input(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(&args.input)
            .map_err(|e| CliError::input(format!("{}: {e}", args.input.display())))?
    };
    parse_documents(&text)
}

fn emit(text: &str) {
    let mut out = io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn json_line<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("reports serialize") + "\n"
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Convert { input, output } => {
            let mut writer = output.writer();
            for doc in read_input(&input)? {
                writer.emit(&convert(&doc)?);
            }
        }
        Command::Wigner {
            input,
            pair,
            fd_step,
        } => {
            let edge = parse_pair(&pair)?;
            for doc in read_input(&input)? {
                emit(&json_line(&wigner(&doc, edge, fd_step)?));
            }
        }
        Command::Verify {
            seed,
            count,
            tol,
            fd_step,
        } => {
            let summary = verify(seed, count, tol, fd_step)?;
            emit(&json_line(&summary));
            if summary.exit_code() != 0 {
                return Err(CliError {
                    code: summary.exit_code(),
                    kind: "verification_failed",
                    message: format!(
                        "{} failed, {} skipped of {} samples at tol {tol:e}",
                        summary.failed, summary.skipped, summary.count
                    ),
                });
            }
        }
        Command::Sample {
            seed,
            count,
            output,
        } => {
            let mut writer = output.writer();
            for doc in sample(seed, count)? {
                writer.emit(&doc);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::input(e.to_string().trim_end().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.code as u8)
        }
    }
}
