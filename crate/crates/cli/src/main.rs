//! `conservkit`: exact computations on the conservative algebra W(2) and its
//! subalgebras from the command line.

mod commands;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CliError, RunReport, EXIT_INPUT};

/// Directory that relative `--report` paths are resolved against.
const REPORT_DIR_VAR: &str = "CONSERVKIT_REPORT_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "conservkit",
    version,
    about = "Exact derivations and automorphisms of W(2)"
)]
struct Cli {
    /// Also write a JSON report to this path.
    #[arg(long, global = true, value_name = "FILE")]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Basis {
    Alpha,
    E,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Sampling,
    Minors,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CompareTarget {
    Paper,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the structure tensor of W(n) under the Kantor product.
    BuildW {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// 1-based index of the fixed vector v_i.
        #[arg(long, default_value_t = 1)]
        fixed: usize,
        #[arg(long, value_enum, default_value = "alpha")]
        basis: Basis,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the multiplication table, optionally diffing it against the published one.
    Table {
        file: PathBuf,
        #[arg(long, value_enum)]
        compare: Option<CompareTarget>,
    },
    /// Restrict to the span of some basis vectors (e.g. `1..6`).
    Sub {
        file: PathBuf,
        #[arg(long)]
        span: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute a basis of the derivation algebra.
    Der { file: PathBuf },
    /// Decide whether every local derivation is a derivation.
    Locder {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Check one matrix for being an automorphism.
    AutVerify {
        file: PathBuf,
        #[arg(long, conflicts_with = "family", required_unless_present = "family")]
        matrix: Option<PathBuf>,
        /// Family member as `a=..,b=..`.
        #[arg(long)]
        family: Option<String>,
    },
    /// Symbolically certify that the two-parameter family consists of automorphisms.
    AutFamilyCertify,
    /// Classify a matrix against the automorphism family.
    Locaut {
        file: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Recover a derivation from samples of a 2-local derivation.
    TwolocalDer {
        file: PathBuf,
        #[arg(long)]
        samples: PathBuf,
    },
    /// Recover an automorphism from samples of a 2-local automorphism.
    TwolocalAut {
        file: PathBuf,
        #[arg(long)]
        samples: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::BuildW { .. } => "build-w",
            Command::Table { .. } => "table",
            Command::Sub { .. } => "sub",
            Command::Der { .. } => "der",
            Command::Locder { .. } => "locder",
            Command::AutVerify { .. } => "aut-verify",
            Command::AutFamilyCertify => "aut-family-certify",
            Command::Locaut { .. } => "locaut",
            Command::TwolocalDer { .. } => "twolocal-der",
            Command::TwolocalAut { .. } => "twolocal-aut",
        }
    }
}

fn dispatch(command: &Command) -> Result<RunReport, CliError> {
    match command {
        Command::BuildW {
            n,
            fixed,
            basis,
            out,
        } => {
            let basis = match basis {
                Basis::Alpha => "alpha",
                Basis::E => "e",
            };
            commands::build_w(*n, *fixed, basis, out)
        }
        Command::Table { file, compare } => {
            commands::table(file, compare.map(|CompareTarget::Paper| "paper"))
        }
        Command::Sub { file, span, out } => commands::sub(file, span, out),
        Command::Der { file } => commands::der(file),
        Command::Locder { file, method } => {
            let method = match method {
                Method::Sampling => "sampling",
                Method::Minors => "minors",
                Method::Both => "both",
            };
            commands::locder(file, method)
        }
        Command::AutVerify {
            file,
            matrix,
            family,
        } => commands::aut_verify(file, matrix.as_deref(), family.as_deref()),
        Command::AutFamilyCertify => commands::aut_family_certify(),
        Command::Locaut { file, matrix } => commands::locaut(file, matrix),
        Command::TwolocalDer { file, samples } => commands::twolocal_der(file, samples),
        Command::TwolocalAut { file, samples } => commands::twolocal_aut(file, samples),
    }
}

fn report_path(path: &Path) -> PathBuf {
    match std::env::var_os(REPORT_DIR_VAR) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors, matching input errors below
    let cli = Cli::parse();
    let name = cli.command.name();
    let report = match dispatch(&cli.command) {
        Ok(r) => {
            print!("{}", r.text);
            r
        }
        Err(e) => {
            let r = RunReport::input_error(name, &e);
            eprint!("{}", r.text);
            r
        }
    };
    let mut code = report.exit_code;
    if let Some(path) = &cli.report {
        let path = report_path(path);
        if let Err(e) = commands::write_file(&path, &report.to_json()) {
            eprintln!("error: cannot write report: {e}");
            code = EXIT_INPUT;
        }
    }
    ExitCode::from(code as u8)
}
