mod commands;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

/// Spectra of the quasi-exactly solvable PT-symmetric quartic family.
#[derive(Parser, Debug)]
#[command(name = "qes", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format (default: pretty; csv for sweep).
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Numerical tolerance for the command's solver.
    #[arg(long)]
    tol: Option<f64>,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the version and timestamp fields.
    #[arg(long)]
    no_meta: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Params {
    #[arg(long = "J")]
    j: u32,
    /// Exact fraction, e.g. 1/2, -3 or 0.75.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    b: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact coefficients of Q_J, lowest power first.
    Qpoly {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value = "raw")]
        form: commands::PolyForm,
        #[command(flatten)]
        common: Common,
    },
    /// Roots of Q_J: the QES eigenvalues.
    Roots {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        common: Common,
    },
    /// Critical (K, F) where the two lowest QES levels merge; J or lo..hi.
    Critical {
        #[arg(long = "J")]
        j: String,
        #[command(flatten)]
        common: Common,
    },
    /// Lowest eigenvalues of the full problem by complex-ray shooting.
    Spectrum {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 6)]
        count: usize,
        /// Right ray angle in degrees (the left ray is its mirror image).
        #[arg(long, default_value_t = -30.0, allow_hyphen_values = true)]
        theta: f64,
        /// Find everything by scanning, without the exact QES values as seeds.
        #[arg(long)]
        no_qes_seeds: bool,
        /// Also seed from a lattice of this spacing in the complex plane.
        #[arg(long)]
        lattice: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Spectra along a line in b, written as b,index,kind,re_E,im_E,residual.
    Sweep {
        #[arg(long = "J")]
        j: u32,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a: String,
        /// lo:hi:step, each an exact fraction.
        #[arg(long, allow_hyphen_values = true)]
        b_range: String,
        #[arg(long, default_value_t = 6)]
        count: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Eigenvalues of the sextic quasi-exactly solvable block.
    Sextic {
        #[arg(long = "J")]
        j: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Run the identity, table, commutator and equivalence checks.
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

/// Failure classes with their exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<qes_core::QesError> for Failure {
    fn from(e: qes_core::QesError) -> Self {
        use qes_core::QesError::*;
        match e {
            InvalidParameter(_) | ParseRational(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

/// What a command produced: a record to print and, possibly, a failure to
/// report after printing it.
pub struct Outcome {
    record: output::Record,
    failure: Option<Failure>,
}

fn emit(text: &str, common: &Common) -> Result<(), Failure> {
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, default_format, outcome) = match cli.command {
        Command::Qpoly { params, form, common } => {
            let o = commands::qpoly(&params, form);
            (common, Format::Pretty, o)
        }
        Command::Roots { params, common } => {
            let o = commands::roots(&params, common.tol);
            (common, Format::Pretty, o)
        }
        Command::Critical { j, common } => {
            let o = commands::critical(&j, common.tol);
            (common, Format::Pretty, o)
        }
        Command::Spectrum {
            params,
            count,
            theta,
            no_qes_seeds,
            lattice,
            common,
        } => {
            let opts = commands::SpectrumArgs {
                count,
                theta,
                qes_seeds: !no_qes_seeds,
                lattice,
                tol: common.tol,
            };
            let o = commands::spectrum(&params, &opts);
            (common, Format::Pretty, o)
        }
        Command::Sweep {
            j,
            a,
            b_range,
            count,
            common,
        } => {
            let o = commands::sweep(j, &a, &b_range, count, common.tol);
            (common, Format::Csv, o)
        }
        Command::Sextic { j, common } => {
            let o = commands::sextic(j, common.tol);
            (common, Format::Pretty, o)
        }
        Command::Verify { common } => (common, Format::Pretty, commands::verify()),
    };
    let format = common.format.unwrap_or(default_format);
    let failure = match outcome {
        Ok(Outcome { record, failure }) => match emit(&record.render(format, !common.no_meta), &common) {
            Ok(()) => failure,
            Err(f) => Some(f),
        },
        Err(f) => Some(f),
    };
    match failure {
        None => ExitCode::SUCCESS,
        Some(f) => {
            eprintln!("qes: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
