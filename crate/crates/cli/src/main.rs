//! `mfw`: command-line front end for the `mfw-core` library.
//!
//! Exit status: 0 on success, 1 on a mathematical failure, 2 on a usage error.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Report;

#[derive(Parser, Debug)]
#[command(
    name = "mfw",
    version,
    about = "Exact invariants of hypersurface singularities and their matrix factorizations"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutFormat::Text, global = true)]
    pub out: OutFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutFormat {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Milnor algebra of a potential.
    Milnor(PotentialArgs),
    /// Grothendieck residue of `f`, or the residue pairing of `f` and `g`.
    Residue(ResidueArgs),
    /// Matrix factorizations.
    #[command(subcommand)]
    Mf(MfCommand),
    /// Finite-dimensional algebras.
    #[command(subcommand)]
    Algebra(AlgebraCommand),
    /// Gopakumar–Vafa generating series.
    #[command(subcommand)]
    Series(SeriesCommand),
    /// Built-in worked examples.
    Example(ExampleArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderArg {
    Global,
    Local,
}

#[derive(Args, Debug)]
pub struct PotentialArgs {
    #[arg(long)]
    pub potential: String,
    /// Comma-separated variable names.
    #[arg(long, value_delimiter = ',', required = true)]
    pub vars: Vec<String>,
    #[arg(long, value_enum, default_value_t = OrderArg::Global)]
    pub order: OrderArg,
}

#[derive(Args, Debug)]
pub struct ResidueArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub g: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyArg {
    Ca1,
    Laufer,
}

#[derive(Args, Debug)]
pub struct MfSource {
    /// Matrix-factorization file.
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    pub mf: Option<String>,
    /// Built-in family.
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Args, Debug)]
pub struct MorphismArgs {
    /// Expression in the named generators (`a`, `b` for the Laufer family); numbers are multiples of the identity.
    #[arg(long, conflicts_with_all = ["alpha0", "alpha1"])]
    pub morphism: Option<String>,
    /// Block `F0 -> F0`, rows separated by `;`, entries by `,`.
    #[arg(long, requires = "alpha1")]
    pub alpha0: Option<String>,
    /// Block `F1 -> F1`.
    #[arg(long, requires = "alpha0")]
    pub alpha1: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum MfCommand {
    /// Checks both compositions against `W` times the identity.
    Validate(MfSource),
    /// Chern character in the Milnor algebra.
    Chern(MfSource),
    /// Euler pairing with itself or with a second factorization.
    Chi {
        #[command(flatten)]
        source: MfSource,
        /// Second factorization file.
        #[arg(long)]
        with: Option<String>,
    },
    /// Boundary-bulk image of an even endomorphism.
    Tau {
        #[command(flatten)]
        source: MfSource,
        #[command(flatten)]
        morphism: MorphismArgs,
    },
    /// Decides whether an even endomorphism is null-homotopic.
    Hom {
        #[command(flatten)]
        source: MfSource,
        #[command(flatten)]
        morphism: MorphismArgs,
        #[arg(long, default_value_t = mfw_core::mf::DEFAULT_JET_ORDER)]
        jet_order: u32,
    },
    /// Contraction algebra via jet-truncated endomorphisms.
    Acon {
        #[command(flatten)]
        source: MfSource,
        #[arg(long, default_value_t = mfw_core::mf::DEFAULT_JET_ORDER)]
        jet_order: u32,
        /// Writes the algebra file here.
        #[arg(long)]
        save: Option<String>,
    },
}

#[derive(Args, Debug)]
pub struct PresentationArgs {
    /// Comma-separated generator names.
    #[arg(long, value_delimiter = ',')]
    pub gens: Vec<String>,
    /// Semicolon-separated relations.
    #[arg(long, value_delimiter = ';')]
    pub relations: Vec<String>,
    #[arg(long, default_value_t = 12)]
    pub degree_bound: usize,
}

#[derive(Args, Debug)]
pub struct AlgebraSource {
    /// Algebra file.
    #[arg(long, conflicts_with = "gens")]
    pub algebra: Option<String>,
    #[command(flatten)]
    pub presentation: PresentationArgs,
}

#[derive(Subcommand, Debug)]
pub enum AlgebraCommand {
    /// Builds an algebra from generators and relations.
    Present {
        #[command(flatten)]
        presentation: PresentationArgs,
        /// Writes the algebra file here.
        #[arg(long)]
        save: Option<String>,
    },
    /// Dimension of `A/[A,A]` with coset representatives.
    Hh0(AlgebraSource),
    /// Jacobson radical and semisimple block sizes.
    Radical(AlgebraSource),
    /// Socle.
    Socle(AlgebraSource),
    /// Hochschild cohomology dimensions.
    Hhdims {
        #[command(flatten)]
        source: AlgebraSource,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Checks a bilinear form for nondegeneracy and invariance.
    Frobenius {
        #[command(flatten)]
        source: AlgebraSource,
        /// Gram matrix, rows separated by `;`, entries by `,`.
        #[arg(long)]
        pairing: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum SeriesCommand {
    /// Expands the product formula.
    Expand {
        /// Comma-separated `n_1, n_2, ...`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        n: Vec<i64>,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// Recovers `n_j` from a series.
    Invert {
        /// Polynomial in `t`.
        #[arg(long)]
        series: String,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// `sum_j j^2 n_j` with the degree check.
    Dim {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        n: Vec<i64>,
    },
}

#[derive(Args, Debug)]
pub struct ExampleArgs {
    #[arg(value_enum)]
    pub family: FamilyArg,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Includes the contraction algebra and everything derived from it.
    #[arg(long)]
    pub all: bool,
    #[arg(long, default_value_t = mfw_core::mf::DEFAULT_JET_ORDER)]
    pub jet_order: u32,
}

/// Errors that stop a command before a report exists.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Math(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = cli.out;
    match commands::run(cli) {
        Ok(report) => {
            print!("{}", render(&report, out));
            ExitCode::from(if report.is_failure() { 1 } else { 0 })
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Math(msg)) => {
            let mut report = Report::new("error");
            report.fail(msg.clone());
            if out == OutFormat::Structured {
                print!("{}", report.to_structured());
            }
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn render(report: &Report, out: OutFormat) -> String {
    match out {
        OutFormat::Text => report.to_text(),
        OutFormat::Structured => report.to_structured(),
    }
}
