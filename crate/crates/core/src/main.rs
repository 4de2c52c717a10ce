use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use relator_forge::cli::{self, Command, Options, Target, Verb, EXIT_ERROR, MAX_DEGREE_ENV};
use relator_forge::quotient::{DEFAULT_MAX_DEGREE, HARD_MAX_DEGREE};

#[derive(Parser)]
#[command(
    name = "relator-forge",
    version,
    about = "Kernels, certificates and finite quotients for G_{r,w}(l,k)"
)]
struct Cli {
    #[command(subcommand)]
    verb: VerbArgs,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct TargetArgs {
    /// Presentation in the text syntax, e.g. "<a,b | a = [a, a^b]>".
    presentation: Option<String>,
    /// Read the presentation from a file.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Family member "r,w,l,k" with r, w words over a, b.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Subcommand)]
enum VerbArgs {
    /// Exponent sums, canonical relators and family detection.
    Analyze {
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Relator schemas of the kernel onto Z.
    Kernel {
        #[command(flatten)]
        target: TargetArgs,
        /// Also list the relators on the generators a_-N..a_N.
        #[arg(long)]
        window: Option<u32>,
    },
    /// Free product splitting of the kernel by residues.
    Split {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        modulus: u32,
    },
    /// Soficity certificate, or UNKNOWN.
    Certify {
        #[command(flatten)]
        target: TargetArgs,
        /// Amalgam stages stored for direct limits.
        #[arg(long, default_value_t = relator_forge::certify::DEFAULT_STAGES)]
        stages: u32,
    },
    /// Residual finiteness and residual solvability obstructions.
    Obstruct {
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Homomorphisms into the symmetric group of degree m.
    Quotients {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Word whose image is tested in every solution.
        #[arg(long)]
        element: Option<String>,
        /// Print every solution.
        #[arg(long)]
        list: bool,
    },
    /// Symbolic checks of the family's commutator identity and symmetries.
    Lemmas,
}

fn to_target(t: TargetArgs) -> Option<Target> {
    match (t.presentation, t.file, t.family) {
        (Some(p), _, _) => Some(Target::Inline(p)),
        (_, Some(f), _) => Some(Target::File(f)),
        (_, _, Some(f)) => Some(Target::Family(f)),
        _ => None,
    }
}

fn max_degree() -> Result<usize, String> {
    match std::env::var(MAX_DEGREE_ENV) {
        Err(_) => Ok(DEFAULT_MAX_DEGREE),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(m) if (1..=HARD_MAX_DEGREE).contains(&m) => Ok(m),
            _ => Err(format!(
                "{MAX_DEGREE_ENV} must be an integer in 1..={HARD_MAX_DEGREE}, got {v:?}"
            )),
        },
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let mut options = Options::default();
    let (verb, target) = match args.verb {
        VerbArgs::Analyze { target } => (Verb::Analyze, to_target(target)),
        VerbArgs::Kernel { target, window } => {
            options.window = window;
            (Verb::Kernel, to_target(target))
        }
        VerbArgs::Split { target, modulus } => {
            options.modulus = Some(modulus);
            (Verb::Split, to_target(target))
        }
        VerbArgs::Certify { target, stages } => {
            options.stages = stages;
            (Verb::Certify, to_target(target))
        }
        VerbArgs::Obstruct { target } => (Verb::Obstruct, to_target(target)),
        VerbArgs::Quotients {
            target,
            degree,
            element,
            list,
        } => {
            options.degree = degree;
            options.element = element;
            options.list = list;
            match max_degree() {
                Ok(m) => options.max_degree = m,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_ERROR as u8);
                }
            }
            (Verb::Quotients, to_target(target))
        }
        VerbArgs::Lemmas => (Verb::Lemmas, None),
    };
    let report = cli::run(&Command { verb, target, options });
    let _ = std::io::stdout().write_all(report.stdout.as_bytes());
    let _ = std::io::stderr().write_all(report.stderr.as_bytes());
    ExitCode::from(report.status as u8)
}
