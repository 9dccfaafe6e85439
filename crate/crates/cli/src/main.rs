//! `heegner`: command-line front end for the heegner-core library.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "heegner", version, about = "Eisenstein series coefficients, Heegner divisor degrees and Green's function integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Lattice description in JSON: {"name": ..., "gram": [[...], ...]}.
    #[arg(long, value_name = "FILE", conflicts_with = "builtin", required_unless_present = "builtin")]
    pub lattice: Option<PathBuf>,
    /// Built-in lattice: sl2, siegel, hilbert:D or hyperbolic_sum:NAME.
    #[arg(long, value_name = "NAME[:PARAM]")]
    pub builtin: Option<String>,
    /// Significant decimal digits for numeric output.
    #[arg(long, value_name = "DIGITS", default_value_t = 50, value_parser = clap::value_parser!(u32).range(10..=2000))]
    pub precision: u32,
    #[arg(long)]
    pub json: bool,
    /// Accept weight 3/2 (signature (2,1), e.g. sl2).
    #[arg(long)]
    pub formal: bool,
    /// Assert that the rational quadratic space has Witt index 1 (weight 2 lattices).
    #[arg(long)]
    pub assume_witt: bool,
    /// Enumeration cap for representation counts; HEEGNER_BUDGET takes precedence.
    #[arg(long, value_name = "N")]
    pub budget: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct Element {
    /// Canonical coordinates of gamma in L'/L, comma separated (default: 0).
    #[arg(long, value_name = "C1,C2,...")]
    pub gamma: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Signature, weight and the discriminant group table.
    Info {
        #[command(flatten)]
        common: Common,
    },
    /// Representation numbers N(p^nu) and the local polynomial at p.
    Repnum {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        element: Element,
        #[arg(long, value_name = "P/Q", allow_hyphen_values = true)]
        n: String,
        #[arg(long, value_name = "PRIME")]
        p: u64,
        /// Extra exponents beyond w_p.
        #[arg(long, default_value_t = 0)]
        pad: u32,
    },
    /// The generalized divisor sum at s = kappa with its logarithmic derivative.
    Sigma {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        element: Element,
        #[arg(long, value_name = "P/Q", allow_hyphen_values = true)]
        n: String,
        /// Additional primes to include in the product.
        #[arg(long = "prime", value_name = "P")]
        primes: Vec<u64>,
    },
    /// The coefficient C(gamma, n, s): exact at s = 0, numeric otherwise.
    Coeff {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        element: Element,
        #[arg(long, value_name = "P/Q", allow_hyphen_values = true)]
        n: String,
        #[arg(long, value_name = "P/Q", allow_hyphen_values = true, default_value = "0")]
        s: String,
    },
    /// deg H(beta, m) / B, plus deg T(M) on Hilbert lattices.
    Degree {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        element: Element,
        #[arg(long, value_name = "-P/Q", allow_hyphen_values = true)]
        m: String,
    },
    /// Coefficients of E_0(tau, 0) up to a bound.
    Qexp {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "P/Q", default_value = "4")]
        max_n: String,
    },
    /// Weight of the Borcherds product with the given divisor.
    Weight {
        #[command(flatten)]
        common: Common,
        /// Divisor term "gamma=C1,C2;m=-P/Q;a=P/Q" (repeatable).
        #[arg(long = "term", value_name = "SPEC", required = true, allow_hyphen_values = true)]
        terms: Vec<String>,
    },
    /// Green's function integral for H(beta, m), or the Borcherds integral for a divisor.
    Integral {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        element: Element,
        #[arg(long, value_name = "-P/Q", allow_hyphen_values = true, conflicts_with = "terms", required_unless_present = "terms")]
        m: Option<String>,
        #[arg(long = "term", value_name = "SPEC", allow_hyphen_values = true)]
        terms: Vec<String>,
    },
    /// Run the compiled-in identity suite for a built-in lattice.
    Verify {
        #[arg(long, value_name = "NAME[:PARAM]")]
        builtin: String,
        #[arg(long, value_name = "DIGITS", default_value_t = 50, value_parser = clap::value_parser!(u32).range(10..=2000))]
        precision: u32,
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "N")]
        budget: Option<u64>,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Info { common } => commands::info(&common),
        Command::Repnum { common, element, n, p, pad } => commands::repnum(&common, &element, &n, p, pad),
        Command::Sigma { common, element, n, primes } => commands::sigma(&common, &element, &n, &primes),
        Command::Coeff { common, element, n, s } => commands::coeff(&common, &element, &n, &s),
        Command::Degree { common, element, m } => commands::degree(&common, &element, &m),
        Command::Qexp { common, max_n } => commands::qexp(&common, &max_n),
        Command::Weight { common, terms } => commands::weight(&common, &terms),
        Command::Integral { common, element, m, terms } => match m {
            Some(m) => commands::integral(&common, &element, &m),
            None => commands::borcherds(&common, &terms),
        },
        Command::Verify { builtin, precision, json, budget } => commands::verify(&builtin, precision, json, budget),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::VerifyFailed(out)) => {
            print!("{out}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
