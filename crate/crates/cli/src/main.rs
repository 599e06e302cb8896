use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sofic_perm::rational::{self, Rational};
use sofic_perm::suites::Suite;
use sofic_perm::{Error, Permutation, SoficProfile};

mod commands;

/// Cycle statistics, class predicates and two-cycle factorizations of permutations.
#[derive(Debug, Parser)]
#[command(name = "sofic-perm", version)]
pub struct Cli {
    /// Output style; `structured` prints one JSON document.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Permutation file in one-line or cycle notation; `-` or absent reads stdin.
    pub input: Option<PathBuf>,

    /// Degree for cycle notation (overrides a `degree N` header).
    #[arg(long)]
    pub degree: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cycle type, support statistics and the profile at a threshold.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        /// Cycles at least this long count as infinite mass; defaults to ⌈√n⌉.
        #[arg(long)]
        inf_threshold: Option<u64>,
    },
    /// Writes the input as an l1-cycle times an l2-cycle.
    Factorize {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        l1: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        l2: u64,
    },
    /// Evaluates a class predicate on exact rationals.
    Check {
        #[command(subcommand)]
        predicate: CheckCommand,
    },
    /// Builds finite-level witnesses.
    Witness {
        #[command(subcommand)]
        kind: WitnessCommand,
    },
    /// Runs verification suites and exits 1 on any failure.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    /// cyc_inf(q) ≤ m·cyc_inf(p) for p, q in cyc({1,inf}).
    InClassPower {
        #[arg(long, value_parser = parse_profile_arg)]
        cp: ProfileArg,
        #[arg(long, value_parser = parse_profile_arg)]
        cq: ProfileArg,
        #[arg(long)]
        m: u64,
    },
    /// cyc_inf(p) ≥ 1/m for p in cyc({1,inf}).
    Covers {
        #[arg(long, value_parser = parse_profile_arg)]
        p: ProfileArg,
        #[arg(long)]
        m: u64,
    },
    /// The m with 1/m ≤ c < 1/(m-1).
    Bracket {
        #[arg(long, value_parser = parse_rational)]
        c: Rational,
    },
    /// m + n ≤ c1 + c2 and m - n ≥ c1 - c2.
    TwoClass {
        /// Profile of p; alternative to --p-m and --p-n.
        #[arg(long, value_parser = parse_profile, conflicts_with_all = ["p_m", "p_n"])]
        p: Option<SoficProfile>,
        #[arg(long, value_parser = parse_rational, requires = "p_n")]
        p_m: Option<Rational>,
        #[arg(long, value_parser = parse_rational, requires = "p_m")]
        p_n: Option<Rational>,
        #[arg(long, value_parser = parse_rational)]
        c1: Rational,
        #[arg(long, value_parser = parse_rational)]
        c2: Rational,
    },
    /// Inequalities an automorphism image of p must satisfy.
    Trace {
        #[arg(long, value_parser = parse_profile)]
        p: SoficProfile,
        #[arg(long, value_parser = parse_profile)]
        img: SoficProfile,
    },
}

#[derive(Debug, Subcommand)]
pub enum WitnessCommand {
    /// m parts of long-cycle mass c_p whose product has long-cycle mass c_q.
    Power {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_rational)]
        cp: Rational,
        #[arg(long, value_parser = parse_rational)]
        cq: Rational,
        #[arg(long)]
        m: u64,
        /// Include every part in one-line notation.
        #[arg(long)]
        parts: bool,
    },
    /// Factorizes the input into cycles of normalized lengths near (c1, c2).
    TwoClass {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_parser = parse_rational)]
        c1: Rational,
        #[arg(long, value_parser = parse_rational)]
        c2: Rational,
    },
    /// A permutation r with r p r⁻¹ close to q.
    Conjugator {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name or `all`.
    #[arg(long, default_value = "all", value_parser = parse_suites)]
    pub suite: SuiteSelection,
    #[arg(long)]
    pub max_n: Option<usize>,
    #[arg(long)]
    pub budget: Option<u128>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random samples for the identities and metric suites.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SuiteSelection(pub Vec<Suite>);

#[derive(Debug, Clone)]
pub enum ProfileArg {
    Inf(Rational),
    Full(SoficProfile),
}

impl ProfileArg {
    pub fn profile(&self) -> sofic_perm::Result<SoficProfile> {
        match self {
            ProfileArg::Inf(c) => SoficProfile::one_inf(*c),
            ProfileArg::Full(p) => Ok(p.clone()),
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn parse_profile(s: &str) -> Result<SoficProfile, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_profile_arg(s: &str) -> Result<ProfileArg, String> {
    if s.contains(':') {
        parse_profile(s).map(ProfileArg::Full)
    } else {
        parse_rational(s).map(ProfileArg::Inf)
    }
}

fn parse_suites(s: &str) -> Result<SuiteSelection, String> {
    if s == "all" {
        return Ok(SuiteSelection(Suite::ALL.to_vec()));
    }
    s.split(',')
        .map(|name| name.trim().parse::<Suite>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()
        .map(SuiteSelection)
}

/// Failures mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Io(PathBuf, io::Error),
    Suites,
    /// Already explained on stdout; carries the exit code.
    Reported(u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Suites => 1,
            Failure::Reported(code) => *code,
            Failure::Io(..) => 2,
            Failure::Core(e) => match e {
                Error::MalformedInput { .. }
                | Error::DegreeMismatch { .. }
                | Error::LengthOutOfRange { .. }
                | Error::Range(_)
                | Error::BadIndex { .. }
                | Error::BudgetExceeded { .. } => 2,
                Error::Infeasible(_)
                | Error::InfeasibleTarget { .. }
                | Error::SlackTooSmall { .. }
                | Error::CycleTypeMismatch => 3,
                Error::Domain(_) | Error::InvalidProfile(_) | Error::MissingDivisor(_) => 4,
                Error::CertificateMismatch => 1,
            },
        }
    }
}

pub fn read_permutation(
    input: Option<&Path>,
    degree: Option<usize>,
) -> Result<Permutation, Failure> {
    let mut text = String::new();
    match input {
        None => io::stdin().read_to_string(&mut text),
        Some(path) if path.as_os_str() == "-" => io::stdin().read_to_string(&mut text),
        Some(path) => std::fs::read_to_string(path).map(|t| {
            text = t;
            text.len()
        }),
    }
    .map_err(|e| Failure::Io(input.unwrap_or(Path::new("-")).to_path_buf(), e))?;
    Ok(Permutation::parse_document(&text, degree)?)
}

/// Prints `value` as pretty JSON or `text` depending on the format.
pub fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Structured => {
            println!(
                "{}",
                serde_json::to_string_pretty(value).expect("serializable output")
            )
        }
        Format::Text => println!("{}", text()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Io(path, e) => eprintln!("error: cannot read {}: {e}", path.display()),
                Failure::Suites => eprintln!("error: verification failed"),
                Failure::Reported(_) => {}
            }
            ExitCode::from(failure.code())
        }
    }
}
