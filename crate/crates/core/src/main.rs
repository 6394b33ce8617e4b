use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toricproj::algebra::Rat;
use toricproj::io::{
    emit_geometric_resolution, emit_resolution, emit_structured, parse_resolution, SystemFile,
};
use toricproj::polytope::mixed_volume;
use toricproj::projection::{draw_form, q_projection, verify_result};
use toricproj::supports::{gamma_decomposition, trans_basis};
use toricproj::zerodim::solve_toric_0d;
use toricproj::Error;

/// Geometric resolutions of projections of toric varieties.
///
/// Every option can also be set through an environment variable named
/// after it with the prefix TORICPROJ_ (for example TORICPROJ_SEED).
#[derive(Parser)]
#[command(name = "toricproj", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the mixed volume of the supports of a system file.
    Mv {
        file: PathBuf,
        /// Append this many copies of the standard simplex.
        #[arg(long, default_value_t = 0, env = "TORICPROJ_SIMPLICES")]
        simplices: usize,
    },
    /// Print a transcendence basis (1-based variable indices).
    Transbasis { file: PathBuf },
    /// List the toric pieces of the affine variety.
    Gamma { file: PathBuf },
    /// Solve a square system over the torus.
    Solve0d {
        file: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
    /// Project onto X1..X<ell> and print the resolution file.
    Project {
        file: PathBuf,
        #[command(flatten)]
        opts: Options,
        /// Write the result here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check a resolution file against the system it came from.
    Verify {
        system: PathBuf,
        resolution: PathBuf,
    },
}

#[derive(Args)]
struct Options {
    #[arg(long, env = "TORICPROJ_SEED")]
    seed: Option<u64>,
    /// Random entries are drawn with absolute value at most this.
    #[arg(long, env = "TORICPROJ_BOUND")]
    bound: Option<u32>,
    /// Number of fresh random choices before giving up.
    #[arg(long, env = "TORICPROJ_RETRIES")]
    retries: Option<u32>,
    /// Series precision (defaults to twice the parametric degree bound).
    #[arg(long, env = "TORICPROJ_PRECISION")]
    precision: Option<u32>,
    /// Override `ell` from the system file.
    #[arg(long, env = "TORICPROJ_ELL")]
    ell: Option<usize>,
    /// Separating form, one integer per variable, comma separated.
    #[arg(
        long,
        env = "TORICPROJ_LAMBDA",
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    lambda: Option<Vec<i64>>,
    /// Projection form, one integer per variable.
    #[arg(
        long,
        env = "TORICPROJ_MU",
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    mu: Option<Vec<i64>>,
    /// Values of the specialized variables.
    #[arg(
        long,
        env = "TORICPROJ_B",
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    b: Option<Vec<i64>>,
    /// Expansion point for the free variables.
    #[arg(
        long,
        env = "TORICPROJ_XI",
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    xi: Option<Vec<i64>>,
    /// Try to reconstruct after every lifting step.
    #[arg(long, env = "TORICPROJ_EARLY_STOP")]
    early_stop: bool,
    #[arg(long, value_enum, default_value_t = Format::Text, env = "TORICPROJ_FORMAT")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Math(e.to_string())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_system(path: &Path) -> Result<SystemFile, Failure> {
    SystemFile::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn var_names(vars: &[usize]) -> String {
    vars.iter()
        .map(|v| format!("X{}", v + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Mv { file, simplices } => {
            let sys = read_system(&file)?;
            Ok(format!(
                "{}\n",
                mixed_volume(&sys.family.with_simplices(simplices))?
            ))
        }
        Command::Transbasis { file } => {
            let sys = read_system(&file)?;
            let tb = trans_basis(&sys.family)?;
            Ok(format!(
                "{}\n",
                tb.indices
                    .iter()
                    .map(|i| (i + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            ))
        }
        Command::Gamma { file } => {
            let sys = read_system(&file)?;
            let mut out = String::new();
            for c in gamma_decomposition(&sys.family)? {
                let zero = if c.zero_vars.is_empty() {
                    "-".to_string()
                } else {
                    var_names(&c.zero_vars)
                };
                let eqs: Vec<String> = c.equations.iter().map(|j| format!("f{}", j + 1)).collect();
                out.push_str(&format!(
                    "zero {zero} | equations {}\n",
                    if eqs.is_empty() {
                        "-".into()
                    } else {
                        eqs.join(" ")
                    }
                ));
            }
            Ok(out)
        }
        Command::Solve0d { file, opts } => solve0d(read_system(&file)?, &opts),
        Command::Project { file, opts, output } => {
            let text = project(read_system(&file)?, &opts)?;
            match output {
                Some(path) => {
                    fs::write(&path, text)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Verify { system, resolution } => {
            verify(read_system(&system)?, &read(&resolution)?)
        }
    }
}

fn solve0d(sys: SystemFile, opts: &Options) -> Result<String, Failure> {
    let n = sys.nvars;
    if sys.equations.len() != n {
        return Err(Failure::Usage(format!(
            "solve0d needs a square system, found {} equations in {n} variables",
            sys.equations.len()
        )));
    }
    let vars: Vec<usize> = (0..n).collect();
    let res = match &opts.lambda {
        Some(l) if l.len() != n => {
            return Err(Failure::Usage(format!("--lambda needs {n} entries")))
        }
        Some(l) => solve_toric_0d(&sys.equations, &vars, l)?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.or(sys.seed).unwrap_or(0));
            let bound = opts.bound.or(sys.bound).unwrap_or(100);
            let retries = opts.retries.or(sys.retries).unwrap_or(5);
            let mut attempt = 0;
            loop {
                match solve_toric_0d(&sys.equations, &vars, &draw_form(&mut rng, n, bound)) {
                    Err(Error::LambdaNotSeparating) if attempt < retries => attempt += 1,
                    other => break other?,
                }
            }
        }
    };
    Ok(emit_geometric_resolution(&res))
}

fn project(sys: SystemFile, opts: &Options) -> Result<String, Failure> {
    let mut sys = sys;
    if opts.ell.is_some() {
        sys.ell = opts.ell;
    }
    let mut problem = sys.into_problem()?;
    if let Some(s) = opts.seed {
        problem.seed = s;
    }
    if let Some(b) = opts.bound {
        problem.bound = b;
    }
    if let Some(k) = opts.retries {
        problem.retry_limit = k;
    }
    if opts.precision.is_some() {
        problem.precision = opts.precision;
    }
    problem.early_stop = opts.early_stop;
    problem.pins.b = opts.b.clone();
    problem.pins.lambda = opts.lambda.clone();
    problem.pins.mu = opts.mu.clone();
    problem.pins.xi = opts
        .xi
        .as_ref()
        .map(|x| x.iter().map(|&v| Rat::from_int(v)).collect());
    let result = q_projection(&problem)?;
    Ok(match opts.format {
        Format::Text => emit_resolution(&result),
        Format::Structured => emit_structured(&result),
    })
}

fn verify(sys: SystemFile, text: &str) -> Result<String, Failure> {
    let stored = parse_resolution(text)?;
    let report = verify_result(&sys.equations, &sys.family, &stored)?;
    if report.passed() {
        Ok(report.to_string())
    } else {
        print!("{report}");
        Err(Failure::Math(format!(
            "verification failed: {}",
            report.failures().join(", ")
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
