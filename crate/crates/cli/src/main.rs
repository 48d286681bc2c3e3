use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::{CliError, Output};

#[derive(Parser)]
#[command(name = "mk3", version, about = "Canonical K3-type lattices of quaternion algebras over totally real fields")]
struct Cli {
    /// Print the machine-readable report instead of the table
    #[arg(long, global = true)]
    json: bool,

    /// Also write the machine-readable report to this file
    #[arg(long, short, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Number field data
    #[command(subcommand)]
    Field(FieldCmd),
    /// Quaternion algebras and orders
    #[command(subcommand)]
    Quat(QuatCmd),
    /// Corestricted trace-zero lattice of a maximal order
    LambdaCan(LambdaArgs),
    /// Integral lattices and discriminant forms
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// K3 fibration and torsion analysis of a transcendental lattice
    #[command(subcommand)]
    K3(K3Cmd),
    /// Built-in reproductions
    #[command(subcommand)]
    Reproduce(ReproduceCmd),
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Discriminant, real places and prime decomposition
    Info {
        /// Minimal polynomial, e.g. "x^3-3x-1"
        #[arg(long, conflicts_with = "field")]
        poly: Option<String>,
        /// Field descriptor (file or inline JSON)
        #[arg(long)]
        field: Option<String>,
        /// Rational primes to decompose
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
    },
}

#[derive(Subcommand)]
enum QuatCmd {
    /// Ramification set and discriminant ideal
    Ram {
        /// Quaternion descriptor (file or inline JSON)
        #[arg(long)]
        algebra: String,
    },
    /// Order validity, discriminant and maximality
    OrderCheck {
        #[arg(long)]
        algebra: String,
        /// Order descriptor (file or inline JSON)
        #[arg(long)]
        order: String,
    },
}

#[derive(Args)]
struct LambdaArgs {
    #[arg(long)]
    algebra: String,
    #[arg(long)]
    order: String,
    /// killing | twisted
    #[arg(long, default_value = "killing")]
    form: String,
}

#[derive(Args)]
struct LatticeIn {
    /// Lattice file {"gram": [[...]]} (file or inline JSON)
    #[arg(long = "in", value_name = "LATTICE")]
    input: String,
}

#[derive(Args)]
struct SearchArgs {
    /// Entry bound for brute-force searches (default from MK3_SEARCH_BOUND, else 6)
    #[arg(long)]
    bound: Option<i64>,
    /// Wall-clock limit in seconds
    #[arg(long, default_value_t = 10.0)]
    time_limit: f64,
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Smith normal form of the Gram matrix
    Snf(LatticeIn),
    /// Discriminant group and quadratic form
    Discform(LatticeIn),
    /// Isotropic subgroups and the even overlattices they define
    Overlattices {
        #[command(flatten)]
        input: LatticeIn,
        /// Largest subgroup order to enumerate
        #[arg(long)]
        max_order: Option<u128>,
        /// Bound on group elements considered
        #[arg(long, default_value_t = 1_000_000)]
        cap: u128,
    },
    /// Search for a rank-3 even lattice with the same discriminant form
    Rank3 {
        #[command(flatten)]
        input: LatticeIn,
        /// Target signature p,q
        #[arg(long, default_value = "0,3")]
        signature: String,
        /// Use the negated discriminant form
        #[arg(long)]
        negate: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Subcommand)]
enum K3Cmd {
    /// Fibration existence and Mordell–Weil torsion verdict
    Analyze {
        #[command(flatten)]
        input: LatticeIn,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Subcommand)]
enum ReproduceCmd {
    /// The worked cubic example: B = (-3, θ) over x^3 - 3x - 1
    #[command(name = "example-3-1")]
    Example31 {
        #[command(flatten)]
        search: SearchArgs,
    },
    /// The CM discriminant deduction over x^3 - 3x - 1
    CmFourfold,
}

impl SearchArgs {
    fn resolve(&self) -> Result<(i64, std::time::Duration), CliError> {
        let bound = match self.bound {
            Some(b) => b,
            None => match std::env::var("MK3_SEARCH_BOUND") {
                Ok(v) => {
                    v.trim().parse().map_err(|_| CliError::usage(format!("MK3_SEARCH_BOUND: not an integer: {v:?}")))?
                }
                Err(_) => commands::DEFAULT_BOUND,
            },
        };
        if bound < 0 {
            return Err(CliError::usage("search bound must be non-negative"));
        }
        if !(self.time_limit.is_finite() && self.time_limit > 0.0) {
            return Err(CliError::usage("time limit must be positive"));
        }
        Ok((bound, std::time::Duration::from_secs_f64(self.time_limit)))
    }
}

fn dispatch(cmd: &Command) -> Result<Output, CliError> {
    match cmd {
        Command::Field(FieldCmd::Info { poly, field, primes }) => {
            commands::field_info(poly.as_deref(), field.as_deref(), primes)
        }
        Command::Quat(QuatCmd::Ram { algebra }) => commands::quat_ram(algebra),
        Command::Quat(QuatCmd::OrderCheck { algebra, order }) => commands::order_check(algebra, order),
        Command::LambdaCan(a) => commands::lambda_can(&a.algebra, &a.order, &a.form),
        Command::Lattice(LatticeCmd::Snf(l)) => commands::snf(&l.input),
        Command::Lattice(LatticeCmd::Discform(l)) => commands::discform(&l.input),
        Command::Lattice(LatticeCmd::Overlattices { input, max_order, cap }) => {
            commands::overlattices(&input.input, *max_order, *cap)
        }
        Command::Lattice(LatticeCmd::Rank3 { input, signature, negate, search }) => {
            let (bound, limit) = search.resolve()?;
            commands::rank3(&input.input, signature, *negate, bound, limit)
        }
        Command::K3(K3Cmd::Analyze { input, search }) => {
            let (bound, limit) = search.resolve()?;
            commands::k3_analyze(&input.input, bound, limit)
        }
        Command::Reproduce(ReproduceCmd::Example31 { search }) => {
            let (bound, limit) = search.resolve()?;
            commands::reproduce_example(bound, limit)
        }
        Command::Reproduce(ReproduceCmd::CmFourfold) => commands::reproduce_cm(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match dispatch(&cli.command) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return ExitCode::from(e.code);
        }
    };
    let json = serde_json::to_string_pretty(&out.json).expect("report serializes");
    if cli.json {
        println!("{json}");
    } else {
        print!("{}", out.text);
    }
    if let Some(path) = &cli.out {
        if let Err(e) = fs::write(path, format!("{json}\n")) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(commands::EXIT_USAGE);
        }
    }
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    ExitCode::from(out.code)
}
