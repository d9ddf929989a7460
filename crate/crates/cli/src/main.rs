use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nrfair::ErrorClass;

mod commands;

/// Fair facility placement by neighborhood radius.
#[derive(Debug, Parser)]
#[command(name = "nrfair", version, about)]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// More log output on stderr (repeat for debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Neighborhood radius of every point, written to nr.csv.
    Nr(InputArgs),
    /// Run one algorithm; writes centers.csv and report.json.
    Run(RunArgs),
    /// Run several algorithms on one profile; writes compare.csv and prints a table.
    Compare(CompareArgs),
    /// Center count of alphafair for each alpha on a grid; writes curve.csv.
    Curve(CurveArgs),
    /// Exact optimal fairness of a tiny instance.
    Oracle(InputArgs),
    /// Built-in example instances.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixtureAction {
    /// List fixture names.
    List,
    /// Print a fixture as JSON, or write it to --out.
    Emit {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Schema {
    /// Geographic coordinates, projected to UTM.
    Latlon,
    /// Planar coordinates in meters.
    Xy,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV file of points.
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    pub input: Option<PathBuf>,

    /// Built-in fixture instead of a file.
    #[arg(long)]
    pub fixture: Option<String>,

    #[arg(long, value_enum, default_value_t = Schema::Latlon)]
    pub schema: Schema,

    /// Coordinate column names, `lat,lon` or `x,y` order.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub columns: Option<Vec<String>>,

    /// The input has no header row; columns are then taken by position.
    #[arg(long)]
    pub no_header: bool,

    /// Number of centers (defaults to the fixture's own k).
    #[arg(long)]
    pub k: Option<usize>,

    #[arg(long, default_value_t = nrfair::kdtree::DEFAULT_LEAF_SIZE)]
    pub leaf_size: usize,

    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AlgoArgs {
    /// Bisection steps of `fair`.
    #[arg(long, default_value_t = nrfair::fair::DEFAULT_ITERATIONS)]
    pub t: u32,

    /// Seed of the k-means and k-medians initialization.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// First center of greedy k-center.
    #[arg(long, default_value_t = 0)]
    pub first: usize,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub algo_args: AlgoArgs,

    /// fair, 2fair, alphafair, kcenter, kmeans, kmedians or realline.
    #[arg(long, default_value = "fair")]
    pub algo: String,

    /// Fairness parameter of alphafair.
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub algo_args: AlgoArgs,

    /// Algorithms to compare; `alphafair(<alpha>)` is accepted.
    #[arg(long, value_delimiter = ',', default_value = "fair,kmeans,kmedians,kcenter")]
    pub algos: Vec<String>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Alpha grid; defaults to 1.00, 1.05, ..., 2.00.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
}

pub fn exit_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::Ingestion => 2,
        ErrorClass::Parameter => 3,
        ErrorClass::Guard => 4,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(exit_code(ErrorClass::Parameter)),
            };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(exit_code(ErrorClass::Parameter));
        }
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::FAILURE;
        }
    };
    match pool.install(|| commands::dispatch(&cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.class()))
        }
    }
}
