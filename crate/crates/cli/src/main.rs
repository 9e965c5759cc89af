use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "origami", version, about = "Census of origamis and their Teichmüller curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the isomorphism classes of one degree.
    Census(Common),
    /// Compute the action tables and the curve components.
    Curves(Common),
    /// Components that the classical invariants do not separate.
    Report(Common),
    /// Invariants of a single origami.
    Info {
        #[command(flatten)]
        common: Common,
        /// e.g. "x=(1,2); y=(1,2); eps=+-"
        origami: String,
    },
    /// Write the coset diagram of one component as Graphviz text.
    Diagram {
        #[command(flatten)]
        common: Common,
        /// Component id as printed by `curves`.
        #[arg(long)]
        component: u32,
        /// Output file; defaults to `diagram-d<d>-c<id>.dot` in the cache directory.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Number of squares. Taken from the origami for `info` when omitted.
    #[arg(short, long)]
    degree: Option<usize>,

    /// Worker threads (default: all cores).
    #[arg(short, long, value_parser = clap::value_parser!(u32).range(1..))]
    workers: Option<u32>,

    /// Cache directory.
    #[arg(long, env = origami::store::CACHE_DIR_ENV)]
    cache: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Recompute even if a valid cache exists.
    #[arg(long)]
    force: bool,

    /// Refuse a census needing more memory than this.
    #[arg(long, default_value_t = origami::classifier::DEFAULT_MEMORY_BUDGET_MIB)]
    memory_budget: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match commands::run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
