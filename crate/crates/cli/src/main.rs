use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(name = "domgame", version, about = "Domination game solver, simulator and claim auditor")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum StallerArg {
    Random,
    Min,
    Worst,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FirstArg {
    #[value(alias = "D")]
    D,
    #[value(alias = "S")]
    S,
}

#[derive(Subcommand)]
enum Command {
    /// Exact game domination numbers and optimal openings.
    Solve {
        graph: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Plays the greedy Dominator against a Staller policy.
    Simulate {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "random")]
        staller: StallerArg,
        #[arg(long, value_enum, default_value = "d")]
        first: FirstArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also print the residual state after every move.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Runs a corpus and audits every selected check.
    Verify {
        /// Corpus spec (JSON).
        spec: Option<PathBuf>,
        /// Use a built-in corpus: smoke or acceptance.
        #[arg(long, conflicts_with = "spec")]
        builtin: Option<String>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        json: bool,
        /// Write one CSV row per graph here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write one JSON witness per failure into this directory.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Audits a single transcript (text or JSON) against its graph.
    Audit {
        graph: PathBuf,
        transcript: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Writes a generated graph as an edge list.
    ///
    /// Families: path N, cycle N, star N, complete N, caterpillar L1 .. Lk
    /// (legs per spine vertex), prufer A1 .. Ak, tree N SEED, gnp N P SEED.
    Gen {
        family: String,
        /// Family parameters followed by the output path.
        #[arg(required = true, num_args = 1..)]
        args: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { graph, json } => commands::solve(&graph, json),
        Command::Simulate { graph, staller, first, seed, trace, json } => {
            commands::simulate(&graph, staller, first, seed, trace, json)
        }
        Command::Verify { spec, builtin, jobs, json, csv, witness_dir } => commands::verify(
            spec.as_deref(),
            builtin.as_deref(),
            jobs,
            json,
            csv.as_deref(),
            witness_dir.as_deref(),
        ),
        Command::Audit { graph, transcript, json } => commands::audit(&graph, &transcript, json),
        Command::Gen { family, args } => commands::gen(&family, &args),
    };
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
