use std::path::PathBuf;
use std::process::ExitCode;

use aggfp_harness::{
    equivalence_suite, game_info, run_experiment, AlgorithmKind, ExperimentConfig, HarnessError,
    Result, SuiteConfig,
};
use clap::{Args, Parser, Subcommand};

/// Aggregate fictitious play experiments.
#[derive(Debug, Parser)]
#[command(name = "aggfp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run learners and write one CSV per metric series plus a manifest.
    Run(RunArgs),
    /// Randomized checks.
    Suite {
        #[command(subcommand)]
        which: SuiteCommand,
    },
    /// Describe a builtin game.
    Game {
        #[command(subcommand)]
        which: GameCommand,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Config file of `key = value` lines; a previous manifest works too.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed; repeat or comma-separate for several.
    #[arg(long, value_delimiter = ',')]
    seed: Vec<u64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    /// Comma-separated subset of aggfp2t, fp2t, indq, fp, aggfp.
    #[arg(long)]
    algo: Option<String>,
    #[arg(long)]
    snapshot_stride: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum SuiteCommand {
    /// FP versus agg-FP on random anonymous polymatrix games.
    Equivalence {
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = 5)]
        max_agents: usize,
        #[arg(long, default_value_t = 3)]
        max_actions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
enum GameCommand {
    Info {
        #[arg(long, default_value = "rps4")]
        game: String,
    },
}

fn run(args: RunArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = args.out {
        config.output_dir = out;
    }
    if !args.seed.is_empty() {
        config.seeds = args.seed;
    }
    if let Some(steps) = args.steps {
        config.steps = steps;
    }
    if let Some(delta) = args.delta {
        config.delta = delta;
    }
    if let Some(list) = args.algo {
        config.algorithms = list
            .split(',')
            .map(|s| s.trim().parse())
            .collect::<Result<Vec<AlgorithmKind>>>()?;
    }
    if let Some(stride) = args.snapshot_stride {
        config.snapshot_stride = stride;
    }
    let report = run_experiment(&config)?;
    for f in &report.files {
        println!("{} ({} rows)", report.output_dir.join(&f.name).display(), f.rows);
    }
    println!("manifest: {}", report.manifest.display());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run(args) => run(args).map(|()| true),
        Command::Suite {
            which:
                SuiteCommand::Equivalence {
                    instances,
                    steps,
                    max_agents,
                    max_actions,
                    seed,
                },
        } => {
            let report = equivalence_suite(&SuiteConfig {
                instances,
                steps,
                max_agents,
                max_actions,
                seed,
                ..SuiteConfig::default()
            })?;
            print!("{report}");
            Ok(report.passed())
        }
        Command::Game {
            which: GameCommand::Info { game },
        } => {
            print!("{}", game_info(&game)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            report_source(&e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn report_source(e: &HarnessError) {
    let mut source = std::error::Error::source(e);
    while let Some(s) = source {
        eprintln!("  caused by: {s}");
        source = s.source();
    }
}
