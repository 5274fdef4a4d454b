use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kcolor::coloring::SearchConfig;
use kcolor::commands::{cmd_bound, cmd_count, cmd_search, cmd_verify};
use kcolor::instance::{Instance, InstanceFile};
use kcolor::Error;

#[derive(Parser)]
#[command(name = "kcolor", version, about = "Monochromatic crossings and doubling bounds for k-colored drawings of K_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Total and monochromatic crossings of an instance.
    Count {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Search for a point set and coloring with few monochromatic crossings.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        restarts: u32,
        #[arg(long, default_value_t = 3)]
        max_stale: u32,
        #[arg(long, default_value_t = 8)]
        radius: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Asymptotic coefficients and the bound 24 alpha / n^4.
    Bound {
        #[arg(long)]
        instance: PathBuf,
        /// Use the matching and details stored in the instance.
        #[arg(long)]
        use_given_matching: bool,
        /// Write the instance with the matching and details used.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the crossing formula against the explicit construction.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 2)]
        t_max: u32,
    },
}

fn load(path: &Path) -> kcolor::Result<Instance> {
    InstanceFile::read(path)
        .map_err(|e| match e {
            Error::Parse { line, message } => Error::Parse { line, message: format!("{}: {message}", path.display()) },
            e => e,
        })?
        .validate()
}

fn run(cli: Cli) -> kcolor::Result<bool> {
    match cli.command {
        Command::Count { instance } => {
            print!("{}", cmd_count(&load(&instance)?)?);
            Ok(true)
        }
        Command::Search { n, k, seed, restarts, max_stale, radius, out } => {
            let cfg = SearchConfig { restarts, max_stale_iterations: max_stale, perturbation_radius: radius, rng_seed: seed };
            cfg.validate()?;
            let (file, outcome) = cmd_search(n, k, &cfg)?;
            println!("n                  {n}");
            println!("k                  {k}");
            println!("seed               {seed}");
            println!("rounds             {}", outcome.rounds);
            println!("initial            {}", outcome.history[0]);
            println!("monochromatic      {}", outcome.monochromatic);
            match out {
                Some(path) => file.write(&path)?,
                None => print!("{}", file.serialize()),
            }
            Ok(true)
        }
        Command::Bound { instance, use_given_matching, out } => {
            let inst = load(&instance)?;
            let outcome = cmd_bound(&inst, use_given_matching)?;
            print!("{}", outcome.report);
            if let Some(path) = out {
                let mut file = inst.to_file();
                file.matching = Some(outcome.matching.targets().to_vec());
                file.details = Some(outcome.details);
                file.write(&path)?;
            }
            Ok(true)
        }
        Command::Verify { instance, t_max } => {
            let report = cmd_verify(&load(&instance)?, t_max)?;
            print!("{report}");
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::Parse { .. }) { 2 } else { 1 })
        }
    }
}
