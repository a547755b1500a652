use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jacobi_fw::cli::{self, ExperimentConfig};
use jacobi_fw::Result;

#[derive(Parser)]
#[command(name = "jfw", version, about = "Frank-Wolfe and Jacobi-accelerated Frank-Wolfe experiments")]
struct Args {
    /// Override the config's output directory.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Override the config's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured method and write one trace per method.
    Run { config: PathBuf },
    /// Print the reference optimum for a config.
    Reference { config: PathBuf },
    /// Fit the log-log suboptimality slope of a trace file.
    Slope {
        trace: PathBuf,
        #[arg(long)]
        kmin: usize,
        #[arg(long)]
        kmax: usize,
    },
}

fn load(path: &PathBuf, args: &Args) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(dir) = &args.output_dir {
        cfg.output_dir = dir.clone();
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn run(args: &Args) -> Result<()> {
    match &args.command {
        Command::Run { config } => {
            let cfg = load(config, args)?;
            for summary in cli::run_experiment(&cfg)? {
                println!("{summary}");
                println!("    trace: {}", summary.trace_path.display());
            }
        }
        Command::Reference { config } => {
            let cfg = load(config, args)?;
            match cli::compute_reference(&cfg)? {
                Some(r) => match r.certificate {
                    Some(gap) => println!("{:.15e} (certificate gap {gap:.3e})", r.value),
                    None => println!("{:.15e}", r.value),
                },
                None => println!("reference mode is none"),
            }
        }
        Command::Slope { trace, kmin, kmax } => {
            let records = cli::read_trace(trace)?;
            println!("{:.6}", cli::rate_slope(&records, *kmin, *kmax)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
