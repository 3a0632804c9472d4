use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use egodyn::config::parse_alphas;
use egodyn::encoding::Encoding;
use egodyn::{run, Command, Invalid, LoadedConfig, Overrides};

/// Ego-motion labeling, scoring and benchmark tooling.
#[derive(Debug, Parser)]
#[command(name = "egodyn", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Run configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Comma-separated threshold scale factors.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long, value_enum)]
    encoding: Option<Encoding>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let alphas = match cli.alpha.as_deref().map(parse_alphas).transpose() {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: --alpha: {e}");
            return ExitCode::from(2);
        }
    };
    let overrides = Overrides {
        alphas,
        encoding: cli.encoding,
        seed: cli.seed,
        out: cli.out,
    };
    let result = LoadedConfig::load(&cli.config, overrides).and_then(|cfg| run(cli.command, &cfg));
    match result {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            println!("wrote {}", outcome.out_dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Invalid>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
