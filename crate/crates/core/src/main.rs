use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gkm_cohomology::cli::{
    cmd_check, cmd_compute, cmd_report, exit_code_for, OutputFormat, RunOptions,
};
use gkm_cohomology::gkmgraph::GkmGraph;

#[derive(Parser)]
#[command(
    name = "gkm",
    about = "Exact integral equivariant cohomology of GKM graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Compute minimal graded generators of graph cohomology
    Compute {
        /// Graph file in the JSON input format
        file: PathBuf,
        /// Compute the modified invariant (recursive intersect-and-extend)
        #[arg(long)]
        hhat: bool,
        /// Work over R_n with the subgraph of n-divisible weights
        #[arg(long = "mod-n", default_value_t = 1)]
        mod_n: u64,
        /// Cohomological degree bound (even); default 2·max valence
        #[arg(long = "max-degree")]
        max_degree: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Exactness verdict, divisor tree and per-degree indices
    Report {
        file: PathBuf,
        #[arg(long = "max-degree")]
        max_degree: Option<u32>,
    },
    /// Run the full invariant suite on one graph
    Check {
        file: PathBuf,
        #[arg(long = "max-degree")]
        max_degree: Option<u32>,
    },
}

fn load(path: &PathBuf) -> Result<GkmGraph, gkm_cohomology::Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| gkm_cohomology::Error::Parse(format!("{}: {}", path.display(), e)))?;
    GkmGraph::from_json(&text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> Result<gkm_cohomology::cli::CommandOutput, gkm_cohomology::Error> {
        match &cli.command {
            Command::Compute {
                file,
                hhat,
                mod_n,
                max_degree,
                format,
            } => {
                let g = load(file)?;
                let opts = RunOptions {
                    hhat: *hhat,
                    mod_n: *mod_n,
                    max_degree: *max_degree,
                    format: match format {
                        Format::Json => OutputFormat::Json,
                        Format::Text => OutputFormat::Text,
                    },
                };
                cmd_compute(&g, &opts)
            }
            Command::Report { file, max_degree } => {
                let g = load(file)?;
                let opts = RunOptions {
                    max_degree: *max_degree,
                    ..Default::default()
                };
                cmd_report(&g, &opts)
            }
            Command::Check { file, max_degree } => {
                let g = load(file)?;
                let opts = RunOptions {
                    max_degree: *max_degree,
                    ..Default::default()
                };
                cmd_check(&g, &opts)
            }
        }
    };
    match run() {
        Ok(out) => {
            println!("{}", out.document);
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
