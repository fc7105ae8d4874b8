use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use interval_reach::runner::{self, BenchSpec};
use interval_reach::{Error, Result};

#[derive(Parser)]
#[command(name = "reach", version, about = "Interval reachability for nonlinear systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the method described by a config file; writes the tube and a report.
    Run { config: PathBuf },
    /// Time the config's method over state dimensions and worker counts.
    Bench {
        config: PathBuf,
        /// Comma-separated state dimensions.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Comma-separated worker counts; 0 means all cores.
        #[arg(long, value_delimiter = ',', default_value = "1,0")]
        workers: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List library models with parameters and supported methods.
    ListModels,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let message = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {message}", e.kind());
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config } => {
            let outcome = runner::run_file(&config)?;
            let b = outcome.tube.final_box();
            println!("final time {}", outcome.tube.final_time());
            if b.dim() <= 12 {
                println!("final lower {:?}", b.lower());
                println!("final upper {:?}", b.upper());
            } else {
                let widest = b.half_width().into_iter().fold(0.0, f64::max);
                println!("final box: {} states, widest half-width {widest}", b.dim());
            }
            println!("tube {}", outcome.tube_path.display());
            println!("report {}", outcome.report_path.display());
            Ok(())
        }
        Command::Bench {
            config,
            dims,
            workers,
            reps,
            out,
        } => {
            let cfg = runner::load_config(&config)?;
            let rows = runner::bench(
                &cfg,
                &BenchSpec {
                    dims,
                    workers,
                    repetitions: reps,
                },
            )?;
            let csv = runner::bench_csv(&rows);
            match out {
                Some(path) => std::fs::write(&path, csv)
                    .map_err(|e| Error::from(e).with_context(format!("writing {}", path.display()))),
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
        Command::ListModels => {
            print!("{}", runner::list_models());
            Ok(())
        }
    }
}
