use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cotransfer::harness::{
    read_traces, render_summary, run_experiment, summarize, sweep, trace_export, transferability,
    write_grid, write_records, write_traces, ExperimentConfig, Method,
};

#[derive(Parser)]
#[command(version, about = "Co-Transfer experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the cross-validated comparison and write records, traces and a summary.
    Run {
        config: PathBuf,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Override the configured label rates.
        #[arg(long, value_delimiter = ',')]
        rates: Option<Vec<f64>>,
        /// Override the configured methods.
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<Method>>,
    },
    /// Cross-domain error of a tree trained on each domain.
    Transferability {
        config: PathBuf,
        #[arg(long)]
        max_depth: Option<usize>,
    },
    /// Co-Transfer error over a grid of boosting rounds and tree depths.
    Sweep {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        rounds: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        depths: Vec<usize>,
        #[arg(long, default_value = "grid.csv")]
        out: PathBuf,
    },
    /// Average a traces file into one error series per method and rate.
    Trace {
        traces: PathBuf,
        #[arg(long, default_value = "trace_means.csv")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> cotransfer::Result<ExitCode> {
    match cli.command {
        Command::Run {
            config,
            out,
            rates,
            methods,
        } => {
            let mut cfg = ExperimentConfig::from_file(&config)?;
            if let Some(r) = rates {
                cfg.protocol.rates = r;
            }
            if let Some(m) = methods {
                cfg.methods = m;
            }
            cfg.validate()?;
            std::fs::create_dir_all(&out).map_err(|e| cotransfer::Error::Config(format!("{}: {e}", out.display())))?;
            let res = run_experiment(&cfg)?;
            write_records(out.join("records.csv"), &res.records)?;
            write_traces(out.join("traces.csv"), &res.traces)?;
            let table = render_summary(&summarize(&res.records));
            std::fs::write(out.join("summary.txt"), &table)
                .map_err(|e| cotransfer::Error::Config(format!("{}: {e}", out.display())))?;
            print!("{table}");
            let failed: Vec<_> = res.failures().collect();
            for f in &failed {
                eprintln!(
                    "failed: {} rate {} fold {} repeats {}/{}: {}",
                    f.method, f.rate, f.fold, f.source_repeat, f.target_repeat, f.status
                );
            }
            Ok(if failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Transferability { config, max_depth } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let d = cfg.domains()?;
            let (s_to_t, t_to_s) = transferability(&d.source, &d.target, max_depth)?;
            println!("source rows {}, target rows {}", d.source.len(), d.target.len());
            println!("source -> target error {s_to_t:.3}");
            println!("target -> source error {t_to_s:.3}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            config,
            rounds,
            depths,
            out,
        } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let grid = sweep(&cfg, &cfg.domains()?, &rounds, &depths)?;
            write_grid(&out, &grid)?;
            print!("{:>6}", "N\\D");
            for d in &grid.depths {
                print!(" {d:>7}");
            }
            println!();
            for (n, row) in grid.rounds.iter().zip(&grid.mean_final) {
                print!("{n:>6}");
                for e in row {
                    print!(" {e:>7.4}");
                }
                println!();
            }
            Ok(if grid.failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Trace { traces, out } => {
            let series = trace_export(&read_traces(&traces)?);
            let mut w = csv::Writer::from_path(&out)?;
            w.write_record(["dataset", "rate", "method", "iteration", "mean_error", "runs"])?;
            for s in &series {
                for (k, m) in s.means.iter().enumerate() {
                    w.write_record([
                        s.dataset.clone(),
                        s.rate.to_string(),
                        s.method.to_string(),
                        k.to_string(),
                        m.to_string(),
                        s.runs.to_string(),
                    ])?;
                }
            }
            w.flush().map_err(|e| cotransfer::Error::Config(e.to_string()))?;
            for s in &series {
                let pts: Vec<String> = s.means.iter().map(|m| format!("{m:.3}")).collect();
                println!("{} {} {}: {}", s.dataset, s.rate, s.method, pts.join(" "));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
