use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lattice_riesz::verify::Suite;
use lattice_riesz::SweepConfig;
use lattice_riesz_cli::{config::parse_on_off, render_config, run, Overrides, EXIT_FAIL};

/// Numerical verification sweeps for the discrete Riesz potential.
#[derive(Parser)]
#[command(name = "riesz-verify", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite and write rows.csv, SVG plots and manifest.json.
    Run {
        suite: SuiteArg,
        /// Flat key = value config file; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long)]
        box_radius: Option<u64>,
        #[arg(long, value_parser = parse_on_off)]
        negative_controls: Option<bool>,
    },
    /// Print the default config with every key documented.
    DefaultConfig,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Riesz,
    Maximal,
    Atoms,
    Opnorm,
    Inequalities,
    Weaktype,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Riesz => Suite::Riesz,
            SuiteArg::Maximal => Suite::Maximal,
            SuiteArg::Atoms => Suite::Atoms,
            SuiteArg::Opnorm => Suite::Opnorm,
            SuiteArg::Inequalities => Suite::Inequalities,
            SuiteArg::Weaktype => Suite::WeakType,
            SuiteArg::All => Suite::All,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.command {
        Command::DefaultConfig => {
            print!("{}", render_config(&SweepConfig::default()));
            ExitCode::SUCCESS
        }
        Command::Run {
            suite,
            config,
            out,
            seed,
            trials,
            box_radius,
            negative_controls,
        } => {
            let overrides = Overrides {
                seed,
                trials,
                box_radius,
                negative_controls,
            };
            match run(suite.into(), config.as_deref(), &out, &overrides) {
                Ok(outcome) => {
                    let failed = outcome
                        .rows
                        .iter()
                        .filter(|r| r.verdict == lattice_riesz::Verdict::Fail)
                        .count();
                    eprintln!(
                        "{} rows, {} failed; wrote {} files and {}",
                        outcome.rows.len(),
                        failed,
                        outcome.outputs.len(),
                        outcome.manifest.display()
                    );
                    if outcome.exit_code == EXIT_FAIL {
                        for r in outcome
                            .rows
                            .iter()
                            .filter(|r| r.verdict == lattice_riesz::Verdict::Fail)
                        {
                            eprintln!(
                                "FAIL {} n={} p={} alpha={} m={} seed={} value={}",
                                r.experiment, r.n, r.p, r.alpha, r.m, r.seed, r.value
                            );
                        }
                    }
                    ExitCode::from(outcome.exit_code)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code())
                }
            }
        }
    }
}
