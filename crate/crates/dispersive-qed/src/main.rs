use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dispersive_qed::cli::figures::{run_figure, FigurePreset};
use dispersive_qed::cli::output::{emit_csv, emit_plot_script, report};
use dispersive_qed::cli::{
    check_oracle, parse_config, run_sweep, CliError, RunConfig, ORACLE_DEVIATION_GATE,
};

/// Entanglement and coherence dynamics of two atoms in dissipative cavities
/// in the dispersive regime.
#[derive(Parser)]
#[command(name = "dispersive-qed", version, about)]
struct Cli {
    /// Suppress timestamps so identical inputs give byte-identical outputs.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a configured sweep and write its CSV.
    Run { config: PathBuf },
    /// Reproduce a published concurrence map (fig2..fig7) as CSV data.
    Figure {
        name: String,
        /// Output directory for the CSV panels.
        #[arg(long, default_value = "figures")]
        out: PathBuf,
        /// Also write companion plot scripts.
        #[arg(long)]
        plots: bool,
    },
    /// Compare the closed-form two-atom evolution against the brute-force
    /// two-copy integration for a configured run.
    CheckOracle { config: PathBuf },
    /// Print the analysis summary (initial/stationary concurrence,
    /// sudden-death intervals, threshold time) for a configured run.
    Report { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config } => {
            let cfg = load_config(&config)?;
            let deterministic = cli.deterministic || cfg.output.deterministic;
            let result = run_sweep(&cfg)?;
            if let Some(csv) = &cfg.output.csv {
                emit_csv(&result, csv, deterministic)?;
                println!(
                    "wrote {} ({} rows)",
                    csv.display(),
                    result.concurrence.len()
                );
                if cfg.output.plots {
                    emit_plot_script(&result, csv)?;
                }
            }
            print!("{}", report(&result));
            if cfg.oracle.enabled {
                run_oracle_check(&cfg)?;
            }
            Ok(())
        }
        Command::Figure { name, out, plots } => {
            let preset = FigurePreset::parse(&name)?;
            std::fs::create_dir_all(&out)?;
            for panel in run_figure(preset) {
                let path = out.join(format!("{}.csv", panel.name));
                emit_csv(&panel.result, &path, cli.deterministic)?;
                if plots {
                    emit_plot_script(&panel.result, &path)?;
                }
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::CheckOracle { config } => {
            let cfg = load_config(&config)?;
            run_oracle_check(&cfg)
        }
        Command::Report { config } => {
            let cfg = load_config(&config)?;
            let result = run_sweep(&cfg)?;
            print!("{}", report(&result));
            Ok(())
        }
    }
}

fn run_oracle_check(cfg: &RunConfig) -> Result<(), CliError> {
    let outcome = check_oracle(cfg)?;
    println!(
        "oracle check: N = {}, dt = {:.3e}, t_end = {:.4}, {} samples",
        outcome.truncation, outcome.dt, outcome.t_end, outcome.samples
    );
    println!(
        "  two-atom density max deviation : {:.3e}",
        outcome.max_density_deviation
    );
    println!(
        "  concurrence max deviation      : {:.3e}",
        outcome.max_concurrence_deviation
    );
    println!(
        "  single-copy multiplier del     : {:.3e}",
        outcome.max_multiplier_deviation
    );
    println!("  joint trace drift              : {:.3e}", outcome.trace_drift);
    if outcome.passed() {
        println!("  verdict: PASS (gate {ORACLE_DEVIATION_GATE:.0e})");
        Ok(())
    } else {
        Err(CliError::Numeric(format!(
            "oracle deviation {:.3e} exceeds the {ORACLE_DEVIATION_GATE:.0e} gate",
            outcome.max_density_deviation
        )))
    }
}
