use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use muntz_cli::config::parse_json;
use muntz_cli::tools::{muntz_summary, write_basis_table, LambdaFile};
use muntz_cli::{write_outputs, CliError, Experiment, ExperimentConfig, Result};

#[derive(Parser)]
#[command(name = "muntz", version, about = "Corner-cutting experiments over Müntz spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce a named figure (fig1, fig2, fig3, fig4, fig4alt, fig5a, fig5b, fig6).
    Figure {
        name: String,
        /// Number of elevation steps (defaults to the figure's own count).
        #[arg(long)]
        iterations: Option<usize>,
        /// Output directory (defaults to out/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Output directory (defaults to out/<config stem>).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the basis functions on a uniform grid as CSV.
    Basis {
        lambda: PathBuf,
        /// Number of grid points in [0, 1].
        #[arg(long = "t-grid")]
        t_grid: usize,
    },
    /// Print the Müntz verdict, partial sums and gap product for a generator.
    Muntz { generator: PathBuf },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn run_experiment(experiment: &Experiment, out: &Path) -> Result<()> {
    let outcome = experiment.run()?;
    let written = write_outputs(out, experiment, &outcome)?;
    let mut line = format!("{}: {} points", experiment.name, outcome.trace.last().len());
    if let Some(row) = outcome.report.rows().last() {
        line += &format!(", coeff_error {:.3e}, hausdorff {:.3e} at m = {}", row.coeff_error, row.hausdorff, row.m);
    }
    if let Some(muntz) = &outcome.report.muntz {
        line += &format!(", sum of 1/r_j: {:?}", muntz.verdict);
    }
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{line}");
    for path in written {
        let _ = writeln!(stdout, "  wrote {}", path.display());
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Figure { name, iterations, out } => {
            let experiment = Experiment::named(&name, iterations)?;
            let out = out.unwrap_or_else(|| Path::new("out").join(&name));
            run_experiment(&experiment, &out)
        }
        Command::Run { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let stem = config.file_stem().map_or("run".to_string(), |s| s.to_string_lossy().into_owned());
            let experiment = Experiment::from_config(&stem, &cfg)?;
            let out = out.unwrap_or_else(|| Path::new("out").join(&stem));
            run_experiment(&experiment, &out)
        }
        Command::Basis { lambda, t_grid } => {
            let file: LambdaFile = parse_json(&read(&lambda)?, &lambda.display().to_string())?;
            write_basis_table(std::io::stdout().lock(), file.exponents(), t_grid)
        }
        Command::Muntz { generator } => {
            let spec = parse_json(&read(&generator)?, &generator.display().to_string())?;
            let summary = muntz_summary(spec)?;
            let text = serde_json::to_string_pretty(&summary).expect("summary is plain data");
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
