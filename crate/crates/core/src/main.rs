use clap::{Args, Parser, Subcommand};
use glorenz::lab::{load_config, run_command, Command};
use glorenz::{Error, Result};
use std::path::PathBuf;
use std::process::ExitCode;

/// Experiments on two-branch expanding circle maps and their annulus models.
#[derive(Parser)]
#[command(name = "glorenz", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Io {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (defaults to `output` from the config, then `.`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the model hypotheses, cone fields and singularity conditions.
    Verify(Io),
    /// Classify the model and emit its certificates.
    Classify(Io),
    /// Four one-sided itineraries of the discontinuities.
    Kneading(Io),
    /// Itinerary of the configured point.
    Itinerary(Io),
    /// Admissibility of the configured word.
    Admissible(Io),
    /// Cylinder realizing the configured word.
    Realize(Io),
    /// Leaf-space conjugacy to a model with another `theta1`.
    Conjugacy(Io),
    /// Classification over a parameter grid (CSV and PPM).
    Sweep(Io),
    /// Classification and attractor span along a parameter segment.
    Path(Io),
    /// Visit histogram of one orbit.
    Histogram(Io),
    /// Point cloud and raster of the annulus attractor.
    Attractor2d(Io),
    /// Degree matrix of a torus family.
    Degree(Io),
}

fn run(cli: Cli) -> Result<()> {
    let (command, io) = match cli.command {
        Cmd::Verify(io) => (Command::Verify, io),
        Cmd::Classify(io) => (Command::Classify, io),
        Cmd::Kneading(io) => (Command::Kneading, io),
        Cmd::Itinerary(io) => (Command::Itinerary, io),
        Cmd::Admissible(io) => (Command::Admissible, io),
        Cmd::Realize(io) => (Command::Realize, io),
        Cmd::Conjugacy(io) => (Command::Conjugacy, io),
        Cmd::Sweep(io) => (Command::Sweep, io),
        Cmd::Path(io) => (Command::Path, io),
        Cmd::Histogram(io) => (Command::Histogram, io),
        Cmd::Attractor2d(io) => (Command::Attractor2d, io),
        Cmd::Degree(io) => (Command::Degree, io),
    };
    let text = std::fs::read_to_string(&io.config)
        .map_err(|e| Error::Validation(format!("config ({}: {e})", io.config.display())))?;
    let cfg = load_config(&text)?;
    let out = io
        .out
        .or_else(|| cfg.output.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    for path in run_command(command, &cfg, &out)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
