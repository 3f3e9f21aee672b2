use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use evolab::commands::{self, Outputs, RunConfig, Source, EXIT_OK, EXIT_TERMINAL, EXIT_VERIFY};
use evolab::gen::GenSpec;
use evolab::svg::SvgStyle;
use evolab::verify;

/// Evolutes and involutes of polygons and smooth hedgehogs.
#[derive(Parser)]
#[command(name = "evolab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SourceArgs {
    /// Polygon or support-function JSON (single document, array, or JSON lines).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generator, e.g. `random-ngon:6`, `random-zero-qp:7`, `equiangular:8`,
    /// `harmonic:9:2`, `acute-triangle`, `random-support:4`.
    #[arg(long)]
    gen: Option<GenSpec>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl SourceArgs {
    fn source(&self) -> Source {
        Source {
            input: self.input.clone(),
            gen: self.gen,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Iterate a transform with normalization and write trace artifacts.
    Run {
        /// p_evolute, a_o_evolute, a_c_evolute, p_evolvent, a_evolvent, a_evolvent_odd,
        /// smooth_evolute or smooth_evolvent.
        #[arg(long)]
        transform: String,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Independent trials; trial `t` uses RNG stream `t`.
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        jsonl: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check an acceptance criterion (by id or number, or `all`).
    Verify {
        criterion: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
        /// Replace every residual tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Apply a transform or analysis once and print JSON.
    Transform {
        #[arg(long)]
        transform: String,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Spectrum CSV for `harmonics`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Draw polygons as SVG.
    Render {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        svg: PathBuf,
        /// Also draw the image of each polygon under this transform.
        #[arg(long)]
        overlay: Option<String>,
        #[arg(long)]
        markers: bool,
        #[arg(long)]
        arrows: bool,
    },
}

fn dispatch(cmd: Command) -> anyhow::Result<u8> {
    match cmd {
        Command::Run {
            transform,
            source,
            steps,
            trials,
            csv,
            jsonl,
            svg,
        } => {
            let cfg = RunConfig {
                transform,
                source: source.source(),
                steps,
                trials,
                outputs: Outputs { csv, jsonl, svg },
            };
            let (summary, terminal) = commands::run(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(if terminal { EXIT_TERMINAL } else { EXIT_OK })
        }
        Command::Verify {
            criterion,
            seed,
            trials,
            tol,
        } => {
            let opts = verify::Options { seed, trials, tol };
            let (text, passed) = commands::verify(&criterion, &opts)?;
            print!("{text}");
            Ok(if passed { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Transform {
            transform,
            source,
            steps,
            csv,
        } => {
            let value = commands::transform(&transform, &source.source(), steps, csv.as_ref())?;
            println!("{}", serde_json::to_string_pretty(&value)?);
            Ok(EXIT_OK)
        }
        Command::Render {
            source,
            svg,
            overlay,
            markers,
            arrows,
        } => {
            let style = SvgStyle {
                markers,
                arrows,
                header: None,
            };
            let doc = commands::render(&source.source(), overlay.as_deref(), &style)?;
            evolab::io::write_file(&svg, &doc)?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("evolab: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
