use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use spinbath::scenario::{
    emit_outputs, reproduce_figure, run_scenario, Engine, OutputFormat, ScenarioConfig,
};

#[derive(Parser)]
#[command(
    name = "spinbath",
    about = "Dephasing dynamics and entanglement of two qubits in finite spin baths",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario from a JSON config and write CSV/SVG series.
    Run {
        /// Path to the scenario configuration (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Override the evaluation engine.
        #[arg(long, value_parser = parse_engine)]
        engine: Option<Engine>,
        /// Override the bath-sampling seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: config's out_dir, then ./out).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce one of the published concurrence figures (ids 2..=8).
    Figure {
        #[arg(long)]
        id: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Parse and validate a scenario configuration, reporting problems.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_engine(s: &str) -> Result<Engine, String> {
    match s {
        "kernels" => Ok(Engine::Kernels),
        "oracle" => Ok(Engine::Oracle),
        other => Err(format!("unknown engine '{other}' (expected kernels|oracle)")),
    }
}

fn load_config(path: &PathBuf) -> anyhow::Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    Ok(ScenarioConfig::from_json(&text)?)
}

fn main() -> anyhow::Result<()> {
    env_logger::init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            engine,
            seed,
            out,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(engine) = engine {
                cfg.engine = engine;
            }
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let out_dir = out
                .or_else(|| cfg.out_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out"));
            let stem = config
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("scenario")
                .to_string();
            let run = run_scenario(&cfg)?;
            let series = [(cfg.family.label(), &run)];
            let mut paths = emit_outputs(
                &series,
                &[OutputFormat::Csv, OutputFormat::Svg],
                &out_dir,
                &stem,
            )?;
            let meta_path = out_dir.join(format!("{stem}_metadata.json"));
            std::fs::write(
                &meta_path,
                serde_json::to_string_pretty(&run.metadata)?,
            )
            .with_context(|| format!("writing {}", meta_path.display()))?;
            paths.push(meta_path);
            println!("{}", serde_json::to_string(&run.metadata)?);
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Command::Figure { id, seed, out } => {
            let paths = reproduce_figure(id, seed, &out)?;
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Command::Validate { config } => match load_config(&config) {
            Ok(cfg) => {
                println!("ok: {}", serde_json::to_string(&cfg)?);
            }
            Err(e) => {
                bail!("invalid configuration: {e:#}");
            }
        },
    }
    Ok(())
}
