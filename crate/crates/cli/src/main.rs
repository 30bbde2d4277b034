use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ndof_cli::config::MethodKind;
use ndof_cli::error::Failure;
use ndof_cli::reproduce::reproduce;
use ndof_cli::{run_capacity, run_ndof, run_scenario, validate, Format, RunOptions, ScenarioConfig};

#[derive(Parser)]
#[command(name = "ndof", version, about = "Spatial degrees of freedom from shadows and channel spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Mutual shadow and the NDoF it predicts; writes shadow and summary files.
    Shadow(Common),
    /// Like `shadow`, printing the summary to stdout.
    Ndof(Common),
    /// Full run: shadow, sampled channel and its spectrum.
    Spectrum(Common),
    /// Radiation modes, trace identity and water-filling (far-field receivers).
    Capacity(Common),
    /// Regenerate the data behind a figure (or `all`).
    Reproduce {
        figure: String,
        #[command(flatten)]
        common: Common,
    },
    /// Static checks of a scenario; prints a JSON report.
    Validate(Common),
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    method: Option<MethodKind>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

impl Common {
    fn options(&self) -> RunOptions {
        RunOptions { out: self.out.clone(), format: self.format, method: self.method, seed: self.seed }
    }

    fn load(&self) -> ndof::Result<ScenarioConfig> {
        let path = self
            .config
            .as_ref()
            .ok_or_else(|| ndof::Error::InvalidArgument("--config is required".into()))?;
        ScenarioConfig::load(path)
    }

    fn out_or_default(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("summary serializes"));
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Shadow(c) | Command::Ndof(c) | Command::Spectrum(c) | Command::Capacity(c)
            if c.config.is_none() =>
        {
            Err(Failure::new(&ndof::Error::InvalidArgument("--config is required".into()), None))
        }
        Command::Shadow(c) => {
            let cfg = c.load().map_err(|e| Failure::new(&e, None))?;
            let opts = RunOptions { out: Some(c.out_or_default()), ..c.options() };
            print_json(&run_ndof(&cfg, &opts).map_err(|e| Failure::new(&e, Some(&cfg.name)))?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Ndof(c) => {
            let cfg = c.load().map_err(|e| Failure::new(&e, None))?;
            print_json(&run_ndof(&cfg, &c.options()).map_err(|e| Failure::new(&e, Some(&cfg.name)))?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Spectrum(c) => {
            let cfg = c.load().map_err(|e| Failure::new(&e, None))?;
            let opts = RunOptions { out: Some(c.out_or_default()), ..c.options() };
            print_json(&run_scenario(&cfg, &opts).map_err(|e| Failure::new(&e, Some(&cfg.name)))?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Capacity(c) => {
            let cfg = c.load().map_err(|e| Failure::new(&e, None))?;
            let opts = RunOptions { out: Some(c.out_or_default()), ..c.options() };
            print_json(&run_capacity(&cfg, &opts).map_err(|e| Failure::new(&e, Some(&cfg.name)))?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Reproduce { figure, common } => {
            let files = reproduce(&figure, &common.out_or_default(), common.seed.unwrap_or(1))
                .map_err(|e| Failure::new(&e, Some(&figure)))?;
            for f in files {
                println!("{}", f.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate(c) => {
            let report = match c.load() {
                Ok(cfg) => validate(&cfg, c.method),
                Err(e) => ndof_cli::ValidationReport { violations: vec![e.to_string()], ..Default::default() },
            };
            print_json(&report);
            Ok(if report.ok { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("{}", serde_json::json!({ "error": "InvalidArgument", "message": e.to_string() }));
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{}", serde_json::to_string(&f).expect("failure serializes"));
            ExitCode::from(1)
        }
    }
}
