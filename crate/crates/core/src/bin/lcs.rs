use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lcs_verify::cli::{run_resolved, Caps, ResolvedRun, RunConfig, Section};
use lcs_verify::Error;

#[derive(Parser)]
#[command(name = "lcs", version, about = "Finite-level lower central series verification for free-by-cyclic groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every section selected by the config.
    Report(Opts),
    Identities(Opts),
    Module(Opts),
    Tensor(Opts),
    Lie(Opts),
    Norms(Opts),
    Homology(Opts),
    Lcs(Opts),
    Witnesses(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Opts {
    /// JSON run configuration; defaults to the reference preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Preset name, used when no config file is given.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Include per-section wall-clock times in JSON output.
    #[arg(long)]
    durations: bool,
    #[arg(long, env = "LCS_MAGNUS_CAP")]
    max_magnus_cap: Option<usize>,
    #[arg(long, env = "LCS_CLASS_CAP")]
    max_class: Option<usize>,
    #[arg(long, env = "LCS_TENSOR_MAX")]
    max_tensor: Option<usize>,
    #[arg(long, env = "LCS_NORM_MAX")]
    max_norm: Option<usize>,
    #[arg(long, env = "LCS_EXTERIOR_LIMIT")]
    max_exterior: Option<usize>,
    #[arg(long, env = "LCS_DEGREE_CAP")]
    max_degree: Option<usize>,
    #[arg(long, env = "LCS_WITNESS_MAX")]
    max_witness: Option<usize>,
}

impl Opts {
    fn apply(&self, caps: &mut Caps) {
        let pairs = [
            (self.max_magnus_cap, &mut caps.magnus_cap),
            (self.max_class, &mut caps.class_cap),
            (self.max_tensor, &mut caps.tensor_max),
            (self.max_norm, &mut caps.norm_max),
            (self.max_exterior, &mut caps.exterior_limit),
            (self.max_degree, &mut caps.degree_cap),
            (self.max_witness, &mut caps.witness_max),
        ];
        for (v, slot) in pairs {
            if let Some(v) = v {
                *slot = v;
            }
        }
    }

    fn resolve(&self, only: Option<Section>) -> Result<ResolvedRun, Error> {
        let cfg = match (&self.config, &self.preset) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
                    location: path.display().to_string(),
                    msg: e.to_string(),
                })?;
                RunConfig::from_json(&text)?
            }
            (None, Some(p)) => RunConfig::preset(p)?,
            (None, None) => RunConfig::preset("reference")?,
        };
        let mut run = cfg.resolve()?;
        self.apply(&mut run.caps);
        run.caps.validate()?;
        if let Some(s) = only {
            run.sections = vec![s];
        }
        Ok(run)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (opts, only) = match &cli.command {
        Command::Report(o) => (o, None),
        Command::Identities(o) => (o, Some(Section::Identities)),
        Command::Module(o) => (o, Some(Section::Module)),
        Command::Tensor(o) => (o, Some(Section::Tensor)),
        Command::Lie(o) => (o, Some(Section::Lie)),
        Command::Norms(o) => (o, Some(Section::Norms)),
        Command::Homology(o) => (o, Some(Section::Homology)),
        Command::Lcs(o) => (o, Some(Section::Lcs)),
        Command::Witnesses(o) => (o, Some(Section::Witnesses)),
    };
    let run = match opts.resolve(only) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let report = run_resolved(&run);
    let text = match opts.format {
        Format::Text => report.render_text(),
        Format::Json => {
            let v = if opts.durations {
                report.to_json()
            } else {
                report.payload_json()
            };
            serde_json::to_string_pretty(&v).expect("report serializes") + "\n"
        }
    };
    match &opts.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
