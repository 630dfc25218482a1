mod args;
mod config;
mod run;

use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use rand::Rng;
use solvency_core::dataset::REFERENCE_COUNTS;

use args::{Cli, Command, SeedArg};
use config::{CommandConfig, RunConfig};
use run::{CliError, Context};

fn config_from_args(cli: Cli, ctx: &Context) -> Result<RunConfig, CliError> {
    if let Some(path) = &cli.from_config {
        if cli.command.is_some() {
            return Err(CliError::Usage(
                "--from-config replaces the subcommand; give one or the other".into(),
            ));
        }
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.clone(),
            source,
        })?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let inner = value.get("config").cloned().unwrap_or(value);
        return serde_json::from_value(inner).map_err(|e| {
            CliError::Usage(format!(
                "{} holds no run configuration: {e}",
                path.display()
            ))
        });
    }
    let Some(command) = cli.command else {
        return Err(CliError::Usage(Cli::command().render_help().to_string()));
    };
    let seed = match cli.seed {
        SeedArg::Fixed(s) => s,
        SeedArg::Random => {
            let s = rand::thread_rng().gen();
            ctx.note(format!("seed: {s}"));
            s
        }
    };
    let command = match command {
        Command::Label {
            input,
            output,
            label_mode,
        } => CommandConfig::Label {
            input,
            output,
            label_mode: label_mode.into(),
        },
        Command::Select {
            input,
            output,
            label_mode,
            bins,
        } => CommandConfig::Select {
            input,
            output,
            label_mode: label_mode.into(),
            bins,
        },
        Command::Train {
            input,
            output,
            summary,
            label_mode,
            pipeline,
        } => CommandConfig::Train {
            input,
            output,
            summary,
            label_mode: label_mode.into(),
            pipeline: pipeline.to_config(false),
        },
        Command::Evaluate {
            input,
            protocol,
            resample_before_split,
            output,
            label_mode,
            pipeline,
        } => CommandConfig::Evaluate {
            input,
            output,
            label_mode: label_mode.into(),
            protocol,
            pipeline: pipeline.to_config(resample_before_split),
        },
        Command::Classify {
            model,
            input,
            output,
        } => CommandConfig::Classify {
            model,
            input,
            output,
        },
        Command::Synth {
            reference_counts: _,
            counts,
            noise,
            output,
        } => CommandConfig::Synth {
            counts: counts.unwrap_or_else(|| REFERENCE_COUNTS.to_vec()),
            noise,
            output,
        },
    };
    Ok(RunConfig {
        seed,
        format: cli.format.into(),
        command,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context { quiet: cli.quiet };
    let result = config_from_args(cli, &ctx).and_then(|config| run::execute(&config, &ctx));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
