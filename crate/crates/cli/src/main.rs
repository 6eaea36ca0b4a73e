use clap::{Parser, Subcommand};
use kaos2b::{run_backprop, run_check, run_render, run_translate, Format, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Domain-model toolchain: validate model workspaces, translate them to
/// B System components, propagate B-side additions back into the models,
/// and render structure diagrams.
#[derive(Parser)]
#[command(name = "kaos2b", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the workspace against the well-formedness constraints.
    Check(CommandArgs),
    /// Check the workspace, then emit one .bsys component per model.
    Translate(CommandArgs),
    /// Apply a B-side delta file back onto the .dom model files.
    Backprop(CommandArgs),
    /// Emit one text diagram per model.
    Render(CommandArgs),
}

#[derive(clap::Args)]
struct CommandArgs {
    /// Directory holding the .dom model files.
    workspace: PathBuf,
    /// Directory for generated files (default: the workspace itself).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// File of B-side additions to back-propagate.
    #[arg(long, value_name = "FILE")]
    delta: Option<PathBuf>,
    /// Treat warnings as errors.
    #[arg(long)]
    strict: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match Format::from_env() {
        Ok(f) => f,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    let (run, args): (fn(&RunConfig) -> i32, CommandArgs) = match cli.command {
        Command::Check(args) => (run_check, args),
        Command::Translate(args) => (run_translate, args),
        Command::Backprop(args) => (run_backprop, args),
        Command::Render(args) => (run_render, args),
    };
    let cfg = RunConfig {
        workspace: args.workspace,
        out: args.out,
        delta: args.delta,
        strict: args.strict,
        format,
    };
    ExitCode::from(run(&cfg) as u8)
}
