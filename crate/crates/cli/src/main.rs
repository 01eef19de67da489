//! The `seg` binary. Exit codes: 0 success, 1 usage, 2 data error,
//! 3 numeric failure.

mod commands;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "seg",
    version,
    about = "Link prediction: enclosing subgraphs, structural labels, heuristics, and a jointly trained structure-and-graph model"
)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List simple paths between a pair inside its enclosing subgraph.
    Paths(commands::PathsArgs),
    /// Print structural labels for the subgraph around a pair.
    Label(commands::LabelArgs),
    /// Score pairs with a classical heuristic.
    Score(commands::ScoreArgs),
    /// Train a model; writes a checkpoint and optionally a loss curve.
    Train(commands::TrainArgs),
    /// Evaluate a checkpoint on held-out pairs.
    Eval(commands::EvalArgs),
    /// Score pairs with a trained checkpoint.
    Predict(commands::PredictArgs),
    /// Compare analytic gradients against central finite differences.
    Gradcheck(commands::GradcheckArgs),
    /// Generate the triadic-closure benchmark files.
    Synth(commands::SynthArgs),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Some(t) = cli.threads {
        seg_core::exec::init_threads(t);
    }
    let result = match cli.command {
        Command::Paths(a) => commands::cmd_paths(a),
        Command::Label(a) => commands::cmd_label(a),
        Command::Score(a) => commands::cmd_score(a),
        Command::Train(a) => commands::cmd_train(a),
        Command::Eval(a) => commands::cmd_eval(a),
        Command::Predict(a) => commands::cmd_predict(a),
        Command::Gradcheck(a) => commands::cmd_gradcheck(a),
        Command::Synth(a) => commands::cmd_synth(a),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(if err.is_data_error() { 2 } else { 3 });
    }
}
