use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use graphkms::report::{self, CommandError, Outcome, EXIT_INVALID};

/// KMS states and orthogonal filtrations of graph C*-algebras.
#[derive(Parser)]
#[command(name = "graphkms", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a graph and decide existence of the critical KMS state.
    Analyze {
        graph: PathBuf,
        /// Print the JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the critical state (and tau when defined) on an element.
    Eval {
        graph: PathBuf,
        /// Element such as "1/2*S[e1]S*[e1] + p[v]".
        #[arg(long = "expr")]
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Build and verify the truncated orthogonal filtration.
    Filtration {
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_k: usize,
        #[arg(long, default_value_t = 3)]
        max_r: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run the property suites: algebra, kms, lemmas or all.
    Verify {
        graph: PathBuf,
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
}

fn emit(result: Result<Outcome, CommandError>, json: bool) -> ExitCode {
    match result {
        Ok(out) => {
            if json {
                println!("{}", out.report.to_json());
            } else {
                for line in &out.lines {
                    println!("{line}");
                }
            }
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INVALID as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Analyze { graph, json } => emit(report::cmd_analyze(&graph), json),
        Command::Eval { graph, expr, json } => emit(report::cmd_eval(&graph, &expr), json),
        Command::Filtration {
            graph,
            max_k,
            max_r,
            json,
        } => emit(report::cmd_filtration(&graph, max_k, max_r), json),
        Command::Verify {
            graph,
            suite,
            max_len,
            tol,
            json,
        } => emit(report::cmd_verify(&graph, &suite, max_len, tol), json),
    }
}
