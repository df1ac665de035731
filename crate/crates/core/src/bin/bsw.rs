use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use bsw::session::{human_summary, parse_session, run_session, Report, RunOptions};
use bsw::{Budget, Error};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bsw",
    version,
    about = "Run computational-algebra sessions and write JSON reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a session file and write its report.
    Run {
        session: PathBuf,
        /// Write the JSON report here and print a summary instead.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Step budget per command.
        #[arg(long, env = "BSW_BUDGET", default_value_t = Budget::DEFAULT_LIMIT)]
        budget: u64,
        /// Seed for sampling commands.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Parse a session file without running it.
    Check { session: PathBuf },
}

fn read(path: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("bsw: cannot read {}: {e}", path.display());
        ExitCode::from(2)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Cmd::Check { session } => {
            let src = match read(&session) {
                Ok(s) => s,
                Err(c) => return c,
            };
            match parse_session(&src) {
                Ok(s) => {
                    println!(
                        "{}: ok, {} bindings, {} commands",
                        session.display(),
                        s.bindings.len(),
                        s.commands.len()
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{}: {e}", session.display());
                    ExitCode::from(2)
                }
            }
        }
        Cmd::Run {
            session,
            out,
            budget,
            seed,
        } => {
            let src = match read(&session) {
                Ok(s) => s,
                Err(c) => return c,
            };
            let timestamp = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .ok();
            let opts = RunOptions {
                budget,
                seed,
                base_dir: session.parent().map(PathBuf::from),
                timestamp,
            };
            let report = match parse_session(&src) {
                Ok(s) => run_session(&s, &opts),
                Err(e) => {
                    let pos = e.pos;
                    Report::parse_failure(&Error::from(e), pos, &opts)
                }
            };
            let text = report.to_json_string();
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &text) {
                        eprintln!("bsw: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                    print!("{}", human_summary(&report.document));
                }
                None => print!("{text}"),
            }
            ExitCode::from(report.exit_code() as u8)
        }
    }
}
