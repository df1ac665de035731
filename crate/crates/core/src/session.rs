//! Batch sessions: a small statement language, a runner and JSON reports.

mod parse;
mod report;
mod run;

pub use parse::{
    parse_session, Binding, Command, CommandKind, LojaSource, Pos, Session, SyntaxError, Value,
    DEFAULT_GERM_IDEAL,
};
pub use report::{human_summary, strip_timestamp, Report};
pub use run::{run_command, run_session, RunOptions};
