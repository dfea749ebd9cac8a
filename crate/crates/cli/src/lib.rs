//! Command-line front end for the jet-bundle and gauge toolkit: problem
//! files, one command per operation, the built-in worked examples, and
//! human and machine-readable reports.

pub mod catalog;
pub mod commands;
pub mod problem;
pub mod report;

pub use commands::{run, run_spec, Command, Overrides};
pub use problem::{ProblemError, ProblemSpec};
pub use report::Report;

/// Exit status for a report: 0 when every verdict holds, 1 otherwise.
pub fn exit_code(report: &Report) -> i32 {
    if report.passed() {
        0
    } else {
        1
    }
}

/// Exit status for input errors.
pub const INPUT_ERROR: i32 = 2;
