//! Config-driven experiments: parsing, running checks, writing reports,
//! and the bundled example gallery.

mod config;
pub mod gallery;
mod run;

pub use config::{Check, ConfigError, ExperimentConfig, Format, Output, TheoremId};
pub use run::{execute, exit_code, report_name, report_text, summary_text, trajectory, write_reports, CheckResult, RunError, SummaryRow};
