//! Scenario runner, report emitters and the verification battery for `sectorial`.

pub mod config;
pub mod error;
pub mod report;
pub mod scenario;
pub mod verify;

pub use config::{ScenarioConfig, ScenarioKind, TailConfig, TailKind, Tolerances, OUTPUT_DIR_ENV, SCHEMA_VERSION};
pub use error::{CliError, ConfigError};
pub use report::{emit_report, Check, Format, RawReport, Row, Summary, CSV_HEADER};
pub use scenario::{load_raw, run_batch, run_scenario, write_outputs, BatchOutcome};
pub use verify::{format_table, run_criterion, verify_suite, CriterionResult, Mutation, VerifyOptions, CRITERIA};
