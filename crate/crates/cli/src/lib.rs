//! Job configs, the task runner and report rendering behind the `orbit-lie`
//! command.

pub mod config;
pub mod report;
pub mod run;

pub use config::{parse_config, ConfigError, JobConfig};
pub use report::{to_json, to_table};
pub use run::{run, JobReport, Status};
