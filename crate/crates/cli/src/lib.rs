//! Library half of the command-line front end: experiment grids and the
//! report format, kept callable for tests and other tooling.

pub mod experiment;
pub mod report;

pub use experiment::{run_experiment, ExperimentConfig};
pub use report::{read_reports, write_reports, EvalReport, REPORT_FORMAT_VERSION};
