//! Scenario-driven verification runs for `kframe-core`: load a JSON
//! scenario, execute seeded property suites, and emit JSON or text reports.

pub mod error;
pub mod report;
pub mod scenario;
pub mod suite;

pub use error::{CliError, Result};
pub use report::{emit_report, Format, PropertyRecord, SuiteReport, Witness};
pub use scenario::{fixture_scenario, load_scenario, Scenario};
pub use suite::{run_suite, PropertyId};
