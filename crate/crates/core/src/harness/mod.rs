//! Scenario harness: configs in, deterministic reports out.

pub mod fields;
pub mod probe;
pub mod report;
pub mod run;
pub mod sampling;
pub mod scenario;

pub use probe::{rigidity_probe, ProbeOutcome, ProbeReport, ProbeSearch};
pub use report::{CheckRecord, GridDump, GridRow, Report, Status};
pub use run::{load_scenario, run_scenario, ConfigError, Outcome};
pub use scenario::{Scenario, ScenarioKind};
