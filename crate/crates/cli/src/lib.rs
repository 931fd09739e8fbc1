//! Scenario files, reports and seeded property checks on top of `tdlc_core`.

pub mod check;
pub mod report;
pub mod scenario;

pub use check::{run_checks, CheckReport, Sampler, SuiteResult};
pub use report::{run_scenario, Report, SCHEMA_VERSION};
pub use scenario::{Expectation, Scenario};
