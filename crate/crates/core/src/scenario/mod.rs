//! Built-in scenarios, their configuration, the runner and report output.

mod config;
mod registry;
mod report;
mod runner;

pub use config::{ComponentSpec, ConfigOverride, Expected, ScenarioConfig, SectionSpec, Tolerances, MIN_RESOLUTION};
pub use registry::{builtin, list_scenarios, SCENARIOS};
pub use report::{emit_report, Format, Report, Verdict};
pub use runner::{recovered_euler_characteristic, run_scenario, STENCIL_ORDER};
