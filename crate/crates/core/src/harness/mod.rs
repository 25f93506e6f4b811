//! Scenario configuration, the fractional-error metrics, the eccentricity and
//! separation sweeps, result files and the closed-form self-consistency suite.

pub mod config;
pub mod emit;
pub mod metrics;
pub mod sweep;
pub mod validate;

pub use config::{AbsModel, DtGrid, ExclusionWindow, PsdScenario, RelModel, ScenarioConfig};
pub use emit::{emit_results, read_curves, read_manifest, read_records, write_sweep, Manifest, SweepTiming};
pub use metrics::{first_crossing, metric_delta_max, metric_delta_t_min, ErrorCurve, MetricValue};
pub use sweep::{
    sweep_absolute_eccentricity, sweep_absolute_with, sweep_relative_separation, sweep_relative_with, CurveRecord,
    MetricKind, MetricRecord, SweepKind, SweepResult,
};
pub use validate::{run_validation, ValidationCase, ValidationReport};
