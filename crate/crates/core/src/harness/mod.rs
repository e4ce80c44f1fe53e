//! Experiment driver: configuration, instance and graph ingestion, algorithm
//! dispatch, small-instance verification and trace output.

pub mod config;
pub mod experiment;
pub mod instance_io;
pub mod output;
pub mod snap;
pub mod verify;

pub use config::{Algorithm, DeltaSetting, ExperimentConfig, InfluenceSettings, InstanceSource};
pub use experiment::{
    auto_delta, influence_instance, run_experiment, run_on_instance, ExperimentReport,
    GreedySummary, InfluenceInstance, RunSummary,
};
pub use instance_io::{instance_from_json, instance_to_json, read_instance, write_instance};
pub use snap::{load_snap_graph, parse_snap, SnapGraph};
