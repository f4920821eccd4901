//! Stress-testing harness: random instances, Monte-Carlo verification, grid
//! sweeps, compass search and the brute-force oracle.

pub mod instance;
pub mod optimize;
pub mod oracle;
pub mod sweep;
pub mod verify;

pub use instance::{
    random_bipartite_instance, random_instance, random_times, BipartiteInstance, Instance,
    ObservableKind, RandomInstanceConfig, StateKind, TimeRange,
};
pub use optimize::{
    best_grid_point, maximize_violation, objective_value, CompassOptions, Objective, SearchModel,
    SearchOutcome,
};
pub use oracle::{brute_force_oracle, oracle_correlation, ORACLE_STEPS};
pub use sweep::{grid_sweep, InequalitySweep, SweepModel, SweepResult};
pub use verify::{monte_carlo_verify, MarginStat, Margins, VerificationReport, SCHEMA_VERSION};
