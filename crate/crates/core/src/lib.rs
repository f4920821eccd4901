//! Generalized temporal correlations and Leggett-Garg-type bounds on
//! finite-dimensional quantum systems.
//!
//! - [`operator`]: observables, states, moments, Heisenberg evolution.
//! - [`correlation`]: the generalized correlation, complex correlation,
//!   correlation matrices, PSD and Schur-complement checks.
//! - [`inequality`]: the LGI parameter and every bound on it, with margin
//!   reports; the bipartite Bell-Leggett-Garg form.
//! - [`spin`]: the closed-form qubit model and figure data.
//! - [`search`]: random instances, Monte-Carlo verification, sweeps,
//!   compass search, and an independent brute-force oracle.

pub mod correlation;
pub mod error;
pub mod inequality;
pub mod operator;
pub mod search;
pub mod spin;

pub use correlation::{
    build_correlation_matrix, complex_correlation, generalized_correlation, psd_check,
    schur_complement_check, ComplexCorrelation, CorrelationMatrix, PsdCheck, SchurCheck,
};
pub use error::{Error, Result};
pub use inequality::{
    blg_parameter, complementarity_check, complex_lgi_bounds, evaluate_bipartite,
    evaluate_schedule, intermediate_bounds, lgi_parameter, theorem1_bound, theorem1_check,
    theorem4_bound, theorem4_check, tlm_check, tlm_single_check, BipartiteEvaluation,
    BipartiteObservables, BlgCorrelations, BoundReport, ComplexLgiCorrelations, ComplexLgiOutcome,
    InequalityId, LgiCorrelations, ScheduleEvaluation, REPORT_TOL, TSIRELSON,
};
pub use operator::{
    evolve, expectation, hermitian_eigendecomposition, make_hermitian, make_state, maximally_mixed,
    pure_state, std_dev, symmetrized_product_expectation, tensor_lift, ComplexMatrix,
    DensityMatrix, Eigen, Hamiltonian, HermitianOperator, Propagator, Slot,
};
pub use spin::{FigureRow, MeasurementSchedule, SweepGrid};
