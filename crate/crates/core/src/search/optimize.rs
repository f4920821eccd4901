//! Derivative-free hunting for saturation points and counterexamples.

use serde::Serialize;

use crate::error::Result;
use crate::inequality::{lgi_value, theorem1_check, theorem4_check, tlm_check, LgiCorrelations};
use crate::spin::{
    matrix_path_correlations, singlet_blg_correlations, singlet_matrix_path_correlations,
    spin_correlations, MeasurementSchedule, SweepGrid,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// `L` minus the nested bound.
    NegMarginTh1,
    /// TLM left side minus right side.
    NegMarginTh2,
    /// `BLG` minus its bound, on the two-qubit singlet model.
    NegMarginTh4,
    /// `L` itself.
    LValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchModel {
    SpinAnalytic,
    MatrixPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompassOptions {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_iterations: usize,
}

impl Default for CompassOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.25,
            min_step: 1e-8,
            max_iterations: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub objective: Objective,
    pub model: SearchModel,
    pub start: MeasurementSchedule,
    pub start_value: f64,
    pub schedule: MeasurementSchedule,
    pub value: f64,
    pub iterations: usize,
    pub final_step: f64,
}

fn lgi_correlations(model: SearchModel, s: &MeasurementSchedule) -> Result<LgiCorrelations> {
    match model {
        SearchModel::SpinAnalytic => Ok(spin_correlations(s)),
        SearchModel::MatrixPath => matrix_path_correlations(s),
    }
}

/// Objective at one schedule; larger is "more violating".
pub fn objective_value(
    objective: Objective,
    model: SearchModel,
    s: &MeasurementSchedule,
) -> Result<f64> {
    match objective {
        Objective::LValue => Ok(lgi_value(&lgi_correlations(model, s)?)),
        Objective::NegMarginTh1 => Ok(-theorem1_check(&lgi_correlations(model, s)?)?.margin),
        Objective::NegMarginTh2 => {
            let c = lgi_correlations(model, s)?;
            Ok(-tlm_check(c.c12, c.c23, c.c14, c.c34)?.margin)
        }
        Objective::NegMarginTh4 => {
            let c = match model {
                SearchModel::SpinAnalytic => singlet_blg_correlations(s),
                SearchModel::MatrixPath => singlet_matrix_path_correlations(s)?,
            };
            Ok(-theorem4_check(&c)?.margin)
        }
    }
}

/// Compass search over the four times: each sweep tries `±step` along every
/// coordinate and keeps strict improvements; a sweep without improvement
/// halves the step.
pub fn maximize_violation(
    objective: Objective,
    start: MeasurementSchedule,
    model: SearchModel,
    opts: CompassOptions,
) -> Result<SearchOutcome> {
    let start_value = objective_value(objective, model, &start)?;
    let mut best = start;
    let mut best_value = start_value;
    let mut step = opts.initial_step;
    let mut iterations = 0;
    while step >= opts.min_step && iterations < opts.max_iterations {
        iterations += 1;
        let mut improved = false;
        for k in 0..4 {
            for dir in [1.0, -1.0] {
                let mut trial = best;
                trial.times[k] += dir * step;
                let v = objective_value(objective, model, &trial)?;
                if v > best_value {
                    best = trial;
                    best_value = v;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(SearchOutcome {
        objective,
        model,
        start,
        start_value,
        schedule: best,
        value: best_value,
        iterations,
        final_step: step,
    })
}

/// Best grid point for `objective`, first in grid order on ties.
pub fn best_grid_point(
    objective: Objective,
    model: SearchModel,
    grid: &SweepGrid,
) -> Result<(MeasurementSchedule, f64)> {
    let mut best = (grid.schedule(0), f64::NEG_INFINITY);
    for i in 0..grid.len() {
        let s = grid.schedule(i);
        let v = objective_value(objective, model, &s)?;
        if v > best.1 {
            best = (s, v);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::TSIRELSON;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn climbs_to_tsirelson() {
        let start = MeasurementSchedule::phases([0.0, 0.7, 1.5, 2.3]);
        let out = maximize_violation(
            Objective::LValue,
            start,
            SearchModel::SpinAnalytic,
            CompassOptions::default(),
        )
        .unwrap();
        assert!((out.value - TSIRELSON).abs() < 1e-6, "{}", out.value);
        assert!(out.value >= out.start_value);
        assert!(out.iterations <= 500);
    }

    #[test]
    fn stationary_at_optimum() {
        let start = MeasurementSchedule::phases([0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4]);
        let opts = CompassOptions::default();
        let out =
            maximize_violation(Objective::LValue, start, SearchModel::SpinAnalytic, opts).unwrap();
        for (a, b) in out.schedule.times.iter().zip(start.times) {
            assert!((a - b).abs() <= opts.initial_step);
        }
        assert!(out.value >= out.start_value);
    }

    #[test]
    fn no_violation_of_theorem1() {
        let start = MeasurementSchedule::phases([0.0, 0.7, 1.5, 2.3]);
        for model in [SearchModel::SpinAnalytic, SearchModel::MatrixPath] {
            let out = maximize_violation(
                Objective::NegMarginTh1,
                start,
                model,
                CompassOptions::default(),
            )
            .unwrap();
            assert!(out.value <= 1e-9, "{}", out.value);
        }
    }
}
