//! Exhaustive grid sweeps of the spin-model margins.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::inequality::{evaluate_schedule, REPORT_TOL};
use crate::spin::{
    max_deviation, spin_correlations, spin_d1, spin_d2, spin_hamiltonian, spin_observable,
    spin_sphere_coordinates, spin_state, SweepGrid,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepModel {
    /// Closed-form cosines.
    SpinAnalytic,
    /// Operator evolution and the moment formula on the maximally mixed state.
    MatrixPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalitySweep {
    pub min_margin: f64,
    pub argmin: [f64; 4],
    /// Points with `|margin| <= REPORT_TOL`.
    pub boundary_cases: u64,
}

impl InequalitySweep {
    fn new() -> Self {
        Self {
            min_margin: f64::INFINITY,
            argmin: [f64::NAN; 4],
            boundary_cases: 0,
        }
    }

    fn push(&mut self, margin: f64, times: [f64; 4]) {
        if margin < self.min_margin {
            self.min_margin = margin;
            self.argmin = times;
        }
        if margin.abs() <= REPORT_TOL {
            self.boundary_cases += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub model: SweepModel,
    pub grid: SweepGrid,
    pub points: u64,
    /// `D1`: nested bound minus `L`.
    pub theorem1: InequalitySweep,
    /// `D2`: TLM right side minus left side.
    pub theorem2: InequalitySweep,
    /// One minus the complementarity left side.
    pub theorem3: InequalitySweep,
    pub max_sphere_norm: f64,
    /// For the matrix path: largest deviation of any correlation from the
    /// closed form over the grid.
    pub cross_model_deviation: Option<f64>,
}

impl SweepResult {
    pub fn min_margin(&self) -> f64 {
        self.theorem1
            .min_margin
            .min(self.theorem2.min_margin)
            .min(self.theorem3.min_margin)
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    margins: [f64; 3],
    sphere: f64,
    deviation: Option<f64>,
}

fn analytic_point(grid: &SweepGrid, i: usize) -> Point {
    let s = grid.schedule(i);
    let [l, a, b] = spin_sphere_coordinates(&s);
    let sphere_sq = l * l + a * a + b * b;
    Point {
        margins: [spin_d1(&s), spin_d2(&s), 1.0 - sphere_sq],
        sphere: sphere_sq.sqrt(),
        deviation: None,
    }
}

fn matrix_point(grid: &SweepGrid, i: usize) -> Result<Point> {
    let s = grid.schedule(i);
    let eval = evaluate_schedule(
        &spin_state(),
        &spin_observable(),
        &spin_hamiltonian(s.omega),
        s.times,
    )?;
    Ok(Point {
        margins: [
            eval.theorem1.margin,
            eval.theorem2.margin,
            eval.theorem3.margin,
        ],
        sphere: eval.theorem3.lhs.sqrt(),
        deviation: Some(max_deviation(&eval.correlations, &spin_correlations(&s))),
    })
}

/// Evaluates every grid point; reductions run in grid order.
pub fn grid_sweep(model: SweepModel, grid: &SweepGrid) -> Result<SweepResult> {
    let points: Vec<Point> = match model {
        SweepModel::SpinAnalytic => (0..grid.len())
            .into_par_iter()
            .map(|i| analytic_point(grid, i))
            .collect(),
        SweepModel::MatrixPath => (0..grid.len())
            .into_par_iter()
            .map(|i| matrix_point(grid, i))
            .collect::<Result<Vec<_>>>()?,
    };

    let mut sweeps = [InequalitySweep::new(); 3];
    let mut max_sphere: f64 = 0.0;
    let mut deviation: Option<f64> = None;
    for (i, p) in points.iter().enumerate() {
        let times = grid.schedule(i).times;
        for (sweep, &m) in sweeps.iter_mut().zip(&p.margins) {
            sweep.push(m, times);
        }
        max_sphere = max_sphere.max(p.sphere);
        if let Some(d) = p.deviation {
            deviation = Some(deviation.map_or(d, |v| v.max(d)));
        }
    }
    let [theorem1, theorem2, theorem3] = sweeps;
    Ok(SweepResult {
        model,
        grid: *grid,
        points: points.len() as u64,
        theorem1,
        theorem2,
        theorem3,
        max_sphere_norm: max_sphere,
        cross_model_deviation: deviation,
    })
}
