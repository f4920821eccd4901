//! Closed-form qubit demonstration system.
//!
//! `H = (omega/2) sigma_x`, `Q = sigma_z`, so in the Heisenberg picture
//! `Q(t) = cos(omega t) sigma_z + sin(omega t) sigma_y` and on the maximally
//! mixed state `C(Q(t), Q(s)) = cos(omega (t - s))`.
//!
//! The maximally mixed state is the one choice that makes the closed form
//! exact: `{Q(t), Q(s)}/2` is a multiple of the identity, so the symmetrized
//! moment is state independent, but the mean-subtraction term vanishes only
//! when `<Q(t)> = 0` for every `t`.
//!
//! A two-qubit extension (singlet state, each party measuring its own
//! evolved `sigma_z`) supplies a closed-form instance of the bipartite bound.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::correlation::build_correlation_matrix;
use crate::error::{Error, Result};
use crate::inequality::{
    evaluate_bipartite, lgi_value, theorem1_value, BipartiteObservables, BlgCorrelations,
    LgiCorrelations,
};
use crate::operator::{
    maximally_mixed, pure_state, sigma_x, sigma_z, DensityMatrix, Hamiltonian, HermitianOperator,
    Propagator,
};

/// Four measurement times with the angular frequency of the spin model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementSchedule {
    pub times: [f64; 4],
    pub omega: f64,
}

impl MeasurementSchedule {
    pub fn new(times: [f64; 4], omega: f64) -> Result<Self> {
        if let Some(&t) = times.iter().find(|t| !t.is_finite()) {
            return Err(Error::OutOfRange {
                name: "time",
                value: t,
            });
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::OutOfRange {
                name: "omega",
                value: omega,
            });
        }
        Ok(Self { times, omega })
    }

    /// Unit frequency.
    pub fn phases(times: [f64; 4]) -> Self {
        Self { times, omega: 1.0 }
    }

    pub fn shifted(&self, delta: f64) -> Self {
        Self {
            times: self.times.map(|t| t + delta),
            omega: self.omega,
        }
    }

    fn c(&self, i: usize, j: usize) -> f64 {
        spin_correlation(self.omega, self.times[i], self.times[j])
    }
}

/// `cos(omega (t - s))`.
pub fn spin_correlation(omega: f64, t: f64, s: f64) -> f64 {
    (omega * (t - s)).cos()
}

pub fn spin_correlations(s: &MeasurementSchedule) -> LgiCorrelations {
    LgiCorrelations {
        c12: s.c(0, 1),
        c23: s.c(1, 2),
        c34: s.c(2, 3),
        c14: s.c(0, 3),
        c13: s.c(0, 2),
        c24: s.c(1, 3),
    }
}

pub fn spin_lgi(s: &MeasurementSchedule) -> f64 {
    lgi_value(&spin_correlations(s))
}

/// Nested bound minus `L`.
pub fn spin_d1(s: &MeasurementSchedule) -> f64 {
    let c = spin_correlations(s);
    theorem1_value(c.c13, c.c24) - lgi_value(&c)
}

/// Sine-product side minus cosine-product side of the TLM form.
pub fn spin_d2(s: &MeasurementSchedule) -> f64 {
    let [t1, t2, t3, t4] = s.times;
    let w = s.omega;
    let sin = |x: f64| (w * x).sin();
    let cos = |x: f64| (w * x).cos();
    (sin(t2 - t1) * sin(t2 - t3)).abs() + (sin(t4 - t1) * sin(t4 - t3)).abs()
        - (cos(t2 - t1) * cos(t2 - t3) - cos(t4 - t1) * cos(t4 - t3)).abs()
}

/// Normalized coordinates `(L, C13, C24) / 2√2`.
pub fn spin_sphere_coordinates(s: &MeasurementSchedule) -> [f64; 3] {
    let c = spin_correlations(s);
    let k = crate::inequality::TSIRELSON;
    [lgi_value(&c) / k, c.c13 / k, c.c24 / k]
}

pub fn spin_hamiltonian(omega: f64) -> Hamiltonian {
    Hamiltonian::new(sigma_x().affine(omega / 2.0, 0.0))
}

pub fn spin_observable() -> HermitianOperator {
    sigma_z()
}

pub fn spin_state() -> DensityMatrix {
    maximally_mixed(2)
}

/// The six correlations computed through evolution and the moment formula.
pub fn matrix_path_correlations(s: &MeasurementSchedule) -> Result<LgiCorrelations> {
    let propagator = Propagator::new(&spin_hamiltonian(s.omega))?;
    let q = spin_observable();
    let ops = s
        .times
        .iter()
        .map(|&t| propagator.evolve(&q, t))
        .collect::<Result<Vec<_>>>()?;
    let m = build_correlation_matrix(&spin_state(), &ops)?;
    Ok(LgiCorrelations {
        c12: m.get(0, 1),
        c23: m.get(1, 2),
        c34: m.get(2, 3),
        c14: m.get(0, 3),
        c13: m.get(0, 2),
        c24: m.get(1, 3),
    })
}

pub(crate) fn max_deviation(a: &LgiCorrelations, b: &LgiCorrelations) -> f64 {
    [
        a.c12 - b.c12,
        a.c23 - b.c23,
        a.c34 - b.c34,
        a.c14 - b.c14,
        a.c13 - b.c13,
        a.c24 - b.c24,
    ]
    .iter()
    .fold(0.0, |acc: f64, d| acc.max(d.abs()))
}

/// Largest `|closed form - matrix path|` over the six pairs.
pub fn matrix_path_crosscheck(s: &MeasurementSchedule) -> Result<f64> {
    Ok(max_deviation(
        &spin_correlations(s),
        &matrix_path_correlations(s)?,
    ))
}

/// Singlet-state correlations with Alice measuring at `times[0..2]` and Bob
/// at `times[2..4]`: `C(A, A') = cos`, cross-party `C(A, B) = -cos`.
pub fn singlet_blg_correlations(s: &MeasurementSchedule) -> BlgCorrelations {
    BlgCorrelations {
        c_a1a2: s.c(0, 1),
        c_a1b2: -s.c(0, 3),
        c_b1b2: s.c(2, 3),
        c_b1a2: -s.c(2, 1),
        c_a1b1: -s.c(0, 2),
        c_a2b2: -s.c(1, 3),
    }
}

/// `(|01> - |10>)/√2`.
pub fn singlet_state() -> DensityMatrix {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    pure_state(&[z, Complex64::new(r, 0.0), Complex64::new(-r, 0.0), z])
        .expect("nonzero singlet vector")
}

pub fn singlet_matrix_path_correlations(s: &MeasurementSchedule) -> Result<BlgCorrelations> {
    let h = spin_hamiltonian(s.omega);
    let ops = BipartiteObservables::from_local_dynamics(&sigma_z(), &h, &sigma_z(), &h, s.times)?;
    Ok(evaluate_bipartite(&singlet_state(), &ops)?.correlations)
}

/// One sweep axis: `steps` evenly spaced points from `lo` to `hi`
/// inclusive; a single step sits at `lo`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidConfig("grid steps must be at least 1".into()));
        }
        if !(lo.is_finite() && hi.is_finite()) || (steps > 1 && lo >= hi) {
            return Err(Error::InvalidConfig(format!(
                "invalid axis range [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi, steps })
    }

    pub fn point(lo: f64) -> Self {
        Self {
            lo,
            hi: lo,
            steps: 1,
        }
    }

    pub fn value(&self, k: usize) -> f64 {
        if self.steps == 1 {
            self.lo
        } else {
            self.lo + (self.hi - self.lo) * k as f64 / (self.steps - 1) as f64
        }
    }
}

/// `t1` fixed, `t2, t3, t4` swept over a Cartesian grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepGrid {
    pub t1: f64,
    pub omega: f64,
    pub axes: [Axis; 3],
}

impl SweepGrid {
    /// Same axis for `t2, t3, t4` and `t1 = 0`.
    pub fn uniform(steps: usize, lo: f64, hi: f64, omega: f64) -> Result<Self> {
        let axis = Axis::new(lo, hi, steps)?;
        Self::new(0.0, omega, [axis; 3])
    }

    pub fn new(t1: f64, omega: f64, axes: [Axis; 3]) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "omega must be positive, got {omega}"
            )));
        }
        if !t1.is_finite() {
            return Err(Error::InvalidConfig("t1 must be finite".into()));
        }
        Ok(Self { t1, omega, axes })
    }

    /// The 81-point-per-axis sweep over `[0, 2π]` with unit frequency.
    pub fn default_figure() -> Self {
        Self::uniform(81, 0.0, std::f64::consts::TAU, 1.0).expect("valid default grid")
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Schedule at a flat index, `t2` varying slowest.
    pub fn schedule(&self, index: usize) -> MeasurementSchedule {
        let [a2, a3, a4] = self.axes;
        let k4 = index % a4.steps;
        let k3 = (index / a4.steps) % a3.steps;
        let k2 = index / (a4.steps * a3.steps);
        MeasurementSchedule {
            times: [self.t1, a2.value(k2), a3.value(k3), a4.value(k4)],
            omega: self.omega,
        }
    }
}

/// One grid point of the demonstration figures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureRow {
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    pub d1: f64,
    pub d2: f64,
    pub l_norm: f64,
    pub c13_norm: f64,
    pub c24_norm: f64,
}

impl FigureRow {
    pub fn from_schedule(s: &MeasurementSchedule) -> Self {
        let [l_norm, c13_norm, c24_norm] = spin_sphere_coordinates(s);
        Self {
            t2: s.times[1],
            t3: s.times[2],
            t4: s.times[3],
            d1: spin_d1(s),
            d2: spin_d2(s),
            l_norm,
            c13_norm,
            c24_norm,
        }
    }

    pub fn sphere_norm(&self) -> f64 {
        (self.l_norm * self.l_norm + self.c13_norm * self.c13_norm + self.c24_norm * self.c24_norm)
            .sqrt()
    }
}

/// Rows in grid order; evaluated in parallel, merged by index.
pub fn figure_data(grid: &SweepGrid) -> Vec<FigureRow> {
    (0..grid.len())
        .into_par_iter()
        .map(|i| FigureRow::from_schedule(&grid.schedule(i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI, SQRT_2};

    fn saturating() -> MeasurementSchedule {
        MeasurementSchedule::phases([0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4])
    }

    #[test]
    fn correlation_examples() {
        assert!((spin_correlation(1.0, FRAC_PI_4, 0.0) - SQRT_2 / 2.0).abs() < 1e-15);
        assert_eq!(spin_correlation(1.0, 0.7, 0.7), 1.0);
        assert!((spin_correlation(2.0, FRAC_PI_2, 0.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn d1_examples() {
        assert!(spin_d1(&saturating()).abs() < 1e-12);
        assert_eq!(spin_d1(&MeasurementSchedule::phases([0.0; 4])), 0.0);
        // Bound sqrt(3) + 1, L = 5/2.
        let s = MeasurementSchedule::phases([0.0, FRAC_PI_3, 2.0 * FRAC_PI_3, PI]);
        assert!((spin_d1(&s) - (3.0_f64.sqrt() - 1.5)).abs() < 1e-12);
    }

    #[test]
    fn d2_examples() {
        assert!(spin_d2(&saturating()).abs() < 1e-12);
        assert_eq!(spin_d2(&MeasurementSchedule::phases([0.0; 4])), 0.0);
    }

    #[test]
    fn schedule_validation() {
        assert!(MeasurementSchedule::new([0.0, 1.0, f64::NAN, 2.0], 1.0).is_err());
        assert!(MeasurementSchedule::new([0.0; 4], 0.0).is_err());
        assert!(MeasurementSchedule::new([0.0; 4], 2.0).is_ok());
    }

    #[test]
    fn grid_layout() {
        let g = SweepGrid::uniform(3, 0.0, 2.0, 1.0).unwrap();
        assert_eq!(g.len(), 27);
        assert_eq!(g.schedule(0).times, [0.0, 0.0, 0.0, 0.0]);
        assert_eq!(g.schedule(1).times, [0.0, 0.0, 0.0, 1.0]);
        assert_eq!(g.schedule(3).times, [0.0, 0.0, 1.0, 0.0]);
        assert_eq!(g.schedule(26).times, [0.0, 2.0, 2.0, 2.0]);
        let single = SweepGrid::uniform(1, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(figure_data(&single).len(), 1);
        assert!(SweepGrid::uniform(0, 0.0, 1.0, 1.0).is_err());
        assert!(SweepGrid::uniform(4, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn default_grid_contains_saturating_schedule() {
        let g = SweepGrid::default_figure();
        // pi/4 is ten steps of 2pi/80.
        let idx = (10 * 81 + 20) * 81 + 30;
        let s = g.schedule(idx);
        for (a, b) in s.times.iter().zip(saturating().times) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn crosscheck_small_cases() {
        assert!(matrix_path_crosscheck(&saturating()).unwrap() < 1e-12);
        assert!(matrix_path_crosscheck(&MeasurementSchedule::phases([0.0; 4])).unwrap() < 1e-12);
    }

    #[test]
    fn singlet_closed_form_matches_matrix_path() {
        for times in [
            [0.0, 0.4, 1.3, 2.9],
            [0.0, FRAC_PI_4, 0.0, FRAC_PI_4],
            [1.0, -0.5, 3.3, 0.2],
        ] {
            let s = MeasurementSchedule::new(times, 1.3).unwrap();
            let a = singlet_blg_correlations(&s);
            let b = singlet_matrix_path_correlations(&s).unwrap();
            for (x, y) in [
                (a.c_a1a2, b.c_a1a2),
                (a.c_a1b2, b.c_a1b2),
                (a.c_b1b2, b.c_b1b2),
                (a.c_b1a2, b.c_b1a2),
                (a.c_a1b1, b.c_a1b1),
                (a.c_a2b2, b.c_a2b2),
            ] {
                assert!((x - y).abs() < 1e-12, "{x} vs {y}");
            }
        }
    }
}
