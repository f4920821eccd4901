//! Generalized two-operator correlations and the correlation matrices built
//! from them.
//!
//! For Hermitian `X`, `Y` and a state `rho`
//!
//! ```text
//! C(X, Y) = (<{X, Y}>/2 - <X><Y>) / (dX dY)
//! ```
//!
//! with `dX` the standard deviation of `X`. Every pairwise matrix
//! `[C(X_i, X_j)]` is a Gram matrix of centered, normalized operators and is
//! therefore positive semi-definite; the inequality suite rests on that fact
//! through Schur complements of 3x3 blocks.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{
    centered_factor, frobenius_inner, ComplexMatrix, DensityMatrix, HermitianOperator,
};

/// Standard deviations at or below this make `C` undefined.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;
/// Overshoot of `|C|` past one that is attributed to rounding and clamped.
pub const CLAMP_BAND: f64 = 1e-9;
/// Default tolerance for PSD checks on correlation matrices.
pub const PSD_TOL: f64 = 1e-9;

/// Matrix-entry tolerance for structural validation of raw correlation
/// matrices.
const STRUCTURE_TOL: f64 = 1e-12;

fn clamp_unit(value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::NumericalFailure(format!("correlation {value}")));
    }
    if value.abs() <= 1.0 {
        Ok(value)
    } else if value.abs() <= 1.0 + CLAMP_BAND {
        Ok(value.signum())
    } else {
        Err(Error::NumericalFailure(format!(
            "correlation {value} overshoots the unit interval"
        )))
    }
}

/// An observable shifted to zero mean on a fixed state, as the Gram vector
/// `(X - <X>) B` with `rho = B B^dagger`, and its spread.
#[derive(Debug, Clone)]
pub(crate) struct Centered {
    gram: ComplexMatrix,
    sd: f64,
}

impl Centered {
    pub(crate) fn new(rho: &DensityMatrix, x: &HermitianOperator) -> Result<Self> {
        let gram = centered_factor(rho, x)?;
        let sd = gram.norm();
        if sd <= DEGENERACY_THRESHOLD {
            return Err(Error::DegenerateObservable { std_dev: sd });
        }
        Ok(Self { gram, sd })
    }

    /// `Tr(rho X~ Y~)` for the centered pair.
    fn moment(&self, other: &Self) -> Complex64 {
        frobenius_inner(&self.gram, &other.gram)
    }

    pub(crate) fn correlation(&self, other: &Self) -> Result<f64> {
        clamp_unit(self.moment(other).re / (self.sd * other.sd))
    }

    pub(crate) fn complex_correlation(&self, other: &Self) -> Result<ComplexCorrelation> {
        ComplexCorrelation::new(self.moment(other) / (self.sd * other.sd))
    }
}

/// Generalized correlation of two observables on `rho`.
pub fn generalized_correlation(
    rho: &DensityMatrix,
    x: &HermitianOperator,
    y: &HermitianOperator,
) -> Result<f64> {
    let cx = Centered::new(rho, x)?;
    let cy = Centered::new(rho, y)?;
    cx.correlation(&cy)
}

/// Complex correlation coefficient `(<X Y^dagger> - <X><Y>^*) / (dX dY)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexCorrelation {
    pub value: Complex64,
}

impl ComplexCorrelation {
    /// Accepts values with modulus up to `1 + CLAMP_BAND`, renormalizing the
    /// overshoot.
    pub fn new(value: Complex64) -> Result<Self> {
        let modulus = value.norm();
        if !modulus.is_finite() {
            return Err(Error::NumericalFailure(format!(
                "complex correlation {value}"
            )));
        }
        if modulus > 1.0 + CLAMP_BAND {
            return Err(Error::NumericalFailure(format!(
                "complex correlation modulus {modulus} exceeds one"
            )));
        }
        let value = if modulus > 1.0 {
            value / modulus
        } else {
            value
        };
        Ok(Self { value })
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn im(&self) -> f64 {
        self.value.im
    }

    pub fn conj(&self) -> Self {
        Self {
            value: self.value.conj(),
        }
    }
}

/// Complex correlation for Hermitian inputs; its real part is
/// [`generalized_correlation`].
pub fn complex_correlation(
    rho: &DensityMatrix,
    x: &HermitianOperator,
    y: &HermitianOperator,
) -> Result<ComplexCorrelation> {
    let cx = Centered::new(rho, x)?;
    let cy = Centered::new(rho, y)?;
    cx.complex_correlation(&cy)
}

/// Real symmetric matrix with unit diagonal and entries in `[-1, 1]`.
///
/// Positive semi-definiteness is a property checked with [`psd_check`], not
/// a construction invariant, so non-realizable patterns can be examined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    entries: DMatrix<f64>,
}

impl CorrelationMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let n = entries.nrows();
        if n != entries.ncols() || n == 0 {
            return Err(Error::NotSquare {
                rows: n,
                cols: entries.ncols(),
            });
        }
        for i in 0..n {
            if (entries[(i, i)] - 1.0).abs() > STRUCTURE_TOL {
                return Err(Error::OutOfRange {
                    name: "correlation matrix diagonal",
                    value: entries[(i, i)],
                });
            }
            for j in 0..n {
                let v = entries[(i, j)];
                if !v.is_finite() || v.abs() > 1.0 + STRUCTURE_TOL {
                    return Err(Error::OutOfRange {
                        name: "correlation matrix entry",
                        value: v,
                    });
                }
                if (v - entries[(j, i)]).abs() > STRUCTURE_TOL {
                    return Err(Error::NumericalFailure(
                        "correlation matrix is not symmetric".into(),
                    ));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: rows.first().map_or(0, |r| r.len()),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }
}

/// `[C(ops[i], ops[j])]` on `rho`.
pub fn build_correlation_matrix(
    rho: &DensityMatrix,
    ops: &[HermitianOperator],
) -> Result<CorrelationMatrix> {
    let centered = ops
        .iter()
        .map(|op| Centered::new(rho, op))
        .collect::<Result<Vec<_>>>()?;
    build_from_centered(&centered)
}

pub(crate) fn build_from_centered(centered: &[Centered]) -> Result<CorrelationMatrix> {
    let n = centered.len();
    let mut m = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = centered[i].correlation(&centered[j])?;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(CorrelationMatrix { entries: m })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsdCheck {
    pub min_eigenvalue: f64,
    pub is_psd: bool,
}

fn min_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    if m.nrows() == 0 {
        return Ok(f64::INFINITY);
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericalFailure("symmetric eigensolve did not converge".into()))?;
    Ok(eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min))
}

/// Smallest eigenvalue and whether it clears `-tol`.
pub fn psd_check(m: &CorrelationMatrix, tol: f64) -> Result<PsdCheck> {
    let min = min_eigenvalue(&m.entries)?;
    Ok(PsdCheck {
        min_eigenvalue: min,
        is_psd: min >= -tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchurCheck {
    /// Remaining block minus `v v^T`, `v` the pivot's off-diagonal column.
    pub residual: DMatrix<f64>,
    pub min_eigenvalue: f64,
    pub is_psd: bool,
}

/// Schur complement with respect to a unit diagonal pivot.
pub fn schur_complement_check(
    m: &CorrelationMatrix,
    pivot_index: usize,
    tol: f64,
) -> Result<SchurCheck> {
    let n = m.n();
    if pivot_index >= n {
        return Err(Error::OutOfRange {
            name: "pivot_index",
            value: pivot_index as f64,
        });
    }
    let rest: Vec<usize> = (0..n).filter(|&k| k != pivot_index).collect();
    let pivot = m.get(pivot_index, pivot_index);
    let residual = DMatrix::from_fn(rest.len(), rest.len(), |a, b| {
        let (i, j) = (rest[a], rest[b]);
        m.get(i, j) - m.get(i, pivot_index) * m.get(pivot_index, j) / pivot
    });
    let min = min_eigenvalue(&residual)?;
    Ok(SchurCheck {
        residual,
        min_eigenvalue: min,
        is_psd: min >= -tol,
    })
}
