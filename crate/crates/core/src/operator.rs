//! Dense complex-matrix layer: observables, states, moments and
//! Heisenberg-picture evolution.
//!
//! Conventions: `hbar = 1`, so a Hamiltonian `H` generates `U(t) = exp(-iHt)`
//! and an observable evolves as `Q(t) = U(t)^dagger Q U(t)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square complex matrix carrying every operator in the crate.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Relative Hermiticity tolerance: `max|M - M^dagger| <= tol * max|M_ij|`.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Allowed deviation of a state's trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue a density matrix may carry.
pub const PSD_FLOOR: f64 = -1e-10;
/// Imaginary residue of `Tr(rho X)` silently discarded.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

const EIGEN_MAX_ITER: usize = 10_000;

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check_square_finite(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::NotSquare { rows: 0, cols: 0 });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// Largest entrywise `|M - M^dagger|`.
fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn max_entry(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// `(M + M^dagger) / 2`, exactly Hermitian in floating point.
fn symmetrize(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.nrows();
    ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let deviation = hermitian_deviation(m);
    if deviation > HERMITICITY_TOL * max_entry(m) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// `Tr(A B)` without forming the product.
pub(crate) fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = c(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A validated observable.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    /// Validates `m` and stores its exactly-Hermitian part.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_square_finite(&m)?;
        check_hermitian(&m)?;
        Ok(Self(symmetrize(&m)))
    }

    /// Builds from a real symmetric matrix given row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: rows.first().map_or(0, |r| r.len()),
            });
        }
        Self::new(ComplexMatrix::from_fn(n, n, |i, j| c(rows[i][j], 0.0)))
    }

    pub(crate) fn from_matrix_symmetrized(m: &ComplexMatrix) -> Self {
        Self(symmetrize(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim, dim))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// `a * self + b * I`.
    pub fn affine(&self, a: f64, b: f64) -> Self {
        let n = self.dim();
        let mut m = self.0.map(|z| z * a);
        for i in 0..n {
            m[(i, i)] += c(b, 0.0);
        }
        Self(m)
    }

    pub fn squared(&self) -> Self {
        Self::from_matrix_symmetrized(&(&self.0 * &self.0))
    }
}

/// Validating constructor for observables.
pub fn make_hermitian(m: ComplexMatrix) -> Result<HermitianOperator> {
    HermitianOperator::new(m)
}

/// A validated quantum state: Hermitian, unit trace, positive semi-definite.
///
/// Keeps a factor `B` with `rho = B B^dagger` (one column per positive
/// eigenvalue), so second moments can be taken as Gram products of
/// `X B`, which never go negative and obey Cauchy-Schwarz to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    factor: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_square_finite(&m)?;
        if hermitian_deviation(&m) > HERMITICITY_TOL * max_entry(&m) {
            return Err(Error::NotDensityMatrix("not Hermitian".into()));
        }
        let m = symmetrize(&m);
        let trace = m.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::NotDensityMatrix(format!("trace {trace} != 1")));
        }
        let eig = eigen_of(&m)?;
        let min = eig.values.first().copied().unwrap_or(0.0);
        if min < PSD_FLOOR {
            return Err(Error::NotDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        let keep: Vec<usize> = (0..eig.values.len())
            .filter(|&k| eig.values[k] > 0.0)
            .collect();
        let n = m.nrows();
        let factor = ComplexMatrix::from_fn(n, keep.len(), |i, col| {
            let k = keep[col];
            eig.vectors[(i, k)] * eig.values[k].sqrt()
        });
        Ok(Self { matrix: m, factor })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `B` with `rho = B B^dagger`.
    pub fn factor(&self) -> &ComplexMatrix {
        &self.factor
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Validating constructor for states.
pub fn make_state(m: ComplexMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(m)
}

/// `|v><v| / <v|v>`.
pub fn pure_state(v: &[Complex64]) -> Result<DensityMatrix> {
    let v = DVector::from_column_slice(v);
    let norm_sq = v.norm_squared();
    if v.is_empty() || norm_sq == 0.0 || !norm_sq.is_finite() {
        return Err(Error::ZeroVector);
    }
    let m = (&v * v.adjoint()).map(|z| z / norm_sq);
    DensityMatrix::new(m)
}

/// `I / dim`. Panics if `dim == 0`.
pub fn maximally_mixed(dim: usize) -> DensityMatrix {
    assert!(dim >= 1, "state dimension must be positive");
    let p = 1.0 / dim as f64;
    DensityMatrix {
        matrix: ComplexMatrix::from_diagonal_element(dim, dim, c(p, 0.0)),
        factor: ComplexMatrix::from_diagonal_element(dim, dim, c(p.sqrt(), 0.0)),
    }
}

/// Generator of the dynamics, in units with `hbar = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian(HermitianOperator);

impl Hamiltonian {
    pub fn new(operator: HermitianOperator) -> Self {
        Self(operator)
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

/// `Tr(rho X)` as a real number.
pub fn expectation(rho: &DensityMatrix, x: &HermitianOperator) -> Result<f64> {
    check_dims(rho.dim(), x.dim())?;
    let z = trace_product(rho.matrix(), x.matrix());
    let scale = max_entry(x.matrix()).max(1.0);
    if z.im.abs() > IMAG_RESIDUE_TOL * scale {
        return Err(Error::NumericalFailure(format!(
            "expectation has imaginary part {:e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// `<{X, Y}> / 2`. Symmetric in `X`, `Y` bit for bit.
pub fn symmetrized_product_expectation(
    rho: &DensityMatrix,
    x: &HermitianOperator,
    y: &HermitianOperator,
) -> Result<f64> {
    check_dims(rho.dim(), x.dim())?;
    check_dims(rho.dim(), y.dim())?;
    let xy = x.matrix() * y.matrix();
    let yx = y.matrix() * x.matrix();
    let a = trace_product(rho.matrix(), &xy).re;
    let b = trace_product(rho.matrix(), &yx).re;
    Ok(0.5 * (a + b))
}

/// `(X - <X>) B` for the state factor `B`; its squared Frobenius norm is
/// the variance.
pub(crate) fn centered_factor(rho: &DensityMatrix, x: &HermitianOperator) -> Result<ComplexMatrix> {
    let mean = expectation(rho, x)?;
    Ok(x.affine(1.0, -mean).matrix() * rho.factor())
}

/// `Tr(A^dagger B)`.
pub(crate) fn frobenius_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(p, q)| p.conj() * q).sum()
}

/// `sqrt(<X^2> - <X>^2)`, taken as `||(X - <X>) B||` with `rho = B B^dagger`.
pub fn std_dev(rho: &DensityMatrix, x: &HermitianOperator) -> Result<f64> {
    check_dims(rho.dim(), x.dim())?;
    Ok(centered_factor(rho, x)?.norm())
}

/// Spectrum and orthonormal eigenbasis of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

impl Eigen {
    /// `V diag(f(lambda)) V^dagger`.
    pub fn apply(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            for i in 0..n {
                scaled[(i, k)] *= w;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

fn eigen_of(m: &ComplexMatrix) -> Result<Eigen> {
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or_else(|| Error::NumericalFailure("eigendecomposition did not converge".into()))?;
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    Ok(Eigen { values, vectors })
}

pub fn hermitian_eigendecomposition(x: &HermitianOperator) -> Result<Eigen> {
    eigen_of(x.matrix())
}

/// Cached spectral decomposition of a Hamiltonian, reused across many
/// evolution times.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigen: Eigen,
}

impl Propagator {
    pub fn new(h: &Hamiltonian) -> Result<Self> {
        Ok(Self {
            eigen: hermitian_eigendecomposition(h.operator())?,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigen.values.len()
    }

    /// `exp(-iHt)`.
    pub fn unitary(&self, t: f64) -> ComplexMatrix {
        self.eigen.apply(|e| Complex64::from_polar(1.0, -e * t))
    }

    /// `U^dagger Q U`; `t == 0` returns `Q` unchanged.
    pub fn evolve(&self, q: &HermitianOperator, t: f64) -> Result<HermitianOperator> {
        check_dims(self.dim(), q.dim())?;
        if t == 0.0 {
            return Ok(q.clone());
        }
        let u = self.unitary(t);
        let qt = u.adjoint() * q.matrix() * &u;
        Ok(HermitianOperator::from_matrix_symmetrized(&qt))
    }
}

/// Heisenberg-picture evolution `Q(t) = exp(iHt) Q exp(-iHt)`.
pub fn evolve(q: &HermitianOperator, h: &Hamiltonian, t: f64) -> Result<HermitianOperator> {
    check_dims(h.dim(), q.dim())?;
    if t == 0.0 {
        return Ok(q.clone());
    }
    Propagator::new(h)?.evolve(q, t)
}

/// Tensor factor an operator occupies on a bipartite space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    First,
    Second,
}

/// `op ⊗ I` or `I ⊗ op`.
pub fn tensor_lift(op: &HermitianOperator, slot: Slot, other_dim: usize) -> HermitianOperator {
    let id = ComplexMatrix::identity(other_dim, other_dim);
    let m = match slot {
        Slot::First => op.matrix().kronecker(&id),
        Slot::Second => id.kronecker(op.matrix()),
    };
    HermitianOperator(m)
}

pub fn sigma_x() -> HermitianOperator {
    HermitianOperator(ComplexMatrix::from_row_slice(
        2,
        2,
        &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
    ))
}

pub fn sigma_y() -> HermitianOperator {
    HermitianOperator(ComplexMatrix::from_row_slice(
        2,
        2,
        &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
    ))
}

pub fn sigma_z() -> HermitianOperator {
    HermitianOperator(ComplexMatrix::from_row_slice(
        2,
        2,
        &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        (a - b).iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    fn spin_h(omega: f64) -> Hamiltonian {
        Hamiltonian::new(sigma_x().affine(omega / 2.0, 0.0))
    }

    #[test]
    fn accepts_pauli_observables() {
        let z = ComplexMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        assert_eq!(make_hermitian(z).unwrap(), sigma_z());
        let x = ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        assert_eq!(make_hermitian(x).unwrap(), sigma_x());
    }

    #[test]
    fn rejects_anti_hermitian() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., 1.), c(0., 1.), c(0., 0.)]);
        assert!(matches!(make_hermitian(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rejects_rectangular_and_nonfinite() {
        assert!(matches!(
            make_hermitian(ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        let mut m = ComplexMatrix::identity(2, 2);
        m[(0, 0)] = c(f64::NAN, 0.0);
        assert_eq!(make_hermitian(m), Err(Error::NonFinite));
    }

    #[test]
    fn state_validation() {
        let half = ComplexMatrix::identity(2, 2).map(|z| z * 0.5);
        assert!(make_state(half).is_ok());
        let pure0 = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![c(1., 0.), c(0., 0.)]));
        assert!(make_state(pure0).is_ok());
        let trace2 = ComplexMatrix::identity(2, 2);
        assert!(matches!(
            make_state(trace2),
            Err(Error::NotDensityMatrix(_))
        ));
        let negative =
            ComplexMatrix::from_diagonal(&DVector::from_vec(vec![c(1.5, 0.), c(-0.5, 0.)]));
        assert!(matches!(
            make_state(negative),
            Err(Error::NotDensityMatrix(_))
        ));
        let skew =
            ComplexMatrix::from_row_slice(2, 2, &[c(0.5, 0.), c(0.3, 0.), c(-0.3, 0.), c(0.5, 0.)]);
        assert!(matches!(make_state(skew), Err(Error::NotDensityMatrix(_))));
    }

    #[test]
    fn pure_state_projectors() {
        let p = pure_state(&[c(1., 0.), c(0., 0.)]).unwrap();
        assert_eq!(p.matrix()[(0, 0)], c(1., 0.));
        assert_eq!(p.matrix()[(1, 1)], c(0., 0.));

        let p = pure_state(&[c(1., 0.), c(1., 0.)]).unwrap();
        assert!(p.matrix().iter().all(|z| (z - c(0.5, 0.)).norm() < 1e-15));

        let p = pure_state(&[c(FRAC_1_SQRT_2, 0.), c(0., FRAC_1_SQRT_2)]).unwrap();
        let expected =
            ComplexMatrix::from_row_slice(2, 2, &[c(0.5, 0.), c(0., -0.5), c(0., 0.5), c(0.5, 0.)]);
        assert!(max_diff(p.matrix(), &expected) < 1e-15);

        assert_eq!(pure_state(&[c(0., 0.), c(0., 0.)]), Err(Error::ZeroVector));
    }

    #[test]
    fn maximally_mixed_diagonals() {
        for dim in 1..=3 {
            let rho = maximally_mixed(dim);
            for i in 0..dim {
                assert_eq!(rho.matrix()[(i, i)], c(1.0 / dim as f64, 0.0));
            }
        }
    }

    #[test]
    fn moments() {
        let mixed = maximally_mixed(2);
        let up = pure_state(&[c(1., 0.), c(0., 0.)]).unwrap();
        assert_eq!(expectation(&mixed, &sigma_z()).unwrap(), 0.0);
        assert_eq!(expectation(&up, &sigma_z()).unwrap(), 1.0);
        assert_eq!(expectation(&mixed, &sigma_z().squared()).unwrap(), 1.0);

        assert_eq!(
            symmetrized_product_expectation(&mixed, &sigma_z(), &sigma_x()).unwrap(),
            0.0
        );
        assert_eq!(
            symmetrized_product_expectation(&mixed, &sigma_z(), &sigma_z()).unwrap(),
            1.0
        );
        let qt = evolve(&sigma_z(), &spin_h(1.0), FRAC_PI_4).unwrap();
        let s = symmetrized_product_expectation(&mixed, &sigma_z(), &qt).unwrap();
        assert!((s - FRAC_PI_4.cos()).abs() < 1e-12);

        assert_eq!(std_dev(&mixed, &sigma_z()).unwrap(), 1.0);
        assert_eq!(std_dev(&up, &sigma_z()).unwrap(), 0.0);
        let q3 = HermitianOperator::from_real_rows(&[&[1., 0., 0.], &[0., 0., 0.], &[0., 0., -1.]])
            .unwrap();
        let sd = std_dev(&maximally_mixed(3), &q3).unwrap();
        assert!((sd - (2.0_f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let rho = maximally_mixed(3);
        assert_eq!(
            expectation(&rho, &sigma_z()),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        );
        assert!(evolve(
            &sigma_z(),
            &Hamiltonian::new(HermitianOperator::identity(3)),
            1.0
        )
        .is_err());
    }

    #[test]
    fn spin_evolution_matches_closed_form() {
        let h = spin_h(1.0);
        let qt = evolve(&sigma_z(), &h, FRAC_PI_2).unwrap();
        assert!(max_diff(qt.matrix(), sigma_y().matrix()) < 1e-12);

        assert_eq!(evolve(&sigma_z(), &h, 0.0).unwrap(), sigma_z());

        let full = evolve(&sigma_z(), &h, 2.0 * PI).unwrap();
        assert!(max_diff(full.matrix(), sigma_z().matrix()) < 1e-12);

        for &t in &[0.3, 1.1, 2.7] {
            let qt = evolve(&sigma_z(), &h, t).unwrap();
            let expected = ComplexMatrix::from_row_slice(
                2,
                2,
                &[
                    c(t.cos(), 0.),
                    c(0., -t.sin()),
                    c(0., t.sin()),
                    c(-t.cos(), 0.),
                ],
            );
            assert!(max_diff(qt.matrix(), &expected) < 1e-12);
        }
    }

    #[test]
    fn tensor_lift_layout() {
        let a = tensor_lift(&sigma_z(), Slot::First, 2);
        let b = tensor_lift(&sigma_z(), Slot::Second, 2);
        let diag_a: Vec<f64> = (0..4).map(|i| a.matrix()[(i, i)].re).collect();
        let diag_b: Vec<f64> = (0..4).map(|i| b.matrix()[(i, i)].re).collect();
        assert_eq!(diag_a, vec![1., 1., -1., -1.]);
        assert_eq!(diag_b, vec![1., -1., 1., -1.]);
        let x = tensor_lift(&sigma_x(), Slot::First, 2);
        assert_eq!(x.matrix() * b.matrix(), b.matrix() * x.matrix());
    }

    #[test]
    fn pauli_spectra() {
        let e = hermitian_eigendecomposition(&sigma_z()).unwrap();
        assert_eq!(e.values, vec![-1.0, 1.0]);
        let e = hermitian_eigendecomposition(&sigma_x()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
        let v_plus = e.vectors.column(1);
        assert!((v_plus[0].norm() - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(((v_plus[0] - v_plus[1]).norm()) < 1e-12);
        let v_minus = e.vectors.column(0);
        assert!(((v_minus[0] + v_minus[1]).norm()) < 1e-12);
    }
}
