//! Brute-force reference path for the six schedule correlations.
//!
//! Shares no arithmetic with the spectral evolution or the correlation
//! engine: propagators are products of `2^16` fourth-order Taylor steps,
//! matrices are flat row-major buffers, and moments use the raw
//! (uncentered) formula.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::inequality::LgiCorrelations;
use crate::operator::{DensityMatrix, Hamiltonian, HermitianOperator};

/// Propagation steps per evolution time.
pub const ORACLE_STEPS: usize = 1 << 16;

#[derive(Clone)]
struct Flat {
    n: usize,
    data: Vec<Complex64>,
}

impl Flat {
    fn from_op(m: &crate::operator::ComplexMatrix) -> Self {
        let n = m.nrows();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(m[(i, j)]);
            }
        }
        Self { n, data }
    }

    fn identity(n: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Self { n, data }
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Self { n, data }
    }

    fn mul_into(&self, other: &Self, out: &mut Self) {
        let n = self.n;
        out.data
            .iter_mut()
            .for_each(|z| *z = Complex64::new(0.0, 0.0));
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
    }

    fn add_scaled(&mut self, other: &Self, s: Complex64) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    fn dagger(&self) -> Self {
        let n = self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Self { n, data }
    }

    fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }
}

/// `U(t)` as `ORACLE_STEPS` sequential Taylor steps of size `t / N`.
fn propagator(h: &Flat, t: f64) -> Flat {
    let n = h.n;
    let dt = t / ORACLE_STEPS as f64;
    // A = -i H dt
    let mut a = h.clone();
    a.data
        .iter_mut()
        .for_each(|z| *z *= Complex64::new(0.0, -dt));
    let mut step = Flat::identity(n);
    let mut power = Flat::identity(n);
    for k in 1..=4 {
        power = power.mul(&a);
        let inv_fact = 1.0 / (1..=k).product::<usize>() as f64;
        step.add_scaled(&power, Complex64::new(inv_fact, 0.0));
    }
    let mut u = Flat::identity(n);
    let mut scratch = Flat::identity(n);
    for _ in 0..ORACLE_STEPS {
        step.mul_into(&u, &mut scratch);
        std::mem::swap(&mut u, &mut scratch);
    }
    u
}

fn evolve(q: &Flat, h: &Flat, t: f64) -> Flat {
    if t == 0.0 {
        return q.clone();
    }
    let u = propagator(h, t);
    u.dagger().mul(q).mul(&u)
}

struct Moments {
    mean: f64,
    second: f64,
}

fn expect(rho: &Flat, x: &Flat) -> f64 {
    rho.mul(x).trace().re
}

fn moments(rho: &Flat, x: &Flat) -> Moments {
    Moments {
        mean: expect(rho, x),
        second: expect(rho, &x.mul(x)),
    }
}

fn correlation(rho: &Flat, x: &Flat, y: &Flat) -> Result<f64> {
    let mx = moments(rho, x);
    let my = moments(rho, y);
    let var_x = mx.second - mx.mean * mx.mean;
    let var_y = my.second - my.mean * my.mean;
    for var in [var_x, var_y] {
        if var <= 1e-24 {
            return Err(Error::DegenerateObservable {
                std_dev: var.max(0.0).sqrt(),
            });
        }
    }
    let anti = 0.5 * (expect(rho, &x.mul(y)) + expect(rho, &y.mul(x)));
    Ok((anti - mx.mean * my.mean) / (var_x * var_y).sqrt())
}

/// Raw moment formula for one pair, without evolution.
pub fn oracle_correlation(
    rho: &DensityMatrix,
    x: &HermitianOperator,
    y: &HermitianOperator,
) -> Result<f64> {
    let n = rho.dim();
    for d in [x.dim(), y.dim()] {
        if d != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: d,
            });
        }
    }
    correlation(
        &Flat::from_op(rho.matrix()),
        &Flat::from_op(x.matrix()),
        &Flat::from_op(y.matrix()),
    )
}

/// The six correlations of `Q` at `times` by step-wise propagation.
pub fn brute_force_oracle(
    rho: &DensityMatrix,
    q: &HermitianOperator,
    h: &Hamiltonian,
    times: [f64; 4],
) -> Result<LgiCorrelations> {
    let n = rho.dim();
    for d in [q.dim(), h.dim()] {
        if d != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: d,
            });
        }
    }
    let rho = Flat::from_op(rho.matrix());
    let q = Flat::from_op(q.matrix());
    let h = Flat::from_op(h.operator().matrix());
    let ops: Vec<Flat> = times.iter().map(|&t| evolve(&q, &h, t)).collect();
    if ops.iter().any(|o| {
        o.data
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
    }) {
        return Err(Error::NumericalFailure(
            "oracle propagation diverged".into(),
        ));
    }
    let c = |i: usize, j: usize| correlation(&rho, &ops[i], &ops[j]);
    Ok(LgiCorrelations {
        c12: c(0, 1)?,
        c23: c(1, 2)?,
        c34: c(2, 3)?,
        c14: c(0, 3)?,
        c13: c(0, 2)?,
        c24: c(1, 3)?,
    })
}
