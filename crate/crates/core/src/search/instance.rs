//! Seeded random instances.
//!
//! Every instance is a pure function of `(seed, index)`: each index gets its
//! own ChaCha20 stream, so serial and parallel runs draw identical instances.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{ComplexMatrix, DensityMatrix, Hamiltonian, HermitianOperator};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableKind {
    /// Spectrum in `{-1, +1}`: balanced at even dimension, one extra `+1`
    /// at odd dimension.
    Dichotomic,
    /// Gaussian-unitary-ensemble draw.
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    HaarPure,
    /// `G G^dagger / Tr` with `G` a `dim x k` Gaussian matrix.
    MixedRank(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RandomInstanceConfig {
    pub dim: usize,
    pub seed: u64,
    pub observable_kind: ObservableKind,
    pub state_kind: StateKind,
    /// Real states, real symmetric observables and purely imaginary
    /// Hamiltonians, so every complex correlation is real.
    pub real_valued: bool,
}

impl RandomInstanceConfig {
    pub fn new(dim: usize, seed: u64) -> Self {
        Self {
            dim,
            seed,
            observable_kind: ObservableKind::Dichotomic,
            state_kind: StateKind::HaarPure,
            real_valued: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_DIM..=MAX_DIM).contains(&self.dim) {
            return Err(Error::InvalidConfig(format!(
                "dim {} outside [{MIN_DIM}, {MAX_DIM}]",
                self.dim
            )));
        }
        if let StateKind::MixedRank(k) = self.state_kind {
            if k == 0 || k > self.dim {
                return Err(Error::InvalidConfig(format!(
                    "mixed-state rank {k} outside [1, {}]",
                    self.dim
                )));
            }
        }
        Ok(())
    }

    /// Local dimensions `(d_a, d_b)`, both at least 2, with the smallest
    /// admissible `d_a`; `None` for prime `dim`.
    pub fn bipartite_split(&self) -> Option<(usize, usize)> {
        (2..self.dim)
            .find(|d| self.dim.is_multiple_of(*d) && self.dim / d >= 2)
            .map(|d| (d, self.dim / d))
    }
}

/// Half-open time window for random schedules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeRange {
    pub lo: f64,
    pub hi: f64,
}

impl TimeRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidConfig(format!(
                "invalid time range [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub state: DensityMatrix,
    pub hamiltonian: Hamiltonian,
    pub observable: HermitianOperator,
}

#[derive(Debug, Clone)]
pub struct BipartiteInstance {
    pub state: DensityMatrix,
    pub alice: HermitianOperator,
    pub alice_hamiltonian: Hamiltonian,
    pub bob: HermitianOperator,
    pub bob_hamiltonian: Hamiltonian,
}

/// Stream families, so instance, time and bipartite draws never overlap.
#[derive(Clone, Copy)]
enum Purpose {
    Instance = 1,
    Times = 2,
    Bipartite = 3,
}

fn stream(seed: u64, index: u64, purpose: Purpose) -> ChaCha20Rng {
    let salt = (purpose as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ salt);
    rng.set_stream(index);
    rng
}

struct Sampler<'a> {
    rng: &'a mut ChaCha20Rng,
    real: bool,
}

impl Sampler<'_> {
    fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    fn entry(&mut self) -> Complex64 {
        if self.real {
            Complex64::new(self.normal(), 0.0)
        } else {
            Complex64::new(self.normal(), self.normal()) * std::f64::consts::FRAC_1_SQRT_2
        }
    }

    fn ginibre(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.entry())
    }

    fn state(&mut self, dim: usize, kind: StateKind) -> Result<DensityMatrix> {
        let rank = match kind {
            StateKind::HaarPure => 1,
            StateKind::MixedRank(k) => k,
        };
        let g = self.ginibre(dim, rank);
        let m = &g * g.adjoint();
        let trace = m.trace().re;
        DensityMatrix::new(m.map(|z| z / trace))
    }

    /// Haar unitary (orthogonal when real) from the phase-fixed QR of a
    /// Gaussian matrix.
    fn haar_unitary(&mut self, dim: usize) -> ComplexMatrix {
        let qr = self.ginibre(dim, dim).qr();
        let mut q = qr.q();
        let r = qr.r();
        for k in 0..dim {
            let d = r[(k, k)];
            let phase = if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            for i in 0..dim {
                q[(i, k)] *= phase;
            }
        }
        q
    }

    /// GUE draw; GOE when real.
    fn gaussian_hermitian(&mut self, dim: usize) -> HermitianOperator {
        let a = self.ginibre(dim, dim);
        HermitianOperator::from_matrix_symmetrized(&a)
    }

    fn observable(&mut self, dim: usize, kind: ObservableKind) -> HermitianOperator {
        match kind {
            ObservableKind::General => self.gaussian_hermitian(dim),
            ObservableKind::Dichotomic => {
                let v = self.haar_unitary(dim);
                let signs = DMatrix::from_fn(dim, dim, |i, j| {
                    let s = if i < dim / 2 { -1.0 } else { 1.0 };
                    Complex64::new(if i == j { s } else { 0.0 }, 0.0)
                });
                HermitianOperator::from_matrix_symmetrized(&(&v * signs * v.adjoint()))
            }
        }
    }

    /// Real mode uses `i A` with `A` real antisymmetric, whose propagator is
    /// real orthogonal.
    fn hamiltonian(&mut self, dim: usize) -> Hamiltonian {
        if self.real {
            let g = DMatrix::from_fn(dim, dim, |_, _| self.normal());
            let m = ComplexMatrix::from_fn(dim, dim, |i, j| {
                Complex64::new(0.0, 0.5 * (g[(i, j)] - g[(j, i)]))
            });
            Hamiltonian::new(HermitianOperator::from_matrix_symmetrized(&m))
        } else {
            Hamiltonian::new(self.gaussian_hermitian(dim))
        }
    }
}

/// Deterministic `(state, Hamiltonian, observable)` for `(cfg.seed, index)`.
pub fn random_instance(cfg: &RandomInstanceConfig, index: u64) -> Result<Instance> {
    cfg.validate()?;
    let mut rng = stream(cfg.seed, index, Purpose::Instance);
    let mut s = Sampler {
        rng: &mut rng,
        real: cfg.real_valued,
    };
    let state = s.state(cfg.dim, cfg.state_kind)?;
    let hamiltonian = s.hamiltonian(cfg.dim);
    let observable = s.observable(cfg.dim, cfg.observable_kind);
    Ok(Instance {
        state,
        hamiltonian,
        observable,
    })
}

/// Four sorted times drawn uniformly from `range`.
pub fn random_times(seed: u64, index: u64, range: TimeRange) -> [f64; 4] {
    let mut rng = stream(seed, index, Purpose::Times);
    let mut t = [0.0; 4];
    for slot in &mut t {
        *slot = rng.random_range(range.lo..range.hi);
    }
    t.sort_by(f64::total_cmp);
    t
}

/// Shared state on `d_a * d_b` with local observables and local dynamics.
pub fn random_bipartite_instance(
    cfg: &RandomInstanceConfig,
    index: u64,
) -> Result<Option<BipartiteInstance>> {
    cfg.validate()?;
    let Some((da, db)) = cfg.bipartite_split() else {
        return Ok(None);
    };
    let mut rng = stream(cfg.seed, index, Purpose::Bipartite);
    let mut s = Sampler {
        rng: &mut rng,
        real: cfg.real_valued,
    };
    let state = s.state(cfg.dim, cfg.state_kind)?;
    let alice = s.observable(da, cfg.observable_kind);
    let alice_hamiltonian = s.hamiltonian(da);
    let bob = s.observable(db, cfg.observable_kind);
    let bob_hamiltonian = s.hamiltonian(db);
    Ok(Some(BipartiteInstance {
        state,
        alice,
        alice_hamiltonian,
        bob,
        bob_hamiltonian,
    }))
}
