use lgbounds_core::operator::{sigma_x, sigma_z};
use lgbounds_core::search::{random_instance, ObservableKind, RandomInstanceConfig, StateKind};
use lgbounds_core::{
    evolve, expectation, hermitian_eigendecomposition, make_hermitian, make_state, ComplexMatrix,
    Hamiltonian, Propagator,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn config(dim: usize, seed: u64, general: bool, rank: Option<usize>) -> RandomInstanceConfig {
    let mut cfg = RandomInstanceConfig::new(dim, seed);
    if general {
        cfg.observable_kind = ObservableKind::General;
    }
    if let Some(k) = rank {
        cfg.state_kind = StateKind::MixedRank(k.min(dim));
    }
    cfg
}

fn operator_norm_bound(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

proptest! {
    #[test]
    fn expectation_is_bounded_by_spectrum(
        dim in 2usize..=5, seed: u64, general: bool, rank in proptest::option::of(1usize..=5)
    ) {
        let inst = random_instance(&config(dim, seed, general, rank), 0).unwrap();
        let eig = hermitian_eigendecomposition(&inst.observable).unwrap();
        let e = expectation(&inst.state, &inst.observable).unwrap();
        let lo = eig.values[0];
        let hi = *eig.values.last().unwrap();
        prop_assert!(e >= lo - 1e-10 && e <= hi + 1e-10, "{e} not in [{lo}, {hi}]");
    }

    #[test]
    fn evolution_preserves_spectrum(dim in 2usize..=5, seed: u64, t in -10.0f64..10.0) {
        let inst = random_instance(&config(dim, seed, true, None), 0).unwrap();
        let qt = evolve(&inst.observable, &inst.hamiltonian, t).unwrap();
        let before = hermitian_eigendecomposition(&inst.observable).unwrap().values;
        let after = hermitian_eigendecomposition(&qt).unwrap().values;
        for (a, b) in before.iter().zip(&after) {
            prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn evolution_composes(dim in 2usize..=4, seed: u64, s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let inst = random_instance(&config(dim, seed, true, None), 0).unwrap();
        let p = Propagator::new(&inst.hamiltonian).unwrap();
        let two_step = p.evolve(&p.evolve(&inst.observable, s).unwrap(), t).unwrap();
        let one_step = p.evolve(&inst.observable, s + t).unwrap();
        let diff = operator_norm_bound(&(two_step.matrix() - one_step.matrix()));
        prop_assert!(diff < 1e-9, "{diff}");
    }

    #[test]
    fn eigendecomposition_reconstructs(dim in 2usize..=8, seed: u64) {
        let inst = random_instance(&config(dim, seed, true, None), 0).unwrap();
        let h = inst.hamiltonian.operator();
        let eig = hermitian_eigendecomposition(h).unwrap();
        let rebuilt = eig.apply(|l| Complex64::new(l, 0.0));
        let residual = operator_norm_bound(&(rebuilt - h.matrix()));
        prop_assert!(residual < 1e-9, "{residual}");
        let gram = eig.vectors.adjoint() * &eig.vectors;
        let unitarity = operator_norm_bound(&(gram - ComplexMatrix::identity(dim, dim)));
        prop_assert!(unitarity < 1e-10, "{unitarity}");
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn instances_pass_validation(dim in 2usize..=6, seed: u64, index in 0u64..1000, general: bool) {
        let inst = random_instance(&config(dim, seed, general, None), index).unwrap();
        prop_assert!(make_state(inst.state.matrix().clone()).is_ok());
        prop_assert!(make_hermitian(inst.observable.matrix().clone()).is_ok());
        prop_assert!(make_hermitian(inst.hamiltonian.operator().matrix().clone()).is_ok());
    }
}

#[test]
fn spin_evolution_rotates_about_x() {
    let h = Hamiltonian::new(sigma_x().affine(0.5, 0.0));
    let t = 0.37;
    let qt = evolve(&sigma_z(), &h, t).unwrap();
    let m = qt.matrix();
    assert!((m[(0, 0)].re - t.cos()).abs() < 1e-12);
    assert!((m[(0, 1)].im + t.sin()).abs() < 1e-12);
}

#[test]
fn thousand_dim4_draws_validate() {
    let cfg = RandomInstanceConfig::new(4, 2024);
    for i in 0..1000 {
        let inst = random_instance(&cfg, i).unwrap();
        make_state(inst.state.matrix().clone()).unwrap();
        make_hermitian(inst.observable.matrix().clone()).unwrap();
        make_hermitian(inst.hamiltonian.operator().matrix().clone()).unwrap();
    }
}
