use lgbounds_core::search::{random_instance, ObservableKind, RandomInstanceConfig, StateKind};
use lgbounds_core::{
    build_correlation_matrix, complex_correlation, generalized_correlation, psd_check,
    schur_complement_check, CorrelationMatrix, DensityMatrix, HermitianOperator, Propagator,
};
use proptest::prelude::*;

/// State plus the observable's Heisenberg images at `times`.
fn evolved(
    dim: usize,
    seed: u64,
    mixed: bool,
    times: &[f64],
) -> (DensityMatrix, Vec<HermitianOperator>) {
    let mut cfg = RandomInstanceConfig::new(dim, seed);
    cfg.observable_kind = ObservableKind::General;
    if mixed {
        cfg.state_kind = StateKind::MixedRank(dim);
    }
    let inst = random_instance(&cfg, 0).unwrap();
    let p = Propagator::new(&inst.hamiltonian).unwrap();
    let ops = times
        .iter()
        .map(|&t| p.evolve(&inst.observable, t).unwrap())
        .collect();
    (inst.state, ops)
}

fn times() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-5.0f64..5.0, 2..=5)
}

proptest! {
    #[test]
    fn correlation_in_unit_interval_and_symmetric(
        dim in 2usize..=5, seed: u64, mixed: bool, t in times()
    ) {
        let (rho, ops) = evolved(dim, seed, mixed, &t);
        let xy = generalized_correlation(&rho, &ops[0], &ops[1]).unwrap();
        let yx = generalized_correlation(&rho, &ops[1], &ops[0]).unwrap();
        prop_assert!(xy.abs() <= 1.0);
        prop_assert_eq!(xy, yx);
    }

    #[test]
    fn self_correlation_is_one(dim in 2usize..=5, seed: u64, mixed: bool) {
        let (rho, ops) = evolved(dim, seed, mixed, &[0.0]);
        let c = generalized_correlation(&rho, &ops[0], &ops[0]).unwrap();
        prop_assert!((c - 1.0).abs() < 1e-12, "{c}");
    }

    #[test]
    fn affine_invariance(
        dim in 2usize..=4, seed: u64, a in 0.1f64..10.0, neg: bool, b in -5.0f64..5.0,
        t in times()
    ) {
        let (rho, ops) = evolved(dim, seed, false, &t);
        let a = if neg { -a } else { a };
        let base = generalized_correlation(&rho, &ops[0], &ops[1]).unwrap();
        let moved = generalized_correlation(&rho, &ops[0].affine(a, b), &ops[1]).unwrap();
        prop_assert!((moved - a.signum() * base).abs() < 1e-9, "{moved} vs {base}");
    }

    #[test]
    fn complex_correlation_extends_the_real_one(
        dim in 2usize..=5, seed: u64, mixed: bool, t in times()
    ) {
        let (rho, ops) = evolved(dim, seed, mixed, &t);
        let z = complex_correlation(&rho, &ops[0], &ops[1]).unwrap();
        let w = complex_correlation(&rho, &ops[1], &ops[0]).unwrap();
        let c = generalized_correlation(&rho, &ops[0], &ops[1]).unwrap();
        prop_assert!((z.re() - c).abs() < 1e-10);
        prop_assert!((z.conj().value - w.value).norm() < 1e-10);
        prop_assert!(z.value.norm() <= 1.0);
    }

    #[test]
    fn correlation_matrices_are_psd(
        dim in 2usize..=6, seed: u64, mixed: bool, t in times()
    ) {
        let (rho, ops) = evolved(dim, seed, mixed, &t);
        let m = build_correlation_matrix(&rho, &ops).unwrap();
        let psd = psd_check(&m, 1e-9).unwrap();
        prop_assert!(psd.is_psd, "{}", psd.min_eigenvalue);
        for k in 0..m.n() {
            prop_assert_eq!(m.get(k, k), 1.0);
        }
    }

    #[test]
    fn schur_complement_of_psd_is_psd(
        dim in 2usize..=5, seed: u64, t in proptest::collection::vec(-5.0f64..5.0, 3..=5),
        pivot in 0usize..3
    ) {
        let (rho, ops) = evolved(dim, seed, true, &t);
        let m = build_correlation_matrix(&rho, &ops).unwrap();
        let s = schur_complement_check(&m, pivot, 1e-9).unwrap();
        prop_assert!(s.is_psd, "{}", s.min_eigenvalue);
        prop_assert_eq!(s.residual.nrows(), m.n() - 1);
    }
}

#[test]
fn schur_complement_exposes_non_psd_input() {
    let m = CorrelationMatrix::from_rows(&[&[1.0, 0.9, -0.9], &[0.9, 1.0, 0.9], &[-0.9, 0.9, 1.0]])
        .unwrap();
    assert!(!psd_check(&m, 1e-9).unwrap().is_psd);
    assert!(!schur_complement_check(&m, 0, 1e-9).unwrap().is_psd);
}
