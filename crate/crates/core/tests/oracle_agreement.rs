use lgbounds_core::search::{
    brute_force_oracle, oracle_correlation, random_instance, random_times, ObservableKind,
    RandomInstanceConfig, StateKind, TimeRange,
};
use lgbounds_core::{evaluate_schedule, generalized_correlation};
use std::f64::consts::TAU;

#[test]
fn dim3_instances_match_main_path() {
    let mut cfg = RandomInstanceConfig::new(3, 5);
    cfg.observable_kind = ObservableKind::General;
    cfg.state_kind = StateKind::MixedRank(2);
    let range = TimeRange::new(0.0, TAU).unwrap();
    for i in 0..20 {
        let inst = random_instance(&cfg, i).unwrap();
        let t = random_times(cfg.seed, i, range);
        let main = evaluate_schedule(&inst.state, &inst.observable, &inst.hamiltonian, t)
            .unwrap()
            .correlations;
        let oracle =
            brute_force_oracle(&inst.state, &inst.observable, &inst.hamiltonian, t).unwrap();
        for (a, b) in [
            (main.c12, oracle.c12),
            (main.c23, oracle.c23),
            (main.c34, oracle.c34),
            (main.c14, oracle.c14),
            (main.c13, oracle.c13),
            (main.c24, oracle.c24),
        ] {
            assert!((a - b).abs() < 1e-8, "index {i}: {a} vs {b}");
        }
    }
}

#[test]
fn raw_moments_match_centered_moments() {
    let cfg = RandomInstanceConfig::new(4, 8);
    for i in 0..100 {
        let a = random_instance(&cfg, i).unwrap();
        let b = random_instance(&cfg, i + 1000).unwrap();
        let main = generalized_correlation(&a.state, &a.observable, &b.observable).unwrap();
        let raw = oracle_correlation(&a.state, &a.observable, &b.observable).unwrap();
        assert!((main - raw).abs() < 1e-10, "{main} vs {raw}");
    }
}
