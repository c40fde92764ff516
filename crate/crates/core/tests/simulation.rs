mod common;

use common::*;
use nbvote::exact::optimal_error;
use nbvote::montecarlo::{estimate_min_mass, estimate_min_mass_with, simulate_error, simulate_error_with};
use nbvote::{fold_bias, ExpertPanel, ProductBernoulli};
use rand::Rng;

#[test]
fn coin_flip_panel() {
    let panel = ExpertPanel::symmetric(vec![0.5]).unwrap();
    let r = simulate_error(&panel, 1_000_000, 7).unwrap();
    assert!((r.empirical_error - 0.5).abs() <= 3.0 * r.std_error);
    assert_eq!(r.errors as f64 / r.trials as f64, r.empirical_error);
}

#[test]
fn boundary_counterexample_panel() {
    let panel = ExpertPanel::new(vec![1.0, 0.0], vec![0.9, 0.1], 0.5).unwrap();
    let r = simulate_error(&panel, 1_000_000, 8).unwrap();
    assert!((r.empirical_error - 0.005).abs() <= 3.0 * r.std_error, "{r:?}");
}

#[test]
fn importance_sampling_counterexample() {
    let p = ProductBernoulli::new(vec![0.1, 0.1]).unwrap();
    let est = estimate_min_mass(&p, &p.complement(), 1_000_000, 9).unwrap();
    assert!((est.estimate - 0.2).abs() <= 3.0 * est.std_error, "{est:?}");
}

#[test]
fn importance_sampling_matches_enumeration() {
    let mut rng = rng(51);
    let p = ProductBernoulli::new(uniform_vec(&mut rng, 10, 0.05, 0.95)).unwrap();
    let q = ProductBernoulli::new(uniform_vec(&mut rng, 10, 0.05, 0.95)).unwrap();
    let exact = brute_min_mass(p.probs(), q.probs());
    let est = estimate_min_mass(&p, &q, 1_000_000, 10).unwrap();
    assert!((est.estimate - exact).abs() <= 4.0 * est.std_error, "{est:?} vs {exact}");
}

#[test]
fn estimators_agree_on_folded_panels() {
    let mut rng = rng(52);
    for seed in 0..3 {
        let n = rng.random_range(2..=8);
        let panel = fold_bias(&random_panel(&mut rng, n, 0.05, 0.95, 0.65));
        let sim = simulate_error(&panel, 400_000, seed).unwrap();
        let mm = estimate_min_mass(&panel.positive_measure(), &panel.negative_measure(), 400_000, seed + 100).unwrap();
        let combined = (sim.std_error.powi(2) + (0.5 * mm.std_error).powi(2)).sqrt();
        assert!((0.5 * mm.estimate - sim.empirical_error).abs() <= 4.0 * combined);
        let exact = optimal_error(&panel).unwrap();
        assert!((sim.empirical_error - exact).abs() <= 4.0 * sim.std_error);
    }
}

#[test]
fn reruns_are_bit_identical() {
    let mut rng = rng(53);
    let panel = random_panel(&mut rng, 6, 0.05, 0.95, 0.3);
    let a = simulate_error_with(&panel, 300_001, 77, 1).unwrap();
    let b = simulate_error_with(&panel, 300_001, 77, 6).unwrap();
    let c = simulate_error(&panel, 300_001, 77).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
    let (p, q) = (panel.positive_measure(), panel.negative_measure());
    let x = estimate_min_mass_with(&p, &q, 300_001, 5, 1).unwrap();
    let y = estimate_min_mass_with(&p, &q, 300_001, 5, 7).unwrap();
    assert_eq!(x.estimate.to_bits(), y.estimate.to_bits());
    assert_eq!(x.std_error.to_bits(), y.std_error.to_bits());
}
