mod common;

use common::*;
use nbvote::bounds::hellinger_envelopes;
use nbvote::exact::{self, bhattacharyya, Enumerator, NormOrder};
use nbvote::ProductBernoulli;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn ber(p: &[f64]) -> ProductBernoulli {
    ProductBernoulli::new(p.to_vec()).unwrap()
}

fn pair(max_n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..=max_n).prop_flat_map(|n| {
        (prop::collection::vec(0.0..=1.0f64, n), prop::collection::vec(0.0..=1.0f64, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn enumeration_matches_brute_force((p, q) in pair(10)) {
        let e = Enumerator::single_threaded();
        let mm = e.min_mass(&ber(&p), &ber(&q)).unwrap();
        prop_assert!((mm - brute_min_mass(&p, &q)).abs() <= 1e-12);
        let tv = e.tv_distance(&ber(&p), &ber(&q)).unwrap();
        prop_assert!((tv - brute_tv(&p, &q)).abs() <= 1e-12);
    }

    #[test]
    fn scheffe_identity((p, q) in pair(10)) {
        let mm = exact::min_mass(&ber(&p), &ber(&q)).unwrap();
        let tv = exact::tv_distance(&ber(&p), &ber(&q)).unwrap();
        prop_assert!((mm + tv - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn bhattacharyya_closed_form_matches_sum((p, q) in pair(12)) {
        let bc = bhattacharyya(&ber(&p), &ber(&q)).unwrap();
        prop_assert!((bc - brute_bhattacharyya(&p, &q)).abs() <= 1e-12);
        let mm = exact::min_mass(&ber(&p), &ber(&q)).unwrap();
        prop_assert!(mm <= bc + 1e-12);
        prop_assert!(bc <= 1.0 + 1e-12);
    }

    #[test]
    fn hellinger_sandwich((p, q) in pair(10)) {
        let bc = bhattacharyya(&ber(&p), &ber(&q)).unwrap();
        let (lo, up) = hellinger_envelopes(&ber(&p), &ber(&q)).unwrap();
        prop_assert!(lo <= bc + 1e-12, "{lo} > {bc}");
        prop_assert!(bc <= up + 1e-12, "{bc} > {up}");
    }

    #[test]
    fn complement_symmetry((p, q) in pair(8)) {
        for order in [NormOrder::One, NormOrder::Two, NormOrder::Infinity] {
            let (l, r) = exact::complement_symmetry_check(&ber(&p), &ber(&q), order).unwrap();
            prop_assert!((l - r).abs() <= 1e-12);
        }
    }

    #[test]
    fn tensorization_never_loses((p, pp) in pair(5), (q, qq) in pair(5)) {
        let gap = exact::tensorization_gap(&ber(&p), &ber(&pp), &ber(&q), &ber(&qq)).unwrap();
        prop_assert!(gap >= -1e-12);
    }
}

#[test]
fn complement_symmetry_against_brute_force() {
    let mut rng = rng(21);
    for _ in 0..20 {
        let psi = uniform_vec(&mut rng, 3, 0.0, 1.0);
        let eta = uniform_vec(&mut rng, 3, 0.0, 1.0);
        let (l1, r1) = exact::complement_symmetry_check(&ber(&psi), &ber(&eta), NormOrder::One).unwrap();
        assert!((l1 - 2.0 * brute_tv(&psi, &complement(&eta))).abs() < 1e-12);
        assert!((r1 - 2.0 * brute_tv(&complement(&psi), &eta)).abs() < 1e-12);
        let (linf, _) = exact::complement_symmetry_check(&ber(&psi), &ber(&eta), NormOrder::Infinity).unwrap();
        let direct = masses(&psi)
            .iter()
            .zip(masses(&complement(&eta)))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!((linf - direct).abs() < 1e-15);
    }
}

#[test]
fn permuting_experts_leaves_min_mass_unchanged() {
    let mut rng = rng(22);
    for _ in 0..50 {
        let n = rng.random_range(2..=12);
        let p = uniform_vec(&mut rng, n, 0.0, 1.0);
        let q = uniform_vec(&mut rng, n, 0.0, 1.0);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let pp: Vec<f64> = order.iter().map(|&i| p[i]).collect();
        let qq: Vec<f64> = order.iter().map(|&i| q[i]).collect();
        let a = exact::min_mass(&ber(&p), &ber(&q)).unwrap();
        let b = exact::min_mass(&ber(&pp), &ber(&qq)).unwrap();
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn tensorization_single_coordinate_example() {
    let gap = exact::tensorization_gap(&ber(&[0.6]), &ber(&[0.4]), &ber(&[0.6]), &ber(&[0.4])).unwrap();
    let joint = brute_min_mass(&[0.6, 0.6], &[0.4, 0.4]);
    assert!((gap - (joint - 0.8 * 0.8)).abs() < 1e-12);
    assert!(gap >= 0.0);
}

#[test]
fn parallel_enumeration_agrees() {
    let mut rng = rng(23);
    for n in [14, 16, 18] {
        let p = ber(&uniform_vec(&mut rng, n, 0.0, 1.0));
        let q = ber(&uniform_vec(&mut rng, n, 0.0, 1.0));
        let base = Enumerator::new(24, 1).min_mass(&p, &q).unwrap();
        let tv_base = Enumerator::new(24, 1).tv_distance(&p, &q).unwrap();
        for workers in [2, 3, 5, 16] {
            let e = Enumerator::new(24, workers);
            assert!(rel_close(e.min_mass(&p, &q).unwrap(), base, 1e-12));
            assert!(rel_close(e.tv_distance(&p, &q).unwrap(), tv_base, 1e-12));
        }
    }
}

#[test]
fn limit_is_surfaced() {
    let p = ber(&[0.5; 25]);
    assert!(matches!(
        exact::min_mass(&p, &p),
        Err(nbvote::Error::TooManyExperts { n: 25, n_max: 24 })
    ));
    let small = Enumerator::new(12, 1);
    let a = ber(&[0.5; 7]);
    let b = ber(&[0.5; 6]);
    assert!(small.tensorization_gap(&a, &a, &b, &b).is_err());
}
