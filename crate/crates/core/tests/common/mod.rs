//! Brute-force oracles and random instance generators shared by the
//! integration tests. Nothing here goes through the library's hypercube walk.

#![allow(dead_code)]

use nbvote::ExpertPanel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Outcome `mask` as a bit-vector, coordinate `i` = bit `i`.
pub fn bits(mask: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

/// Mass of outcome `mask` under `Ber(p)`, as an explicit product.
pub fn mass(p: &[f64], mask: usize) -> f64 {
    p.iter()
        .enumerate()
        .map(|(i, &pi)| if mask >> i & 1 == 1 { pi } else { 1.0 - pi })
        .product()
}

pub fn masses(p: &[f64]) -> Vec<f64> {
    (0..1usize << p.len()).map(|m| mass(p, m)).collect()
}

pub fn brute_min_mass(p: &[f64], q: &[f64]) -> f64 {
    masses(p).iter().zip(masses(q)).map(|(a, b)| a.min(b)).sum()
}

pub fn brute_tv(p: &[f64], q: &[f64]) -> f64 {
    0.5 * masses(p).iter().zip(masses(q)).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

pub fn brute_bhattacharyya(p: &[f64], q: &[f64]) -> f64 {
    masses(p).iter().zip(masses(q)).map(|(a, b)| (a * b).sqrt()).sum()
}

pub fn complement(p: &[f64]) -> Vec<f64> {
    p.iter().map(|v| 1.0 - v).collect()
}

/// Joint masses `P(Y = 1, X = x)` and `P(Y = 0, X = x)` for every outcome.
pub fn joint(panel: &ExpertPanel) -> (Vec<f64>, Vec<f64>) {
    let pos: Vec<f64> = masses(panel.psi()).iter().map(|m| m * panel.p_y()).collect();
    let neg: Vec<f64> =
        masses(&complement(panel.eta())).iter().map(|m| m * (1.0 - panel.p_y())).collect();
    (pos, neg)
}

/// Error of an arbitrary rule given as its truth table.
pub fn rule_error(panel: &ExpertPanel, table: &[bool]) -> f64 {
    let (pos, neg) = joint(panel);
    table
        .iter()
        .enumerate()
        .map(|(x, &d)| if d { neg[x] } else { pos[x] })
        .sum()
}

/// Smallest error over all `2^(2^n)` deterministic rules.
pub fn exhaustive_best_error(panel: &ExpertPanel) -> f64 {
    let outcomes = 1usize << panel.len();
    assert!(outcomes <= 8, "exhaustive search is only for n <= 3");
    (0..1usize << outcomes)
        .map(|code| {
            let table: Vec<bool> = (0..outcomes).map(|x| code >> x & 1 == 1).collect();
            rule_error(panel, &table)
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn uniform_vec(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

pub fn random_panel(rng: &mut impl Rng, n: usize, lo: f64, hi: f64, p_y: f64) -> ExpertPanel {
    ExpertPanel::new(uniform_vec(rng, n, lo, hi), uniform_vec(rng, n, lo, hi), p_y).unwrap()
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> ExpertPanel {
    ExpertPanel::symmetric(uniform_vec(rng, n, lo, hi)).unwrap()
}

/// A panel whose optimal rule has no near-ties: every outcome's two joint
/// masses differ by more than `margin` in relative terms.
pub fn tie_free(panel: &ExpertPanel, margin: f64) -> bool {
    let (pos, neg) = joint(panel);
    pos.iter().zip(&neg).all(|(a, b)| (a - b).abs() > margin * a.max(*b))
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}
