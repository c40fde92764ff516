//! Seeded Monte Carlo estimates for panels too large to enumerate.
//!
//! Trials are cut into fixed blocks of [`BLOCK_TRIALS`]. Block `b` draws from
//! a ChaCha8 stream keyed by `(seed, b)`, so the sample path of every block is
//! fixed by the seed alone and is the same on every platform. Workers take
//! whole blocks and results are reduced in block order, which makes the
//! output bit-identical for any worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::default_workers;
use crate::panel::{ExpertPanel, ProductBernoulli};
use crate::rule::DecisionRule;

pub const BLOCK_TRIALS: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationResult {
    pub trials: u64,
    /// Trials on which the optimal rule disagreed with `Y`.
    pub errors: u64,
    pub empirical_error: f64,
    /// Plug-in binomial standard error `sqrt(p̂ (1 - p̂) / trials)`.
    pub std_error: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinMassEstimate {
    pub trials: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub seed: u64,
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Run `per_block(block_index, block_len)` over all blocks on `workers`
/// threads, returning the per-block outputs in block order.
fn run_blocks<T, F>(trials: u64, workers: usize, per_block: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
{
    let blocks = trials.div_ceil(BLOCK_TRIALS);
    let len = |b: u64| BLOCK_TRIALS.min(trials - b * BLOCK_TRIALS);
    let workers = (workers.max(1) as u64).min(blocks);
    if workers <= 1 {
        return (0..blocks).map(|b| per_block(b, len(b))).collect();
    }
    let per_block = &per_block;
    let mut tagged: Vec<(u64, T)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..blocks)
                        .step_by(workers as usize)
                        .map(|b| (b, per_block(b, len(b))))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("simulation worker panicked"))
            .collect()
    });
    tagged.sort_by_key(|(b, _)| *b);
    tagged.into_iter().map(|(_, t)| t).collect()
}

/// Simulate `Y ~ Ber(p_y)`, votes from the panel, and count how often the
/// optimal rule is wrong.
pub fn simulate_error(panel: &ExpertPanel, trials: u64, seed: u64) -> Result<SimulationResult> {
    simulate_error_with(panel, trials, seed, default_workers())
}

pub fn simulate_error_with(
    panel: &ExpertPanel,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<SimulationResult> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let rule = DecisionRule::from_panel(panel);
    let p_y = panel.p_y();
    // P(X_i = 1 | Y = 1) and P(X_i = 1 | Y = 0).
    let on_pos = panel.psi();
    let on_neg: Vec<f64> = panel.eta().iter().map(|e| 1.0 - e).collect();

    let counts = run_blocks(trials, workers, |block, len| {
        let mut rng = block_rng(seed, block);
        let mut x = vec![false; panel.len()];
        let mut errors = 0u64;
        for _ in 0..len {
            let y = rng.random::<f64>() < p_y;
            let probs = if y { on_pos } else { &on_neg[..] };
            for (bit, &p) in x.iter_mut().zip(probs) {
                *bit = rng.random::<f64>() < p;
            }
            let decision = rule.decide(&x).expect("vote vector matches panel size");
            errors += u64::from(decision != y);
        }
        errors
    });

    let errors: u64 = counts.into_iter().sum();
    let empirical_error = errors as f64 / trials as f64;
    let std_error = (empirical_error * (1.0 - empirical_error) / trials as f64).sqrt();
    Ok(SimulationResult { trials, errors, empirical_error, std_error, seed })
}

/// Importance-sampling estimate of `||P ∧ Q||_1 = E_{x~P} min(1, Q(x)/P(x))`.
///
/// `P` must have every coordinate strictly inside (0, 1).
pub fn estimate_min_mass(
    p: &ProductBernoulli,
    q: &ProductBernoulli,
    trials: u64,
    seed: u64,
) -> Result<MinMassEstimate> {
    estimate_min_mass_with(p, q, trials, seed, default_workers())
}

pub fn estimate_min_mass_with(
    p: &ProductBernoulli,
    q: &ProductBernoulli,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<MinMassEstimate> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { left: p.len(), right: q.len() });
    }
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    if let Some((index, &value)) = p.probs().iter().enumerate().find(|(_, &v)| v <= 0.0 || v >= 1.0) {
        return Err(Error::BoundaryParameter { index, value });
    }
    // Per-coordinate log(Q/P) for a 1 and for a 0.
    let log_ratio: Vec<(f64, f64)> = p
        .probs()
        .iter()
        .zip(q.probs())
        .map(|(&a, &b)| ((b / a).ln(), ((1.0 - b) / (1.0 - a)).ln()))
        .collect();

    let sums = run_blocks(trials, workers, |block, len| {
        let mut rng = block_rng(seed, block);
        let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
        for _ in 0..len {
            let mut log_r = 0.0;
            for (&pi, &(one, zero)) in p.probs().iter().zip(&log_ratio) {
                log_r += if rng.random::<f64>() < pi { one } else { zero };
            }
            let r = log_r.exp().min(1.0);
            sum += r;
            sum_sq += r * r;
        }
        (sum, sum_sq)
    });

    let (sum, sum_sq) = sums.into_iter().fold((0.0, 0.0), |(a, b), (s, s2)| (a + s, b + s2));
    let n = trials as f64;
    let estimate = sum / n;
    let variance = (sum_sq / n - estimate * estimate).max(0.0);
    Ok(MinMassEstimate { trials, estimate, std_error: (variance / n).sqrt(), seed })
}
