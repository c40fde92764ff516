//! Exact hypercube computations for pairs of product Bernoulli measures.
//!
//! Everything except [`bhattacharyya`] walks all of `{0,1}^n` and is
//! exponential in `n`; an [`Enumerator`] refuses dimensions above its
//! `n_max` instead of degrading silently.
//!
//! The walk is a depth-first traversal that carries the running products of
//! both measures along the current path, so each leaf costs O(1). With more
//! than one worker the cube is split on its leading coordinates and partial
//! sums are added in a fixed order; results for different worker counts agree
//! to rounding but are not bit-identical.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::panel::{ExpertPanel, ProductBernoulli};

pub const DEFAULT_N_MAX: usize = 24;

/// Dimensions below this are never split across threads.
const PARALLEL_MIN_DIM: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Enumeration,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffinityResult {
    pub min_mass: f64,
    pub tv: f64,
    pub bhattacharyya: f64,
    pub n: usize,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormOrder {
    One,
    Two,
    Infinity,
}

impl NormOrder {
    /// Parses `1`, `2`, `inf`/`infinity`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" => Ok(Self::One),
            "2" => Ok(Self::Two),
            "inf" | "infinity" | "∞" => Ok(Self::Infinity),
            _ => Err(Error::UnsupportedNorm),
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Configuration for exhaustive computations over `{0,1}^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enumerator {
    pub n_max: usize,
    pub workers: usize,
}

impl Default for Enumerator {
    fn default() -> Self {
        Self { n_max: DEFAULT_N_MAX, workers: default_workers() }
    }
}

impl Enumerator {
    pub fn new(n_max: usize, workers: usize) -> Self {
        Self { n_max, workers: workers.max(1) }
    }

    pub fn single_threaded() -> Self {
        Self::new(DEFAULT_N_MAX, 1)
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            return Err(Error::TooManyExperts { n, n_max: self.n_max });
        }
        Ok(())
    }

    /// `sum_x min(P(x), Q(x))`.
    pub fn min_mass(&self, p: &ProductBernoulli, q: &ProductBernoulli) -> Result<f64> {
        p.check_same_dim(q)?;
        self.check_dim(p.len())?;
        let total = self.walk(p.probs(), q.probs(), 1.0, 1.0, Leaf::Min);
        Ok(total.clamp(0.0, 1.0))
    }

    /// `(1/2) sum_x |P(x) - Q(x)|`, summed directly rather than through
    /// Scheffé's identity.
    pub fn tv_distance(&self, p: &ProductBernoulli, q: &ProductBernoulli) -> Result<f64> {
        p.check_same_dim(q)?;
        self.check_dim(p.len())?;
        let total = self.walk(p.probs(), q.probs(), 1.0, 1.0, Leaf::AbsDiff);
        Ok((0.5 * total).clamp(0.0, 1.0))
    }

    pub fn affinity(&self, p: &ProductBernoulli, q: &ProductBernoulli) -> Result<AffinityResult> {
        p.check_same_dim(q)?;
        let bc = bhattacharyya(p, q)?;
        if p.len() == 1 {
            let (a, b) = (p.probs()[0], q.probs()[0]);
            let min_mass = a.min(b) + (1.0 - a).min(1.0 - b);
            return Ok(AffinityResult {
                min_mass,
                tv: (a - b).abs(),
                bhattacharyya: bc,
                n: 1,
                method: Method::ClosedForm,
            });
        }
        Ok(AffinityResult {
            min_mass: self.min_mass(p, q)?,
            tv: self.tv_distance(p, q)?,
            bhattacharyya: bc,
            n: p.len(),
            method: Method::Enumeration,
        })
    }

    /// Probability that the optimal rule misclassifies,
    /// `sum_x min(p_y Ber(psi)(x), (1 - p_y) Ber(1 - eta)(x))`.
    ///
    /// At `p_y = 1/2` this is `(1/2) ||Ber(psi) ∧ Ber(1 - eta)||_1`.
    pub fn optimal_error(&self, panel: &ExpertPanel) -> Result<f64> {
        self.check_dim(panel.len())?;
        let pos = panel.positive_measure();
        let neg = panel.negative_measure();
        let total = self.walk(pos.probs(), neg.probs(), panel.p_y(), 1.0 - panel.p_y(), Leaf::Min);
        Ok(total.clamp(0.0, 0.5))
    }

    /// The pair `(||Ber(psi) - Ber(1-eta)||_r, ||Ber(1-psi) - Ber(eta)||_r)`,
    /// each side enumerated independently.
    pub fn complement_symmetry_check(
        &self,
        psi: &ProductBernoulli,
        eta: &ProductBernoulli,
        order: NormOrder,
    ) -> Result<(f64, f64)> {
        psi.check_same_dim(eta)?;
        self.check_dim(psi.len())?;
        let left = lr_norm(psi, &eta.complement(), order);
        let right = lr_norm(&psi.complement(), eta, order);
        Ok((left, right))
    }

    /// `||P⊗Q ∧ P'⊗Q'||_1 - ||P ∧ P'||_1 · ||Q ∧ Q'||_1`; never negative up
    /// to rounding.
    pub fn tensorization_gap(
        &self,
        p: &ProductBernoulli,
        p_prime: &ProductBernoulli,
        q: &ProductBernoulli,
        q_prime: &ProductBernoulli,
    ) -> Result<f64> {
        p.check_same_dim(p_prime)?;
        q.check_same_dim(q_prime)?;
        self.check_dim(p.len() + q.len())?;
        let joint = self.min_mass(&p.tensor(q), &p_prime.tensor(q_prime))?;
        Ok(joint - self.min_mass(p, p_prime)? * self.min_mass(q, q_prime)?)
    }

    fn walk(&self, p: &[f64], q: &[f64], p0: f64, q0: f64, leaf: Leaf) -> f64 {
        let n = p.len();
        if self.workers <= 1 || n < PARALLEL_MIN_DIM {
            return dfs(p, q, 0, p0, q0, leaf);
        }
        let split = split_depth(self.workers).min(n);
        let prefixes = 1usize << split;
        let per_worker = prefixes.div_ceil(self.workers);
        let partials: Vec<f64> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..self.workers)
                .map(|w| {
                    let start = (w * per_worker).min(prefixes);
                    let end = ((w + 1) * per_worker).min(prefixes);
                    scope.spawn(move || {
                        let mut sum = 0.0;
                        for prefix in start..end {
                            let (mut pp, mut qp) = (p0, q0);
                            for i in 0..split {
                                if prefix >> (split - 1 - i) & 1 == 1 {
                                    pp *= p[i];
                                    qp *= q[i];
                                } else {
                                    pp *= 1.0 - p[i];
                                    qp *= 1.0 - q[i];
                                }
                            }
                            sum += dfs(p, q, split, pp, qp, leaf);
                        }
                        sum
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("enumeration worker panicked")).collect()
        });
        partials.into_iter().sum()
    }
}

/// Leading coordinates to split on: enough prefixes for about four per worker.
fn split_depth(workers: usize) -> usize {
    let mut k = 0;
    while (1usize << k) < workers {
        k += 1;
    }
    k + 2
}

#[derive(Debug, Clone, Copy)]
enum Leaf {
    Min,
    AbsDiff,
}

fn dfs(p: &[f64], q: &[f64], depth: usize, pp: f64, qp: f64, leaf: Leaf) -> f64 {
    if let Leaf::Min = leaf {
        // min(0, anything) contributes nothing below this node.
        if pp == 0.0 || qp == 0.0 {
            return 0.0;
        }
    }
    if depth == p.len() {
        return match leaf {
            Leaf::Min => pp.min(qp),
            Leaf::AbsDiff => (pp - qp).abs(),
        };
    }
    let (a, b) = (p[depth], q[depth]);
    dfs(p, q, depth + 1, pp * (1.0 - a), qp * (1.0 - b), leaf)
        + dfs(p, q, depth + 1, pp * a, qp * b, leaf)
}

/// Masses of every outcome, indexed by bitmask with coordinate 0 in the
/// lowest bit.
fn outcome_masses(p: &ProductBernoulli) -> Vec<f64> {
    let mut masses = vec![1.0];
    for (i, &pi) in p.probs().iter().enumerate() {
        let mut next = vec![0.0; masses.len() * 2];
        for (mask, &m) in masses.iter().enumerate() {
            next[mask] = m * (1.0 - pi);
            next[mask | 1 << i] = m * pi;
        }
        masses = next;
    }
    masses
}

fn lr_norm(p: &ProductBernoulli, q: &ProductBernoulli, order: NormOrder) -> f64 {
    let diffs = outcome_masses(p).into_iter().zip(outcome_masses(q)).map(|(a, b)| (a - b).abs());
    match order {
        NormOrder::One => diffs.sum(),
        NormOrder::Two => diffs.map(|d| d * d).sum::<f64>().sqrt(),
        NormOrder::Infinity => diffs.fold(0.0, f64::max),
    }
}

/// `sum_x sqrt(P(x) Q(x))` in closed form, `prod_i [sqrt(p_i q_i) + sqrt((1-p_i)(1-q_i))]`.
pub fn bhattacharyya(p: &ProductBernoulli, q: &ProductBernoulli) -> Result<f64> {
    p.check_same_dim(q)?;
    Ok(p.probs()
        .iter()
        .zip(q.probs())
        .map(|(&a, &b)| (a * b).sqrt() + ((1.0 - a) * (1.0 - b)).sqrt())
        .product())
}

pub fn min_mass(p: &ProductBernoulli, q: &ProductBernoulli) -> Result<f64> {
    Enumerator::default().min_mass(p, q)
}

pub fn tv_distance(p: &ProductBernoulli, q: &ProductBernoulli) -> Result<f64> {
    Enumerator::default().tv_distance(p, q)
}

pub fn optimal_error(panel: &ExpertPanel) -> Result<f64> {
    Enumerator::default().optimal_error(panel)
}

pub fn complement_symmetry_check(
    psi: &ProductBernoulli,
    eta: &ProductBernoulli,
    order: NormOrder,
) -> Result<(f64, f64)> {
    Enumerator::default().complement_symmetry_check(psi, eta, order)
}

pub fn tensorization_gap(
    p: &ProductBernoulli,
    p_prime: &ProductBernoulli,
    q: &ProductBernoulli,
    q_prime: &ProductBernoulli,
) -> Result<f64> {
    Enumerator::default().tensorization_gap(p, p_prime, q, q_prime)
}
