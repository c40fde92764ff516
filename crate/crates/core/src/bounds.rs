//! Closed-form bounds on the optimal error probability.
//!
//! Every function here first folds a biased prior into an extra expert (see
//! [`fold_bias`]), so the bounds apply to panels with any `p_y`. Quantities of
//! the form `2^n sqrt(prod ...)` are assembled in log space and exponentiated
//! once.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Enumerator;
use crate::panel::{fold_bias, BalancedAccuracy, ExpertPanel, ProductBernoulli};

/// Constant in the older symmetric-panel lower bound that `lower_bound_thm4`
/// tightens.
pub const MANINO_LOWER_CONSTANT: f64 = 0.36;

/// `(1/2) 2^n sqrt(prod_i pi_i (1 - pi_i))`, with `pi` the balanced accuracy.
pub fn upper_bound_thm2(panel: &ExpertPanel) -> f64 {
    let panel = fold_bias(panel);
    let pi = panel.balanced_accuracy();
    if pi.values().iter().any(|&p| p <= 0.0 || p >= 1.0) {
        return 0.0;
    }
    let n = pi.values().len() as f64;
    let log_prod: f64 = pi.values().iter().map(|&p| (p * (1.0 - p)).ln()).sum();
    (n * LN_2 + 0.5 * log_prod - LN_2).exp()
}

/// `(1/2) 2^n sqrt(prod pi_i (1 - pi_i)) exp(-(1/2) sum |log(pi_i / (1 - pi_i))|)`,
/// evaluated as the equal product `(1/2) prod_i 2 min(pi_i, 1 - pi_i)`.
pub fn lower_bound_thm3(panel: &ExpertPanel) -> f64 {
    let panel = fold_bias(panel);
    0.5 * panel
        .balanced_accuracy()
        .values()
        .iter()
        .map(|&p| 2.0 * p.min(1.0 - p))
        .product::<f64>()
}

/// Interior parameters of a symmetric panel, after folding.
fn symmetric_params(panel: &ExpertPanel) -> Result<Vec<f64>> {
    let panel = fold_bias(panel);
    if let Some(index) = panel.psi().iter().zip(panel.eta()).position(|(a, b)| a != b) {
        return Err(Error::NotSymmetric { index });
    }
    if let Some((index, &value)) = panel.psi().iter().enumerate().find(|(_, &p)| p <= 0.0 || p >= 1.0) {
        return Err(Error::BoundaryParameter { index, value });
    }
    Ok(panel.psi().to_vec())
}

/// `ln(2^n sqrt(prod p_i (1 - p_i)))` and `||w||_2` for `w_i = log(p_i / (1 - p_i))`.
fn symmetric_terms(p: &[f64]) -> (f64, f64) {
    let n = p.len() as f64;
    let log_scale = n * LN_2 + 0.5 * p.iter().map(|&v| (v * (1.0 - v)).ln()).sum::<f64>();
    let w_norm = p.iter().map(|&v| (v / (1.0 - v)).ln().powi(2)).sum::<f64>().sqrt();
    (log_scale, w_norm)
}

/// `(1/2) 2^n sqrt(prod p_i (1 - p_i)) exp(-(1/2) ||w||_2)` for a symmetric
/// panel `psi = eta = p` with interior entries.
pub fn lower_bound_thm4(panel: &ExpertPanel) -> Result<f64> {
    let p = symmetric_params(panel)?;
    let (log_scale, w_norm) = symmetric_terms(&p);
    Ok((log_scale - 0.5 * w_norm - LN_2).exp())
}

/// `Phi = sum_i (p_i - 1/2) log(p_i / (1 - p_i))` of a symmetric panel.
pub fn phi(panel: &ExpertPanel) -> Result<f64> {
    let p = symmetric_params(panel)?;
    Ok(p.iter().map(|&v| (v - 0.5) * (v / (1.0 - v)).ln()).sum())
}

/// Berend-Kontorovich bounds `(3 / (4 [1 + exp(2 Phi + 4 sqrt(Phi))]), exp(-Phi / 2))`.
pub fn bk_bounds(panel: &ExpertPanel) -> Result<(f64, f64)> {
    let phi = phi(panel)?.max(0.0);
    let lower = 3.0 / (4.0 * (1.0 + (2.0 * phi + 4.0 * phi.sqrt()).exp()));
    Ok((lower, (-phi / 2.0).exp()))
}

/// Manino et al. bounds
/// `(0.36 · 2^n sqrt(prod p p̄) exp(-||w||_2 / 2), (1/2) 2^n sqrt(prod p p̄))`.
pub fn manino_bounds(panel: &ExpertPanel) -> Result<(f64, f64)> {
    let p = symmetric_params(panel)?;
    let (log_scale, w_norm) = symmetric_terms(&p);
    let lower = (MANINO_LOWER_CONSTANT.ln() + log_scale - 0.5 * w_norm).exp();
    let upper = (log_scale - LN_2).exp();
    Ok((lower, upper))
}

/// Both sides of `sqrt(prod (1 - (p_i - q_i)^2) / 2) <= BC(P, Q) <= sqrt(prod (1 - (p_i - q_i)^2))`,
/// with the halving applied per coordinate.
pub fn hellinger_envelopes(p: &ProductBernoulli, q: &ProductBernoulli) -> Result<(f64, f64)> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { left: p.len(), right: q.len() });
    }
    let factors = p.probs().iter().zip(q.probs()).map(|(a, b)| 1.0 - (a - b).powi(2));
    let (lower_sq, upper_sq) = factors.fold((1.0, 1.0), |(lo, up), f| (lo * f / 2.0, up * f));
    Ok((lower_sq.sqrt(), upper_sq.sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    /// Number of experts after folding the prior.
    pub n: usize,
    pub pi: BalancedAccuracy,
    pub upper_thm2: f64,
    pub lower_thm3: f64,
    pub lower_thm4: Option<f64>,
    pub bk_lower: Option<f64>,
    pub bk_upper: Option<f64>,
    pub manino_lower: Option<f64>,
    pub manino_upper: Option<f64>,
    /// Bhattacharyya envelopes for `Ber(psi)` vs `Ber(1 - eta)`.
    pub hellinger_upper: f64,
    pub hellinger_lower: f64,
    pub exact: Option<f64>,
}

pub fn full_report(panel: &ExpertPanel, with_exact: bool) -> Result<BoundsReport> {
    full_report_with(panel, with_exact, &Enumerator::default())
}

pub fn full_report_with(
    panel: &ExpertPanel,
    with_exact: bool,
    enumerator: &Enumerator,
) -> Result<BoundsReport> {
    let folded = fold_bias(panel);
    let exact = with_exact.then(|| enumerator.optimal_error(panel)).transpose()?;
    let (hellinger_lower, hellinger_upper) =
        hellinger_envelopes(&folded.positive_measure(), &folded.negative_measure())?;

    // Symmetric-only bounds are reported as absent rather than failing.
    let symmetric = symmetric_params(&folded).is_ok();
    let lower_thm4 = symmetric.then(|| lower_bound_thm4(&folded)).transpose()?;
    let bk = symmetric.then(|| bk_bounds(&folded)).transpose()?;
    let manino = symmetric.then(|| manino_bounds(&folded)).transpose()?;

    Ok(BoundsReport {
        n: folded.len(),
        pi: folded.balanced_accuracy(),
        upper_thm2: upper_bound_thm2(&folded),
        lower_thm3: lower_bound_thm3(&folded),
        lower_thm4,
        bk_lower: bk.map(|b| b.0),
        bk_upper: bk.map(|b| b.1),
        manino_lower: manino.map(|b| b.0),
        manino_upper: manino.map(|b| b.1),
        hellinger_upper,
        hellinger_lower,
        exact,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CounterexampleKind {
    /// `psi = (1, 0)`, `eta = (1 - eps, eps)`: an l2 variant of the
    /// `lower_bound_thm3` product bound fails.
    AsymmetricL2,
    /// `p = (eps, eps)`: `lower_bound_thm4` is loose.
    SymmetricThm4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub eps: f64,
    /// Enumerated min-mass, `eps^2` or `2 eps` in closed form.
    pub exact: f64,
    /// `f(eps)` or `g(eps)`.
    pub bound: f64,
    /// `f / eps^2` or `g / eps`.
    pub ratio: f64,
}

/// `(eps/2)(1 - eps/2)(eps / (2 - eps))^(1/sqrt 2)`.
pub fn asymmetric_l2_value(eps: f64) -> f64 {
    (eps / 2.0) * (1.0 - eps / 2.0) * (eps / (2.0 - eps)).powf(std::f64::consts::FRAC_1_SQRT_2)
}

/// `eps(1 - eps)(eps / (1 - eps))^(1/sqrt 2)`.
pub fn symmetric_thm4_value(eps: f64) -> f64 {
    eps * (1.0 - eps) * (eps / (1.0 - eps)).powf(std::f64::consts::FRAC_1_SQRT_2)
}

pub fn counterexample_sweep(kind: CounterexampleKind, eps_grid: &[f64]) -> Result<Vec<SweepRow>> {
    let enumerator = Enumerator::single_threaded();
    eps_grid
        .iter()
        .map(|&eps| {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::InvalidGrid(eps));
            }
            let row = match kind {
                CounterexampleKind::AsymmetricL2 => {
                    let psi = ProductBernoulli::new(vec![1.0, 0.0])?;
                    let eta_bar = ProductBernoulli::new(vec![eps, 1.0 - eps])?;
                    let exact = enumerator.min_mass(&psi, &eta_bar)?;
                    let bound = asymmetric_l2_value(eps);
                    SweepRow { eps, exact, bound, ratio: bound / (eps * eps) }
                }
                CounterexampleKind::SymmetricThm4 => {
                    let p = ProductBernoulli::new(vec![eps, eps])?;
                    let exact = enumerator.min_mass(&p, &p.complement())?;
                    let bound = symmetric_thm4_value(eps);
                    SweepRow { eps, exact, bound, ratio: bound / eps }
                }
            };
            Ok(row)
        })
        .collect()
}
