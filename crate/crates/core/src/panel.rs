//! Expert panels and product Bernoulli measures.
//!
//! An [`ExpertPanel`] holds, for each of `n` conditionally independent binary
//! experts, its sensitivity `psi[i] = P(X_i = 1 | Y = 1)` and specificity
//! `eta[i] = P(X_i = 0 | Y = 0)`, together with the prior `p_y = P(Y = 1)`.
//!
//! Boundary values 0 and 1 are accepted for `psi` and `eta`; downstream code
//! that needs logarithms deals with them explicitly. The prior must lie
//! strictly inside (0, 1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, PanelIssue, Result};

/// Panel data as read from a file, before validation.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPanel {
    pub psi: Vec<f64>,
    pub eta: Vec<f64>,
    #[serde(default)]
    pub p_y: Option<f64>,
}

impl RawPanel {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// A validated panel of binary experts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpertPanel {
    psi: Vec<f64>,
    eta: Vec<f64>,
    p_y: f64,
}

fn in_unit(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

/// Check raw panel data, collecting every issue rather than stopping at the
/// first. Values are never clamped.
pub fn validate_panel(raw: RawPanel) -> Result<ExpertPanel> {
    let mut issues = Vec::new();
    if raw.psi.is_empty() && raw.eta.is_empty() {
        issues.push(PanelIssue::Empty);
    } else if raw.psi.len() != raw.eta.len() {
        issues.push(PanelIssue::LengthMismatch { psi: raw.psi.len(), eta: raw.eta.len() });
    }
    for (field, values) in [("psi", &raw.psi), ("eta", &raw.eta)] {
        for (index, &value) in values.iter().enumerate() {
            if !in_unit(value) {
                issues.push(PanelIssue::OutOfRange { field, index, value });
            }
        }
    }
    let p_y = raw.p_y.unwrap_or(0.5);
    if !(p_y > 0.0 && p_y < 1.0) {
        issues.push(PanelIssue::PriorOutOfRange(p_y));
    }
    if !issues.is_empty() {
        return Err(Error::InvalidPanel(issues));
    }
    Ok(ExpertPanel { psi: raw.psi, eta: raw.eta, p_y })
}

impl ExpertPanel {
    pub fn new(psi: Vec<f64>, eta: Vec<f64>, p_y: f64) -> Result<Self> {
        validate_panel(RawPanel { psi, eta, p_y: Some(p_y) })
    }

    /// Panel with `psi = eta = p` and an unbiased prior.
    pub fn symmetric(p: Vec<f64>) -> Result<Self> {
        Self::new(p.clone(), p, 0.5)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        validate_panel(RawPanel::from_json(text)?)
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn p_y(&self) -> f64 {
        self.p_y
    }

    /// True when `psi[i] == eta[i]` exactly for every expert.
    pub fn is_symmetric(&self) -> bool {
        self.psi.iter().zip(&self.eta).all(|(a, b)| a == b)
    }

    /// Distribution of the expert votes given `Y = 1`, i.e. `Ber(psi)`.
    pub fn positive_measure(&self) -> ProductBernoulli {
        ProductBernoulli { p: self.psi.clone() }
    }

    /// Distribution of the expert votes given `Y = 0`, i.e. `Ber(1 - eta)`.
    pub fn negative_measure(&self) -> ProductBernoulli {
        ProductBernoulli { p: self.eta.iter().map(|e| 1.0 - e).collect() }
    }

    pub fn balanced_accuracy(&self) -> BalancedAccuracy {
        BalancedAccuracy {
            pi: self.psi.iter().zip(&self.eta).map(|(s, e)| (s + e) / 2.0).collect(),
        }
    }
}

/// Replace a biased prior by an extra expert with `psi = eta = p_y` and an
/// unbiased prior. A panel that already has `p_y = 1/2` is returned as is.
///
/// The folded panel has the same optimal decision rule on the original votes
/// and its error bounds also bound the original panel's error. The optimal
/// error itself is preserved only for symmetric panels: in general the folded
/// error is the mean of the errors under priors `p_y` and `1 - p_y`.
pub fn fold_bias(panel: &ExpertPanel) -> ExpertPanel {
    if panel.p_y == 0.5 {
        return panel.clone();
    }
    let mut psi = panel.psi.clone();
    let mut eta = panel.eta.clone();
    psi.push(panel.p_y);
    eta.push(panel.p_y);
    ExpertPanel { psi, eta, p_y: 0.5 }
}

/// The product measure `Ber(p_1) ⊗ … ⊗ Ber(p_n)` on `{0,1}^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProductBernoulli {
    p: Vec<f64>,
}

impl ProductBernoulli {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some((index, &value)) = p.iter().enumerate().find(|(_, v)| !in_unit(**v)) {
            return Err(Error::InvalidProbability { index, value });
        }
        Ok(Self { p })
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// `Ber(1 - p)`.
    pub fn complement(&self) -> Self {
        Self { p: self.p.iter().map(|v| 1.0 - v).collect() }
    }

    /// `self ⊗ other`, a product measure on `{0,1}^(n1 + n2)`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut p = self.p.clone();
        p.extend_from_slice(&other.p);
        Self { p }
    }

    /// Mass of a single outcome. Panics if `x` has the wrong length.
    pub fn mass(&self, x: &[bool]) -> f64 {
        assert_eq!(x.len(), self.p.len(), "outcome length must match dimension");
        self.p
            .iter()
            .zip(x)
            .map(|(&p, &bit)| if bit { p } else { 1.0 - p })
            .product()
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { left: self.len(), right: other.len() });
        }
        Ok(())
    }
}

/// Per-expert balanced accuracy `pi_i = (psi_i + eta_i) / 2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct BalancedAccuracy {
    pi: Vec<f64>,
}

impl BalancedAccuracy {
    pub fn values(&self) -> &[f64] {
        &self.pi
    }

    /// Log-odds `log(pi_i / (1 - pi_i))`; infinite at the boundary.
    pub fn log_odds(&self) -> Vec<f64> {
        self.pi.iter().map(|p| (p / (1.0 - p)).ln()).collect()
    }
}
