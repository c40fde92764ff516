//! The optimal (Neyman-Pearson) aggregation rule.
//!
//! Given votes `x`, the rule outputs 1 iff
//!
//! ```text
//! log(p_y / (1 - p_y)) + sum_i [x_i log(psi_i / (1 - eta_i)) + (1 - x_i) log((1 - psi_i) / eta_i)] >= 0
//! ```
//!
//! Ties go to 1. Parameters are clamped into `[eps, 1 - eps]` before taking
//! logs, so boundary experts get large finite weights instead of infinities.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::panel::ExpertPanel;

pub const DEFAULT_CLAMP_EPSILON: f64 = 1e-12;
const MAX_CLAMP_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionRule {
    /// `log(p_y / (1 - p_y))`.
    pub offset: f64,
    /// Weight added when expert `i` votes 1.
    pub w_pos: Vec<f64>,
    /// Weight added when expert `i` votes 0.
    pub w_neg: Vec<f64>,
    pub clamp_epsilon: f64,
}

pub fn build_rule(panel: &ExpertPanel, clamp_epsilon: f64) -> Result<DecisionRule> {
    if !(clamp_epsilon > 0.0 && clamp_epsilon <= MAX_CLAMP_EPSILON) {
        return Err(Error::InvalidClamp(clamp_epsilon));
    }
    let clamp = |v: f64| v.clamp(clamp_epsilon, 1.0 - clamp_epsilon);
    let p_y = clamp(panel.p_y());
    let (w_pos, w_neg) = panel
        .psi()
        .iter()
        .zip(panel.eta())
        .map(|(&psi, &eta)| {
            let (psi, eta) = (clamp(psi), clamp(eta));
            (psi.ln() - (1.0 - eta).ln(), (1.0 - psi).ln() - eta.ln())
        })
        .unzip();
    Ok(DecisionRule { offset: p_y.ln() - (1.0 - p_y).ln(), w_pos, w_neg, clamp_epsilon })
}

impl DecisionRule {
    pub fn from_panel(panel: &ExpertPanel) -> Self {
        build_rule(panel, DEFAULT_CLAMP_EPSILON).expect("default clamp epsilon is valid")
    }

    pub fn len(&self) -> usize {
        self.w_pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w_pos.is_empty()
    }

    /// Log posterior odds of `Y = 1` given votes `x`, accumulated in index order.
    pub fn score(&self, x: &[bool]) -> Result<f64> {
        self.check_len(x, 0)?;
        Ok(self.score_unchecked(x))
    }

    fn score_unchecked(&self, x: &[bool]) -> f64 {
        let mut s = self.offset;
        for ((&bit, &wp), &wn) in x.iter().zip(&self.w_pos).zip(&self.w_neg) {
            s += if bit { wp } else { wn };
        }
        s
    }

    fn check_len(&self, x: &[bool], index: usize) -> Result<()> {
        if x.len() != self.len() {
            return Err(Error::BitLength { index, expected: self.len(), got: x.len() });
        }
        Ok(())
    }

    pub fn decide(&self, x: &[bool]) -> Result<bool> {
        Ok(self.score(x)? >= 0.0)
    }

    /// Decide each vector in order; the first malformed vector aborts the
    /// batch and its index is reported.
    pub fn decide_batch<X: AsRef<[bool]>>(&self, xs: &[X]) -> Result<Vec<bool>> {
        xs.iter()
            .enumerate()
            .map(|(i, x)| {
                let x = x.as_ref();
                self.check_len(x, i)?;
                Ok(self.score_unchecked(x) >= 0.0)
            })
            .collect()
    }
}

/// Parse a vote string such as `"100"`; the leftmost character is expert 1.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::InvalidBits(s.to_string())),
        })
        .collect()
}

pub fn format_bits(x: &[bool]) -> String {
    x.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
