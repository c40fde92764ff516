//! Scalar identities used by the lower-bound arguments.

use crate::error::{Error, Result};

/// `sqrt(uv) * exp(-|log(u/v)| / 2)`, which equals `min(u, v)` for positive
/// arguments.
pub fn min_identity(u: f64, v: f64) -> Result<f64> {
    if u.is_nan() || u <= 0.0 {
        return Err(Error::InvalidProbability { index: 0, value: u });
    }
    if v.is_nan() || v <= 0.0 {
        return Err(Error::InvalidProbability { index: 1, value: v });
    }
    Ok((u * v).sqrt() * (-0.5 * (u / v).ln().abs()).exp())
}

/// `[min(s, 1-t) + min(t, 1-s)] - 2 min(u, 1-u)` with `u = (s+t)/2`.
///
/// Never negative; the inequality is what makes the per-expert bound depend
/// only on the balanced accuracy.
pub fn balanced_min_inequality_gap(s: f64, t: f64) -> Result<f64> {
    for (index, value) in [(0, s), (1, t)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidProbability { index, value });
        }
    }
    let u = (s + t) / 2.0;
    Ok(s.min(1.0 - t) + t.min(1.0 - s) - 2.0 * u.min(1.0 - u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_identity_examples() {
        assert!((min_identity(1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((min_identity(4.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((min_identity(0.3, 0.7).unwrap() - 0.3).abs() < 1e-15);
        assert!(min_identity(0.0, 1.0).is_err());
        assert!(min_identity(1.0, -2.0).is_err());
    }

    #[test]
    fn gap_examples() {
        assert_eq!(balanced_min_inequality_gap(0.5, 0.5).unwrap(), 0.0);
        assert!(balanced_min_inequality_gap(0.3, 0.3).unwrap().abs() < 1e-15);
        assert_eq!(balanced_min_inequality_gap(1.0, 0.0).unwrap(), 0.0);
        assert!(balanced_min_inequality_gap(1.2, 0.0).is_err());
        assert!(balanced_min_inequality_gap(0.5, f64::NAN).is_err());
    }
}
