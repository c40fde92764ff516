//! Optimal aggregation of conditionally independent binary experts.
//!
//! A panel of experts votes on a hidden bit `Y`; each expert has a known
//! sensitivity and specificity. This crate builds the likelihood-ratio
//! aggregation rule, computes its exact error probability by enumerating
//! `{0,1}^n`, estimates it by simulation when `n` is large, and evaluates
//! closed-form upper and lower bounds on it.
//!
//! ```
//! use nbvote::{bounds, exact, ExpertPanel};
//!
//! let panel = ExpertPanel::new(vec![1.0, 0.0], vec![0.9, 0.1], 0.5).unwrap();
//! let err = exact::optimal_error(&panel).unwrap();
//! assert!((err - 0.005).abs() < 1e-12);
//! assert!(bounds::lower_bound_thm3(&panel) <= err + 1e-12);
//! assert!(err <= bounds::upper_bound_thm2(&panel));
//! ```

pub mod bounds;
pub mod error;
pub mod exact;
pub mod identities;
pub mod montecarlo;
pub mod panel;
pub mod rule;

pub use bounds::{BoundsReport, CounterexampleKind, SweepRow};
pub use error::{Error, PanelIssue, Result};
pub use exact::{AffinityResult, Enumerator, Method, NormOrder};
pub use montecarlo::{MinMassEstimate, SimulationResult};
pub use panel::{fold_bias, validate_panel, BalancedAccuracy, ExpertPanel, ProductBernoulli, RawPanel};
pub use rule::{build_rule, DecisionRule};
