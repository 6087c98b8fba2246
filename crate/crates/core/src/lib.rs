//! Error bounds for equally weighted Gibbs ensemble classifiers.
//!
//! A Gibbs ensemble classifies an input by drawing one of its member
//! classifiers uniformly at random and using that member's prediction, so
//! its out-of-sample error rate is the average member error rate. This
//! crate computes provably valid upper bounds on the gap between that
//! average and the average validation error rate observed for the members:
//!
//! - [`bounds`] — closed-form bound evaluation: uniform, nearly uniform,
//!   ensemble averages, telescoping chains, a geometric closed-form
//!   schedule, its analytic envelope, and the disagreement-rate extension
//!   to full (all-data) classifiers.
//! - [`telescope`] — dynamic-programming optimization of telescoping-bound
//!   parameters over a discretized candidate grid, with an exhaustive
//!   search oracle.
//! - [`knn`] — exact average holdout error of the k-nearest-neighbor Gibbs
//!   classifier over all train/holdout splits, with a split-enumeration
//!   oracle.
//! - [`simulate`] — Monte Carlo harness that measures empirical
//!   bound-violation frequencies against synthetic classifier populations.
//!
//! Every operation is a pure function of its arguments; all arithmetic is
//! 64-bit binary floating point.

pub mod bounds;
pub mod knn;
pub mod simulate;
pub mod telescope;

pub use bounds::{BoundContext, BoundKind, BoundResult, EnsembleSpec, Schedule};
