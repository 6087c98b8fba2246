//! Closed-form error bounds for equally weighted Gibbs ensembles.
//!
//! Setting: `m` hypothesis classifiers, each with `n` validation examples
//! drawn i.i.d. from the (unknown) deployment distribution, and a
//! confidence budget `delta`. A subset `S` of `s` classifiers forms the
//! ensemble. All bounds here control the gap between the ensemble's
//! average out-of-sample error rate and its average validation error rate,
//! each holding with probability at least `1 - delta` over the validation
//! draws.
//!
//! The building block is the capped width
//!
//! ```text
//! eps_hat(j, d) = min( sqrt( ln(m / (d * j)) / (2 n) ), 1 )
//! ```
//!
//! the width of a bound that is allowed to fail for up to `j` of the `m`
//! classifiers when certified at confidence `d` (`j = 0` is the plain
//! uniform bound). Allowing `j` failures buys a `ln j` reduction inside
//! the square root. Chaining several such bounds of increasing tightness,
//! each one covering the failures allowed by the next, produces
//! telescoping bounds; a geometric parameter schedule turns the chain into
//! a closed form whose analytic envelope depends on `m` and `s` only
//! through the ratio `m / s`.

use std::f64::consts::E;
use std::fmt;

use thiserror::Error;

/// Relative slack used when checking budget feasibility sums, so that
/// grid-reconstructed schedules (sums of `steps * increment` terms) are
/// not rejected for accumulated rounding on the order of a few ulps.
const FEASIBILITY_SLACK: f64 = 1e-9;

fn within_budget(total: f64, budget: f64) -> bool {
    total <= budget + FEASIBILITY_SLACK * budget.max(1.0)
}

/// Errors for bound construction and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("m must be a positive integer, got {0}")]
    InvalidM(u64),
    #[error("n must be a positive integer, got {0}")]
    InvalidN(u64),
    #[error("delta must be in (0, 1], got {0}")]
    InvalidDelta(f64),
    #[error("s must satisfy 1 <= s <= m, got s={s}, m={m}")]
    InvalidS { s: u64, m: u64 },
    #[error("j={j} out of range ({low} <= j <= {high})")]
    InvalidJ { j: f64, low: f64, high: f64 },
    #[error("c must be a positive finite real, got {0}")]
    InvalidC(f64),
    #[error("observed rate {rate} at index {index} is not a multiple of 1/n in [0, 1]")]
    InvalidObservedRate { index: usize, rate: f64 },
    #[error("expected {expected} observed validation rates, got {got}")]
    ObservedRateCount { expected: u64, got: usize },
    #[error("observed validation rates are required for this bound")]
    MissingObservedRates,
    #[error("schedule needs exactly t+1 delta values, got {t} j values and {deltas} delta values")]
    ScheduleShape { t: usize, deltas: usize },
    #[error("schedule values must be finite and nonnegative")]
    ScheduleNegative,
    #[error("schedule spends {spent} of the j budget, but s = {budget}")]
    ScheduleJBudget { spent: f64, budget: f64 },
    #[error("schedule spends {spent} of the delta budget {budget}")]
    ScheduleDeltaBudget { spent: f64, budget: f64 },
    #[error("disagreement rate must be in [0, 1], got {0}")]
    InvalidDisagreementRate(f64),
    #[error("decay rate {c} needs {stages} stages, over the supported 10^7")]
    TooManyStages { c: f64, stages: f64 },
}

/// The `(m, n, delta)` triple every bound is evaluated against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundContext {
    m: u64,
    n: u64,
    delta: f64,
}

impl BoundContext {
    /// Requires `m >= 1`, `n >= 1` and `0 < delta <= 1`.
    pub fn new(m: u64, n: u64, delta: f64) -> Result<Self, BoundError> {
        if m < 1 {
            return Err(BoundError::InvalidM(m));
        }
        if n < 1 {
            return Err(BoundError::InvalidN(n));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(BoundError::InvalidDelta(delta));
        }
        Ok(Self { m, n, delta })
    }

    /// Number of hypothesis classifiers.
    pub fn m(&self) -> u64 {
        self.m
    }

    /// Validation examples per classifier.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Total confidence budget.
    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// The selected ensemble: its size `s` and, optionally, the observed
/// validation error rates of its members.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    s: u64,
    observed_validation_errors: Option<Vec<f64>>,
}

impl EnsembleSpec {
    /// An ensemble of `s >= 1` classifiers with no observed rates.
    pub fn new(s: u64) -> Result<Self, BoundError> {
        if s < 1 {
            return Err(BoundError::InvalidS { s, m: u64::MAX });
        }
        Ok(Self {
            s,
            observed_validation_errors: None,
        })
    }

    /// An ensemble whose members' validation error rates were observed.
    /// One rate per member, `s = rates.len()`.
    pub fn with_observed_rates(rates: Vec<f64>) -> Result<Self, BoundError> {
        let s = rates.len() as u64;
        if s < 1 {
            return Err(BoundError::InvalidS { s, m: u64::MAX });
        }
        Ok(Self {
            s,
            observed_validation_errors: Some(rates),
        })
    }

    /// Number of selected classifiers.
    pub fn s(&self) -> u64 {
        self.s
    }

    /// Observed validation error rates, when present.
    pub fn observed_rates(&self) -> Option<&[f64]> {
        self.observed_validation_errors.as_deref()
    }

    /// Checks `1 <= s <= m` and that every observed rate is a multiple of
    /// `1/n` in `[0, 1]` (each rate is a count of errors over `n`).
    pub fn validate_against(&self, ctx: &BoundContext) -> Result<(), BoundError> {
        if self.s < 1 || self.s > ctx.m() {
            return Err(BoundError::InvalidS {
                s: self.s,
                m: ctx.m(),
            });
        }
        if let Some(rates) = self.observed_rates() {
            let n = ctx.n() as f64;
            for (index, &rate) in rates.iter().enumerate() {
                let scaled = rate * n;
                if !(0.0..=1.0).contains(&rate) || (scaled - scaled.round()).abs() > 1e-6 {
                    return Err(BoundError::InvalidObservedRate { index, rate });
                }
            }
        }
        Ok(())
    }
}

/// A telescoping parameterization: allowed-failure counts `j_1..j_t`
/// (fractional permitted) and confidence splits `delta_1..delta_{t+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    j_values: Vec<f64>,
    delta_values: Vec<f64>,
}

impl Schedule {
    /// Requires `delta_values.len() == j_values.len() + 1` and all entries
    /// finite and nonnegative. `delta_{t+1}` may be exactly zero.
    pub fn new(j_values: Vec<f64>, delta_values: Vec<f64>) -> Result<Self, BoundError> {
        if delta_values.len() != j_values.len() + 1 {
            return Err(BoundError::ScheduleShape {
                t: j_values.len(),
                deltas: delta_values.len(),
            });
        }
        let ok = |v: &f64| v.is_finite() && *v >= 0.0;
        if !j_values.iter().all(ok) || !delta_values.iter().all(ok) {
            return Err(BoundError::ScheduleNegative);
        }
        Ok(Self {
            j_values,
            delta_values,
        })
    }

    /// Stage count `t` (may be zero).
    pub fn stages(&self) -> usize {
        self.j_values.len()
    }

    pub fn j_values(&self) -> &[f64] {
        &self.j_values
    }

    pub fn delta_values(&self) -> &[f64] {
        &self.delta_values
    }

    /// Tail sums `tails[h] = j_{h+1} + ... + j_t` (0-based: sum of
    /// `j_values[h..]`), accumulated right to left. `tails[0]` is the
    /// total and `tails[t] = 0`. The optimizer composes schedules with
    /// exactly this accumulation order, so evaluation is bit-identical.
    fn j_tail_sums(&self) -> Vec<f64> {
        let t = self.j_values.len();
        let mut tails = vec![0.0; t + 1];
        for h in (0..t).rev() {
            tails[h] = self.j_values[h] + tails[h + 1];
        }
        tails
    }

    /// Total allowed failures across stages.
    pub fn total_j(&self) -> f64 {
        self.j_tail_sums()[0]
    }

    /// Total confidence spent.
    pub fn total_delta(&self) -> f64 {
        let mut total = 0.0;
        for &d in self.delta_values.iter().rev() {
            total += d;
        }
        total
    }

    /// Checks the budget invariants: `sum j <= s` and `sum delta <= delta`.
    pub fn validate_against(
        &self,
        ctx: &BoundContext,
        ens: &EnsembleSpec,
    ) -> Result<(), BoundError> {
        let total_j = self.total_j();
        let s = ens.s() as f64;
        if !within_budget(total_j, s) {
            return Err(BoundError::ScheduleJBudget {
                spent: total_j,
                budget: s,
            });
        }
        let total_delta = self.total_delta();
        if !within_budget(total_delta, ctx.delta()) {
            return Err(BoundError::ScheduleDeltaBudget {
                spent: total_delta,
                budget: ctx.delta(),
            });
        }
        Ok(())
    }
}

/// Which bound produced a [`BoundResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Uniform,
    NearlyUniform,
    EnsembleUniform,
    EnsembleNearlyUniform,
    EnsembleNearlyUniformObserved,
    Telescoping,
    ClosedForm,
    AnalyticEnvelope,
    FullClassifier,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::Uniform => "uniform",
            BoundKind::NearlyUniform => "nearly-uniform",
            BoundKind::EnsembleUniform => "ensemble-uniform",
            BoundKind::EnsembleNearlyUniform => "ensemble-nearly-uniform",
            BoundKind::EnsembleNearlyUniformObserved => "ensemble-nearly-uniform-observed",
            BoundKind::Telescoping => "telescoping",
            BoundKind::ClosedForm => "closed-form",
            BoundKind::AnalyticEnvelope => "analytic-envelope",
            BoundKind::FullClassifier => "full-classifier",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A bound width together with the confidence it was certified at.
///
/// `epsilon` is always `min(epsilon_raw, 1)`; the clamped value is the
/// authoritative one since error rates cannot exceed one.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    pub epsilon: f64,
    pub epsilon_raw: f64,
    pub delta_spent: f64,
    pub schedule: Option<Schedule>,
    pub kind: BoundKind,
}

impl BoundResult {
    fn new(
        epsilon_raw: f64,
        delta_spent: f64,
        schedule: Option<Schedule>,
        kind: BoundKind,
    ) -> Self {
        Self {
            epsilon: epsilon_raw.min(1.0),
            epsilon_raw,
            delta_spent,
            schedule,
            kind,
        }
    }
}

/// Hoeffding width for one classifier: `sqrt(ln(1/delta) / (2n))`.
///
/// Not clamped; the caller clamps where a rate interpretation is needed.
pub fn hoeffding_epsilon(n: u64, delta: f64) -> Result<f64, BoundError> {
    if n < 1 {
        return Err(BoundError::InvalidN(n));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(BoundError::InvalidDelta(delta));
    }
    Ok(((1.0 / delta).ln() / (2.0 * n as f64)).sqrt())
}

/// Uniform bound width: with probability at least `1 - delta`, every one
/// of the `m` classifiers satisfies `p*_i < p_i + epsilon` with
/// `epsilon = sqrt(ln(m/delta) / (2n))`.
pub fn uniform_epsilon(ctx: &BoundContext) -> BoundResult {
    let raw = ((ctx.m() as f64 / ctx.delta()).ln() / (2.0 * ctx.n() as f64)).sqrt();
    BoundResult::new(raw, ctx.delta(), None, BoundKind::Uniform)
}

/// Nearly uniform bound width: with probability at least `1 - delta`, at
/// most `j` classifiers violate `p*_i < p_i + epsilon` with
/// `epsilon = sqrt(ln(m/(delta j)) / (2n))`. Fractional `j` is permitted.
pub fn nearly_uniform_epsilon(ctx: &BoundContext, j: f64) -> Result<BoundResult, BoundError> {
    if !(j > 0.0 && j <= ctx.m() as f64) {
        return Err(BoundError::InvalidJ {
            j,
            low: 0.0,
            high: ctx.m() as f64,
        });
    }
    let raw = ((ctx.m() as f64 / (ctx.delta() * j)).ln() / (2.0 * ctx.n() as f64)).sqrt();
    Ok(BoundResult::new(
        raw,
        ctx.delta(),
        None,
        BoundKind::NearlyUniform,
    ))
}

/// The capped width `min(sqrt(ln(m/(delta_part * j)) / (2n)), 1)` used as
/// the building block of the ensemble bounds.
///
/// Edge semantics: `j = 0` is the uniform backstop `min(sqrt(ln(m /
/// delta_part) / (2n)), 1)`; any `delta_part <= 0` yields 1 (a divergent
/// argument, capped), so in particular `eps_hat(0, 0) = 1`. Total on
/// `j >= 0`, `0 <= delta_part <= 1`.
pub fn epsilon_hat(ctx: &BoundContext, j: f64, delta_part: f64) -> f64 {
    debug_assert!(j >= 0.0, "epsilon_hat: j must be nonnegative");
    // Grid-reconstructed budgets (steps * increment) may overshoot 1 by an
    // ulp; anything beyond that is a caller bug.
    debug_assert!(
        (0.0..=1.0 + 1e-9).contains(&delta_part),
        "epsilon_hat: delta_part must be in [0, 1]"
    );
    if delta_part <= 0.0 {
        return 1.0;
    }
    let m = ctx.m() as f64;
    let arg = if j == 0.0 {
        m / delta_part
    } else {
        m / (delta_part * j)
    };
    (arg.ln().max(0.0) / (2.0 * ctx.n() as f64)).sqrt().min(1.0)
}

/// Bound on the ensemble-average gap `E_S p*_i - E_S p_i` built from the
/// uniform bound; the width is identical to [`uniform_epsilon`].
pub fn ensemble_uniform_epsilon(
    ctx: &BoundContext,
    ens: &EnsembleSpec,
) -> Result<BoundResult, BoundError> {
    ens.validate_against(ctx)?;
    let uniform = uniform_epsilon(ctx);
    Ok(BoundResult::new(
        uniform.epsilon_raw,
        ctx.delta(),
        None,
        BoundKind::EnsembleUniform,
    ))
}

/// A-priori ensemble bound from a nearly uniform bound allowing `j`
/// failures: width `(1 - j/s) * eps_hat(j, delta) + j/s`, charging each
/// allowed failure the trivial error rate of one.
pub fn ensemble_nearly_uniform_epsilon(
    ctx: &BoundContext,
    ens: &EnsembleSpec,
    j: f64,
) -> Result<BoundResult, BoundError> {
    ens.validate_against(ctx)?;
    let s = ens.s() as f64;
    if !(0.0..=s).contains(&j) {
        return Err(BoundError::InvalidJ {
            j,
            low: 0.0,
            high: s,
        });
    }
    let raw = (1.0 - j / s) * epsilon_hat(ctx, j, ctx.delta()) + j / s;
    Ok(BoundResult::new(
        raw,
        ctx.delta(),
        None,
        BoundKind::EnsembleNearlyUniform,
    ))
}

/// Observed-rate refinement of [`ensemble_nearly_uniform_epsilon`]: the
/// `j` allowed failures are charged `1 - E_L p_i` instead of one, where
/// `L` indexes the `j` members with the least observed validation error
/// (ties broken by ascending index). Requires integer `j`, since `L` is a
/// set of `j` classifiers. Never exceeds the a-priori form at equal
/// `(j, delta)`.
pub fn ensemble_nearly_uniform_epsilon_observed(
    ctx: &BoundContext,
    ens: &EnsembleSpec,
    j: u64,
) -> Result<BoundResult, BoundError> {
    ens.validate_against(ctx)?;
    let rates = ens
        .observed_rates()
        .ok_or(BoundError::MissingObservedRates)?;
    if rates.len() as u64 != ens.s() {
        return Err(BoundError::ObservedRateCount {
            expected: ens.s(),
            got: rates.len(),
        });
    }
    let s = ens.s() as f64;
    if j < 1 || j > ens.s() {
        return Err(BoundError::InvalidJ {
            j: j as f64,
            low: 1.0,
            high: s,
        });
    }
    let mut order: Vec<usize> = (0..rates.len()).collect();
    order.sort_by(|&a, &b| rates[a].total_cmp(&rates[b]).then(a.cmp(&b)));
    let least_sum: f64 = order[..j as usize].iter().map(|&i| rates[i]).sum();
    let mean_least = least_sum / j as f64;
    let jf = j as f64;
    let raw = (1.0 - jf / s) * epsilon_hat(ctx, jf, ctx.delta()) + (jf / s) * (1.0 - mean_least);
    Ok(BoundResult::new(
        raw,
        ctx.delta(),
        None,
        BoundKind::EnsembleNearlyUniformObserved,
    ))
}

/// Telescoping bound: a chain of nearly uniform bounds of increasing
/// tightness, each covering the failures allowed by the next, with the
/// uniform backstop covering the final allowed failures.
///
/// ```text
/// epsilon = (1 - sum(j)/s) * eps_hat(j_1 + .. + j_t, delta_1)
///         + sum over h of (j_h/s) * eps_hat(j_{h+1} + .. + j_t, delta_{h+1})
/// ```
///
/// The empty tail sum is zero, so the last term is
/// `(j_t/s) * eps_hat(0, delta_{t+1})`.
pub fn telescoping_epsilon(
    ctx: &BoundContext,
    ens: &EnsembleSpec,
    schedule: &Schedule,
) -> Result<BoundResult, BoundError> {
    ens.validate_against(ctx)?;
    schedule.validate_against(ctx, ens)?;
    let s = ens.s() as f64;
    let j = schedule.j_values();
    let d = schedule.delta_values();
    let tails = schedule.j_tail_sums();
    // Accumulated right to left so that evaluation composes bit-identically
    // with the optimizer's value recurrence.
    let mut acc = 0.0;
    for h in (0..j.len()).rev() {
        acc += (j[h] / s) * epsilon_hat(ctx, tails[h + 1], d[h + 1]);
    }
    let raw = (1.0 - tails[0] / s) * epsilon_hat(ctx, tails[0], d[0]) + acc;
    Ok(BoundResult::new(
        raw,
        schedule.total_delta(),
        Some(schedule.clone()),
        BoundKind::Telescoping,
    ))
}

/// Geometric schedule for a chosen decay rate `c > 0`:
/// `t = ceil(ln(2n) / (2c))`, `j_i = s / e^(c i)` (fractional),
/// `delta_i = (e - 1) delta / e^i`, and `delta_{t+1} = 0`.
///
/// The delta budget is always underspent (`sum delta_i < delta`). The j
/// budget satisfies `sum j_i < s` only when `c > ln 2`; for smaller `c`
/// the schedule is not feasible for [`telescoping_epsilon`], though
/// [`epsilon_star`] still evaluates its closed form directly.
pub fn closed_form_schedule(
    ctx: &BoundContext,
    ens: &EnsembleSpec,
    c: f64,
) -> Result<Schedule, BoundError> {
    ens.validate_against(ctx)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(BoundError::InvalidC(c));
    }
    let stages = ((2.0 * ctx.n() as f64).ln() / (2.0 * c)).ceil();
    if stages > 1e7 {
        return Err(BoundError::TooManyStages { c, stages });
    }
    let t = stages as usize;
    let s = ens.s() as f64;
    let delta = ctx.delta();
    let j_values: Vec<f64> = (1..=t).map(|i| s / (c * i as f64).exp()).collect();
    let mut delta_values: Vec<f64> = (1..=t)
        .map(|i| (E - 1.0) * delta / (i as f64).exp())
        .collect();
    delta_values.push(0.0);
    Schedule::new(j_values, delta_values)
}

/// Stage count of the geometric schedule: the minimum integer `t` with
/// `e^(t c) >= sqrt(2n)`.
pub fn closed_form_stage_count(n: u64, c: f64) -> usize {
    ((2.0 * n as f64).ln() / (2.0 * c)).ceil() as usize
}

/// Closed-form telescoping bound width for decay rate `c`:
///
/// ```text
/// epsilon_star = sum over i of e^(-c(i-1)) * eps_hat(s/e^(ci), (e-1) delta / e^i)
///              + e^(-ct) * eps_hat(0, 0)
/// ```
///
/// The result records the geometric schedule and its actual delta
/// expenditure. The final term is at most `1/sqrt(2n)` by the choice of
/// `t`, since `eps_hat(0, 0) = 1`.
pub fn epsilon_star(
    ctx: &BoundContext,
    ens: &EnsembleSpec,
    c: f64,
) -> Result<BoundResult, BoundError> {
    let schedule = closed_form_schedule(ctx, ens, c)?;
    let t = schedule.stages();
    let s = ens.s() as f64;
    let delta = ctx.delta();
    let mut raw = 0.0;
    for i in 1..=t {
        let j_i = s / (c * i as f64).exp();
        let delta_i = (E - 1.0) * delta / (i as f64).exp();
        raw += (-c * (i as f64 - 1.0)).exp() * epsilon_hat(ctx, j_i, delta_i);
    }
    raw += (-c * t as f64).exp() * epsilon_hat(ctx, 0.0, 0.0);
    let delta_spent = schedule.total_delta();
    Ok(BoundResult::new(
        raw,
        delta_spent,
        Some(schedule),
        BoundKind::ClosedForm,
    ))
}

/// Analytic envelope of [`epsilon_star`]:
///
/// ```text
/// (1/sqrt(2n)) * [ sqrt(ln(m/s) + ln(1/delta)) * K + sqrt(c+1) * K^2 + 1 ]
/// ```
///
/// with `K = e^c / (e^c - 1)`. The `ln(m/s)` term is the price of
/// selectivity; the expression depends on `m` and `s` only through their
/// ratio, so growing the hypothesis set at a fixed selection fraction does
/// not loosen the bound.
pub fn epsilon_star_analytic_bound(
    ctx: &BoundContext,
    ens: &EnsembleSpec,
    c: f64,
) -> Result<BoundResult, BoundError> {
    ens.validate_against(ctx)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(BoundError::InvalidC(c));
    }
    let n = ctx.n() as f64;
    let delta = ctx.delta();
    // ln(m/s) computed on the ratio so that scaling m and s together is
    // bit-exact.
    let ratio = ctx.m() as f64 / ens.s() as f64;
    let k = c.exp() / (c.exp() - 1.0);
    let raw = (1.0 / (2.0 * n).sqrt())
        * ((ratio.ln() + (1.0 / delta).ln()).sqrt() * k + (c + 1.0).sqrt() * k * k + 1.0);
    Ok(BoundResult::new(
        raw,
        delta,
        None,
        BoundKind::AnalyticEnvelope,
    ))
}

/// Coefficients of the analytic envelope: `(K, sqrt(c+1) * K^2 + 1)` with
/// `K = e^c / (e^c - 1)`, the multiplier of the square-root term and the
/// additive constant.
pub fn analytic_envelope_coefficients(c: f64) -> Result<(f64, f64), BoundError> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(BoundError::InvalidC(c));
    }
    let k = c.exp() / (c.exp() - 1.0);
    Ok((k, (c + 1.0).sqrt() * k * k + 1.0))
}

/// Extends a Gibbs ensemble bound to the single full classifier trained
/// on all in-sample data: the full classifier errs at most whenever the
/// Gibbs classifier errs or the two disagree, so the bound grows by the
/// disagreement rate (clamped at one).
pub fn extend_full_classifier_bound(
    gibbs_bound: &BoundResult,
    disagreement_rate: f64,
) -> Result<BoundResult, BoundError> {
    if !(0.0..=1.0).contains(&disagreement_rate) {
        return Err(BoundError::InvalidDisagreementRate(disagreement_rate));
    }
    Ok(BoundResult::new(
        gibbs_bound.epsilon + disagreement_rate,
        gibbs_bound.delta_spent,
        gibbs_bound.schedule.clone(),
        BoundKind::FullClassifier,
    ))
}
