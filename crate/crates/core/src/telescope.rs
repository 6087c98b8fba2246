//! Telescoping-schedule optimization over a discretized candidate grid.
//!
//! The telescoping bound is a function of `t` allowed-failure counts
//! `j_1..j_t` and `t + 1` confidence splits `delta_1..delta_{t+1}`. This
//! module minimizes it by dynamic programming over a grid: candidate `j`
//! values are either the integers `{0..s}` or an explicit list, and
//! candidate `delta` values are integer multiples of a fixed increment.
//!
//! Working from the last term leftward, the value function
//!
//! ```text
//! v(i, sum_j, sum_delta) = min over allocations of stages i..t
//!     of the partial bound, given sum_j and sum_delta remain
//! ```
//!
//! has base case `v(t, sum_j, sum_delta) = (sum_j / s) * eps_hat(0,
//! sum_delta)` and recurrence minimizing over the stage-`i` choice
//! `(j_i, delta_{i+1})`; a final sweep over `(sum_j, delta_1)` closes the
//! chain. Cumulative deltas are indexed by integer step counts so state
//! matching is exact, and partial values compose in the same order
//! [`telescoping_epsilon`] evaluates, so the optimizer's minimum equals
//! the re-evaluated bound of the schedule it returns, bit for bit. The
//! exhaustive [`brute_force_optimize`] enumerates the same grid and is the
//! verification oracle.

use std::collections::HashMap;

use thiserror::Error;

use crate::bounds::{
    epsilon_hat, telescoping_epsilon, BoundContext, BoundError, BoundResult, EnsembleSpec, Schedule,
};

/// Default spacing of candidate delta values.
pub const DEFAULT_DELTA_INCREMENT: f64 = 1e-4;

/// Default ceiling on table cells (optimizer) and enumerated schedules
/// (oracle).
pub const DEFAULT_CAP: u64 = 10_000_000;

/// Errors from schedule optimization.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizeError {
    #[error("stage count t must be at least 1")]
    InvalidStages,
    #[error("delta increment must be a positive finite real, got {0}")]
    InvalidIncrement(f64),
    #[error(
        "delta increment {increment} leaves fewer than 2 candidate points in a budget of {budget}"
    )]
    IncrementTooCoarse { increment: f64, budget: f64 },
    #[error("no j candidates")]
    EmptyGrid,
    #[error("j candidate {0} is not a finite value in [0, s]")]
    CandidateOutOfRange(f64),
    #[error("grid requires {required} units of work, over the cap of {cap}")]
    CapExceeded { required: u128, cap: u64 },
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// Candidate allowed-failure counts for each stage.
#[derive(Debug, Clone, PartialEq)]
pub enum JCandidates {
    /// The integers `0..=s` of the associated ensemble.
    Integers,
    /// An explicit set of nonnegative reals, each at most `s`.
    Explicit(Vec<f64>),
}

/// The discretized search space: a stage count, a delta spacing, and the
/// `j` candidates shared by every stage.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerGrid {
    stages: usize,
    delta_increment: f64,
    j_candidates: JCandidates,
}

impl OptimizerGrid {
    pub fn new(
        stages: usize,
        delta_increment: f64,
        j_candidates: JCandidates,
    ) -> Result<Self, OptimizeError> {
        if stages < 1 {
            return Err(OptimizeError::InvalidStages);
        }
        if !(delta_increment > 0.0 && delta_increment.is_finite()) {
            return Err(OptimizeError::InvalidIncrement(delta_increment));
        }
        if let JCandidates::Explicit(values) = &j_candidates {
            if values.is_empty() {
                return Err(OptimizeError::EmptyGrid);
            }
            for &v in values {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(OptimizeError::CandidateOutOfRange(v));
                }
            }
        }
        Ok(Self {
            stages,
            delta_increment,
            j_candidates,
        })
    }

    /// Integer candidates `{0..s}` with the given spacing.
    pub fn integers(stages: usize, delta_increment: f64) -> Result<Self, OptimizeError> {
        Self::new(stages, delta_increment, JCandidates::Integers)
    }

    /// Geometric fractional candidates `{0} + {s / e^(c i) : 1 <= i <= stages}`,
    /// reaching the closed-form schedules.
    pub fn geometric(
        stages: usize,
        delta_increment: f64,
        c: f64,
        s: u64,
    ) -> Result<Self, OptimizeError> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(OptimizeError::CandidateOutOfRange(c));
        }
        let mut values = vec![0.0];
        for i in 1..=stages {
            values.push(s as f64 / (c * i as f64).exp());
        }
        Self::new(stages, delta_increment, JCandidates::Explicit(values))
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn delta_increment(&self) -> f64 {
        self.delta_increment
    }

    pub fn j_candidates(&self) -> &JCandidates {
        &self.j_candidates
    }

    /// Sorted, deduplicated candidate values, each validated against `s`.
    fn resolve_candidates(&self, s: u64) -> Result<Vec<f64>, OptimizeError> {
        let mut values = match &self.j_candidates {
            JCandidates::Integers => (0..=s).map(|v| v as f64).collect::<Vec<_>>(),
            JCandidates::Explicit(values) => {
                for &v in values {
                    if !(v.is_finite() && (0.0..=s as f64).contains(&v)) {
                        return Err(OptimizeError::CandidateOutOfRange(v));
                    }
                }
                values.clone()
            }
        };
        values.sort_by(f64::total_cmp);
        values.dedup_by(|a, b| a.to_bits() == b.to_bits());
        if values.is_empty() {
            return Err(OptimizeError::EmptyGrid);
        }
        Ok(values)
    }

    /// Number of whole increments that fit in the budget. A nudge of 1e-9
    /// increments absorbs quotient rounding (0.1 / 0.01 = 9.999…).
    fn total_steps(&self, budget: f64) -> Result<usize, OptimizeError> {
        let steps = (budget / self.delta_increment + 1e-9).floor() as usize;
        if steps < 1 {
            return Err(OptimizeError::IncrementTooCoarse {
                increment: self.delta_increment,
                budget,
            });
        }
        Ok(steps)
    }
}

fn j_budget_allows(sum: f64, s: f64) -> bool {
    // Matches Schedule::validate_against so the optimizer never emits a
    // schedule that telescoping_epsilon rejects.
    sum <= s + 1e-9 * s.max(1.0)
}

/// The optimizer's value function, tabulated densely over
/// `(stage, cumulative j, cumulative delta steps)`.
///
/// Stage indices are 1-based to match the recurrence; `states(i)` lists
/// the reachable tail sums `j_i + ... + j_t` in ascending order, and
/// `value(i, state_idx, steps)` is the best partial bound for stages
/// `i..=t` given that tail sum and `steps` increments of delta remaining.
#[derive(Debug, Clone)]
pub struct ValueTable {
    stages: usize,
    delta_increment: f64,
    total_steps: usize,
    s: f64,
    candidates: Vec<f64>,
    /// stage_states[i-1][idx] = a reachable tail sum at stage i.
    stage_states: Vec<Vec<f64>>,
    /// values[i-1][idx][steps].
    values: Vec<Vec<Vec<f64>>>,
    /// choices[i-1][idx][steps] = (candidate idx, successor state idx,
    /// delta_{i+1} steps); absent for the base stage.
    choices: Vec<Vec<Vec<(u32, u32, u32)>>>,
    /// eps[i-1][idx][steps] = eps_hat(state value, steps * increment).
    state_eps: Vec<Vec<Vec<f64>>>,
}

impl ValueTable {
    /// Builds the table, or fails if the grid exceeds `cap` cells.
    pub fn build(
        ctx: &BoundContext,
        ens: &EnsembleSpec,
        grid: &OptimizerGrid,
        cap: u64,
    ) -> Result<Self, OptimizeError> {
        ens.validate_against(ctx)?;
        let t = grid.stages();
        let s = ens.s() as f64;
        let candidates = grid.resolve_candidates(ens.s())?;
        let total_steps = grid.total_steps(ctx.delta())?;

        // Reachable tail sums per stage, built from stage t backward.
        // transitions[i-1][state_idx] lists (candidate idx, successor idx)
        // pairs that produce the state; at stage t the successor is the
        // empty suffix.
        let mut stage_states: Vec<Vec<f64>> = vec![Vec::new(); t];
        let mut transitions: Vec<Vec<Vec<(u32, u32)>>> = vec![Vec::new(); t];

        let feasible: Vec<f64> = candidates
            .iter()
            .copied()
            .filter(|&v| j_budget_allows(v, s))
            .collect();
        stage_states[t - 1] = feasible;
        let mut cells: u128 = 0;
        for i in (1..=t).rev() {
            let idx = i - 1;
            if i < t {
                let succ = stage_states[idx + 1].clone();
                let pair_count = candidates.len() as u128 * succ.len() as u128;
                if pair_count > cap as u128 {
                    return Err(OptimizeError::CapExceeded {
                        required: pair_count,
                        cap,
                    });
                }
                let mut sums: Vec<f64> = Vec::new();
                for &cand in &candidates {
                    for &tail in &succ {
                        let sum = cand + tail;
                        if j_budget_allows(sum, s) {
                            sums.push(sum);
                        }
                    }
                }
                sums.sort_by(f64::total_cmp);
                sums.dedup_by(|a, b| a.to_bits() == b.to_bits());

                let lookup: HashMap<u64, usize> = sums
                    .iter()
                    .enumerate()
                    .map(|(k, v)| (v.to_bits(), k))
                    .collect();
                let mut trans = vec![Vec::new(); sums.len()];
                for (ci, &cand) in candidates.iter().enumerate() {
                    for (si, &tail) in succ.iter().enumerate() {
                        let sum = cand + tail;
                        if let Some(&state) = lookup.get(&sum.to_bits()) {
                            trans[state].push((ci as u32, si as u32));
                        }
                    }
                }
                stage_states[idx] = sums;
                transitions[idx] = trans;
            }
            cells += stage_states[idx].len() as u128 * (total_steps as u128 + 1);
            if cells > cap as u128 {
                return Err(OptimizeError::CapExceeded {
                    required: cells,
                    cap,
                });
            }
        }

        // eps_hat of every state value at every delta step, shared by the
        // recurrence and the final sweep.
        let increment = grid.delta_increment();
        let state_eps: Vec<Vec<Vec<f64>>> = stage_states
            .iter()
            .map(|states| {
                states
                    .iter()
                    .map(|&value| {
                        (0..=total_steps)
                            .map(|d| epsilon_hat(ctx, value, d as f64 * increment))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let zero_eps: Vec<f64> = (0..=total_steps)
            .map(|d| epsilon_hat(ctx, 0.0, d as f64 * increment))
            .collect();

        let mut values: Vec<Vec<Vec<f64>>> = vec![Vec::new(); t];
        let mut choices: Vec<Vec<Vec<(u32, u32, u32)>>> = vec![Vec::new(); t];

        // Base stage: everything remaining goes to delta_{t+1}.
        values[t - 1] = stage_states[t - 1]
            .iter()
            .map(|&tail| {
                (0..=total_steps)
                    .map(|d| (tail / s) * zero_eps[d])
                    .collect()
            })
            .collect();

        for i in (1..t).rev() {
            let idx = i - 1;
            let succ_values = &values[idx + 1];
            let succ_eps = &state_eps[idx + 1];
            let mut stage_vals = Vec::with_capacity(stage_states[idx].len());
            let mut stage_choice = Vec::with_capacity(stage_states[idx].len());
            for trans in &transitions[idx] {
                let mut per_steps = vec![f64::INFINITY; total_steps + 1];
                let mut per_choice = vec![(0u32, 0u32, 0u32); total_steps + 1];
                for steps in 0..=total_steps {
                    let mut best = f64::INFINITY;
                    let mut best_choice = (0u32, 0u32, 0u32);
                    for &(ci, si) in trans {
                        let coeff = candidates[ci as usize] / s;
                        let eps_row = &succ_eps[si as usize];
                        let val_row = &succ_values[si as usize];
                        for d in 0..=steps {
                            let v = coeff * eps_row[d] + val_row[steps - d];
                            if v < best {
                                best = v;
                                best_choice = (ci, si, d as u32);
                            }
                        }
                    }
                    per_steps[steps] = best;
                    per_choice[steps] = best_choice;
                }
                stage_vals.push(per_steps);
                stage_choice.push(per_choice);
            }
            values[idx] = stage_vals;
            choices[idx] = stage_choice;
        }

        Ok(Self {
            stages: t,
            delta_increment: increment,
            total_steps,
            s,
            candidates,
            stage_states,
            values,
            choices,
            state_eps,
        })
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn delta_increment(&self) -> f64 {
        self.delta_increment
    }

    /// Number of delta increments in the budget; cumulative delta states
    /// run `0..=total_delta_steps()`.
    pub fn total_delta_steps(&self) -> usize {
        self.total_steps
    }

    /// Reachable tail sums at stage `i` (1-based), ascending.
    pub fn states(&self, stage: usize) -> &[f64] {
        &self.stage_states[stage - 1]
    }

    /// `v(stage, states(stage)[state_idx], steps * delta_increment)`.
    pub fn value(&self, stage: usize, state_idx: usize, steps: usize) -> f64 {
        self.values[stage - 1][state_idx][steps]
    }
}

/// Optimizes the telescoping bound over the grid by dynamic programming.
///
/// Returns the minimizing schedule and its bound; the bound is
/// re-evaluated through [`telescoping_epsilon`] and equals the table
/// minimum exactly. Errors if the grid exceeds the default cell cap.
pub fn optimize_schedule(
    ctx: &BoundContext,
    ens: &EnsembleSpec,
    grid: &OptimizerGrid,
) -> Result<(Schedule, BoundResult), OptimizeError> {
    optimize_schedule_with_cap(ctx, ens, grid, DEFAULT_CAP)
}

/// [`optimize_schedule`] with an explicit cell cap.
pub fn optimize_schedule_with_cap(
    ctx: &BoundContext,
    ens: &EnsembleSpec,
    grid: &OptimizerGrid,
    cap: u64,
) -> Result<(Schedule, BoundResult), OptimizeError> {
    let table = ValueTable::build(ctx, ens, grid, cap)?;
    let t = table.stages;
    let total = table.total_steps;
    let s = table.s;

    // Final step: sweep the stage-1 tail sum and delta_1.
    let mut best = f64::INFINITY;
    let mut best_state = 0usize;
    let mut best_d1 = 0usize;
    for (state, &sum) in table.stage_states[0].iter().enumerate() {
        let eps_row = &table.state_eps[0][state];
        let val_row = &table.values[0][state];
        for d1 in 0..=total {
            let v = (1.0 - sum / s) * eps_row[d1] + val_row[total - d1];
            if v < best {
                best = v;
                best_state = state;
                best_d1 = d1;
            }
        }
    }

    // Walk the recorded choices to reconstruct the schedule.
    let increment = table.delta_increment;
    let mut j_values = Vec::with_capacity(t);
    let mut delta_values = Vec::with_capacity(t + 1);
    delta_values.push(best_d1 as f64 * increment);
    let mut state = best_state;
    let mut remaining = total - best_d1;
    for i in 1..t {
        let (ci, si, d) = table.choices[i - 1][state][remaining];
        j_values.push(table.candidates[ci as usize]);
        delta_values.push(d as f64 * increment);
        state = si as usize;
        remaining -= d as usize;
    }
    // The base stage holds exactly j_t and spends the rest on delta_{t+1}.
    j_values.push(table.stage_states[t - 1][state]);
    delta_values.push(remaining as f64 * increment);

    let schedule = Schedule::new(j_values, delta_values)?;
    let result = telescoping_epsilon(ctx, ens, &schedule)?;
    debug_assert_eq!(result.epsilon_raw, best);
    Ok((schedule, result))
}

/// Exhaustively enumerates every grid schedule with the full delta budget
/// spent, evaluating each through [`telescoping_epsilon`]. Ties go to the
/// lexicographically smallest `(j_1..j_t, delta_1..delta_{t+1})`. This is
/// the verification oracle for [`optimize_schedule`].
pub fn brute_force_optimize(
    ctx: &BoundContext,
    ens: &EnsembleSpec,
    grid: &OptimizerGrid,
) -> Result<(Schedule, BoundResult), OptimizeError> {
    brute_force_optimize_with_cap(ctx, ens, grid, DEFAULT_CAP)
}

/// [`brute_force_optimize`] with an explicit enumeration cap.
pub fn brute_force_optimize_with_cap(
    ctx: &BoundContext,
    ens: &EnsembleSpec,
    grid: &OptimizerGrid,
    cap: u64,
) -> Result<(Schedule, BoundResult), OptimizeError> {
    ens.validate_against(ctx)?;
    let t = grid.stages();
    let s = ens.s() as f64;
    let candidates = grid.resolve_candidates(ens.s())?;
    let total_steps = grid.total_steps(ctx.delta())?;

    let tuples = (candidates.len() as u128).checked_pow(t as u32);
    let splits = compositions(total_steps as u128, t as u128);
    let required = tuples
        .zip(splits)
        .and_then(|(a, b)| a.checked_mul(b))
        .unwrap_or(u128::MAX);
    if required > cap as u128 {
        return Err(OptimizeError::CapExceeded { required, cap });
    }

    let increment = grid.delta_increment();
    let mut best: Option<(Schedule, BoundResult)> = None;

    let mut j_idx = vec![0usize; t];
    loop {
        let j_values: Vec<f64> = j_idx.iter().map(|&k| candidates[k]).collect();
        // Tail sum, accumulated right to left exactly as evaluation does.
        let mut tail = 0.0;
        for &j in j_values.iter().rev() {
            tail += j;
        }
        if j_budget_allows(tail, s) {
            let mut d_steps = vec![0usize; t + 1];
            d_steps[t] = total_steps;
            loop {
                let delta_values: Vec<f64> =
                    d_steps.iter().map(|&d| d as f64 * increment).collect();
                let schedule = Schedule::new(j_values.clone(), delta_values)?;
                let result = telescoping_epsilon(ctx, ens, &schedule)?;
                if best
                    .as_ref()
                    .is_none_or(|(_, b)| result.epsilon_raw < b.epsilon_raw)
                {
                    best = Some((schedule, result));
                }
                if !next_composition(&mut d_steps) {
                    break;
                }
            }
        }
        if !next_odometer(&mut j_idx, candidates.len()) {
            break;
        }
    }

    best.ok_or(OptimizeError::EmptyGrid)
}

/// Number of ways to split `steps` increments across `t + 1` ordered
/// parts: C(steps + t, t).
fn compositions(steps: u128, t: u128) -> Option<u128> {
    let mut result: u128 = 1;
    for k in 1..=t {
        result = result.checked_mul(steps + k)?;
        result /= k;
    }
    Some(result)
}

/// Advances `idx` through base-`radix` counting, leftmost digit most
/// significant, so tuples are visited in lexicographic order.
fn next_odometer(idx: &mut [usize], radix: usize) -> bool {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < radix {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Advances a composition (d_1..d_k) with fixed sum to its lexicographic
/// successor: bump the rightmost position with mass to its right, zero
/// everything between it and the end, and park the rest in the last slot.
fn next_composition(d: &mut [usize]) -> bool {
    let k = d.len();
    let mut suffix = 0usize;
    for p in (0..k.saturating_sub(1)).rev() {
        suffix += d[p + 1];
        if suffix > 0 {
            d[p] += 1;
            for slot in &mut d[p + 1..k - 1] {
                *slot = 0;
            }
            d[k - 1] = suffix - 1;
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::epsilon_hat;

    fn ctx(m: u64, n: u64, delta: f64) -> BoundContext {
        BoundContext::new(m, n, delta).unwrap()
    }

    #[test]
    fn composition_iteration_is_lexicographic_and_complete() {
        let mut d = vec![0usize, 0, 3];
        let mut seen = vec![d.clone()];
        while next_composition(&mut d) {
            seen.push(d.clone());
        }
        // C(3 + 2, 2) = 10 compositions of 3 into 3 parts.
        assert_eq!(seen.len(), 10);
        for w in seen.windows(2) {
            assert!(w[0] < w[1], "{:?} !< {:?}", w[0], w[1]);
        }
        for comp in &seen {
            assert_eq!(comp.iter().sum::<usize>(), 3);
        }
    }

    #[test]
    fn odometer_counts_in_lexicographic_order() {
        let mut idx = vec![0usize; 2];
        let mut seen = vec![idx.clone()];
        while next_odometer(&mut idx, 3) {
            seen.push(idx.clone());
        }
        assert_eq!(seen.len(), 9);
        for w in seen.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn zero_only_grid_forces_the_backstop_bound() {
        // With j restricted to {0}, the whole budget is best spent on
        // delta_1 and the result is the uniform-style backstop.
        let c = ctx(50, 100, 0.5);
        let ens = EnsembleSpec::new(10).unwrap();
        // 0.03125 = 2^-5, so 16 steps reproduce 0.5 exactly.
        let grid = OptimizerGrid::new(2, 0.03125, JCandidates::Explicit(vec![0.0])).unwrap();
        let (schedule, result) = optimize_schedule(&c, &ens, &grid).unwrap();
        assert_eq!(schedule.j_values(), &[0.0, 0.0]);
        assert_eq!(result.epsilon_raw, epsilon_hat(&c, 0.0, 0.5));
        assert_eq!(schedule.delta_values()[0], 0.5);
    }

    #[test]
    fn single_candidate_brute_force_returns_that_schedule() {
        let c = ctx(50, 100, 0.5);
        let ens = EnsembleSpec::new(10).unwrap();
        let grid = OptimizerGrid::new(1, 0.25, JCandidates::Explicit(vec![2.0])).unwrap();
        let (schedule, _) = brute_force_optimize(&c, &ens, &grid).unwrap();
        assert_eq!(schedule.j_values(), &[2.0]);
        assert_eq!(schedule.delta_values().iter().sum::<f64>(), 0.5);
    }

    #[test]
    fn dp_matches_brute_force_on_a_small_grid() {
        let c = ctx(50, 100, 0.5);
        let ens = EnsembleSpec::new(5).unwrap();
        let grid = OptimizerGrid::integers(2, 0.0625).unwrap();
        let (dp_schedule, dp) = optimize_schedule(&c, &ens, &grid).unwrap();
        let (_, brute) = brute_force_optimize(&c, &ens, &grid).unwrap();
        assert_eq!(dp.epsilon_raw, brute.epsilon_raw);
        let reval = telescoping_epsilon(&c, &ens, &dp_schedule).unwrap();
        assert_eq!(reval.epsilon_raw, dp.epsilon_raw);
    }

    #[test]
    fn optimizer_beats_closed_form_on_a_geometric_grid() {
        // Seed the candidate set with the geometric j values. The
        // closed-form deltas are not grid points (the grid is integer
        // multiples of the increment), but a moderately fine grid already
        // beats both the closed form and its chain evaluation outright.
        let c = ctx(1000, 500, 0.05);
        let ens = EnsembleSpec::new(100).unwrap();
        let decay = 3.0;
        let closed = crate::bounds::closed_form_schedule(&c, &ens, decay).unwrap();
        let chain = telescoping_epsilon(&c, &ens, &closed).unwrap();
        let star = crate::bounds::epsilon_star(&c, &ens, decay).unwrap();

        let grid = OptimizerGrid::geometric(2, 0.05 / 64.0, decay, 100).unwrap();
        let (_, optimized) = optimize_schedule(&c, &ens, &grid).unwrap();
        assert!(optimized.epsilon_raw <= chain.epsilon_raw);
        assert!(optimized.epsilon_raw <= star.epsilon_raw);
    }

    #[test]
    fn cap_is_enforced() {
        let c = ctx(50, 100, 0.5);
        let ens = EnsembleSpec::new(10).unwrap();
        let grid = OptimizerGrid::integers(2, 1e-4).unwrap();
        assert!(matches!(
            optimize_schedule_with_cap(&c, &ens, &grid, 100),
            Err(OptimizeError::CapExceeded { .. })
        ));
        assert!(matches!(
            brute_force_optimize_with_cap(&c, &ens, &grid, 100),
            Err(OptimizeError::CapExceeded { .. })
        ));
    }

    #[test]
    fn full_budget_with_coarse_increments_stays_in_domain() {
        // 10 * 0.1 rounds one ulp above 1.0; the reconstructed schedule
        // must still validate and evaluate.
        let c = ctx(50, 100, 1.0);
        let ens = EnsembleSpec::new(10).unwrap();
        let grid = OptimizerGrid::integers(2, 0.1).unwrap();
        let (schedule, result) = optimize_schedule(&c, &ens, &grid).unwrap();
        let (_, brute) = brute_force_optimize(&c, &ens, &grid).unwrap();
        assert_eq!(result.epsilon_raw, brute.epsilon_raw);
        schedule.validate_against(&c, &ens).unwrap();
    }

    #[test]
    fn coarse_increment_is_rejected() {
        let c = ctx(50, 100, 0.05);
        let ens = EnsembleSpec::new(10).unwrap();
        let grid = OptimizerGrid::integers(1, 0.06).unwrap();
        assert!(matches!(
            optimize_schedule(&c, &ens, &grid),
            Err(OptimizeError::IncrementTooCoarse { .. })
        ));
    }

    #[test]
    fn value_table_entries_bounded_and_monotone_in_delta() {
        let c = ctx(50, 100, 0.5);
        let ens = EnsembleSpec::new(5).unwrap();
        let grid = OptimizerGrid::integers(2, 0.0625).unwrap();
        let table = ValueTable::build(&c, &ens, &grid, DEFAULT_CAP).unwrap();
        let ceiling = 1.0 + table.stages() as f64;
        for stage in 1..=table.stages() {
            for state in 0..table.states(stage).len() {
                for steps in 0..=table.total_delta_steps() {
                    let v = table.value(stage, state, steps);
                    assert!((0.0..=ceiling).contains(&v));
                    if steps > 0 {
                        assert!(v <= table.value(stage, state, steps - 1));
                    }
                }
            }
        }
    }
}
