//! Monte Carlo harness for empirical bound-coverage measurement.
//!
//! A [`SyntheticWorld`] fixes a population of `m` classifiers with known
//! true error rates. Each trial draws every classifier's validation error
//! count as an independent Binomial(n, p*_i), selects an ensemble from the
//! observed rates, and compares the realized gap `E_S p*_i - E_S p_i`
//! against each bound width under test. A sound bound of confidence
//! `delta` violates (`gap >= epsilon`) with probability at most `delta`,
//! so across many trials the violation frequency must stay at or below
//! `delta`; the report carries an exact one-sided binomial upper
//! confidence limit on the true violation probability alongside each
//! frequency.
//!
//! Trial `t` draws from a dedicated stream `t` of a seeded ChaCha
//! generator, so reports are reproducible bit for bit and independent of
//! execution order. Selecting the `s` lowest validation rates is the
//! default stress rule: it maximizes the optimistic bias the bounds must
//! absorb.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::bounds::{
    ensemble_nearly_uniform_epsilon, ensemble_nearly_uniform_epsilon_observed,
    ensemble_uniform_epsilon, epsilon_star, epsilon_star_analytic_bound, telescoping_epsilon,
    BoundContext, BoundError, BoundKind, EnsembleSpec, Schedule,
};
use crate::telescope::{optimize_schedule, OptimizeError, OptimizerGrid};

/// Generator stream reserved for materializing the world's true rates;
/// trials use streams 0, 1, 2, ...
const WORLD_STREAM: u64 = u64::MAX;

/// Errors from world construction and experiment setup.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("m must be at least 1, got {0}")]
    InvalidM(u64),
    #[error("rate {0} outside [0, 1]")]
    InvalidRate(f64),
    #[error("fixed rate list has {got} entries, expected m = {expected}")]
    RateCount { expected: u64, got: usize },
    #[error("interval [{lo}, {hi}] is not within [0, 1]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("fraction_low must be in [0, 1], got {0}")]
    InvalidFraction(f64),
    #[error("s must satisfy 1 <= s <= m, got s={s}, m={m}")]
    InvalidS { s: u64, m: u64 },
    #[error("threshold {tau} selected no classifiers")]
    EmptyThresholdSelection { tau: f64 },
    #[error("coverage experiments need a selection rule with fixed ensemble size; threshold selection varies per trial")]
    ThresholdRuleInExperiment,
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("no bounds under test")]
    NoBounds,
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
}

/// How a world's true error rates are generated.
#[derive(Debug, Clone, PartialEq)]
pub enum RateDistribution {
    /// Independent uniform draws on `[lo, hi]`.
    UniformOnInterval { lo: f64, hi: f64 },
    /// Exactly these rates, in order.
    FixedList(Vec<f64>),
    /// `round(fraction_low * m)` classifiers at `p_low`, the rest at
    /// `p_high`.
    TwoPoint {
        p_low: f64,
        p_high: f64,
        fraction_low: f64,
    },
}

/// A synthetic classifier population with known true error rates.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticWorld {
    true_error_rates: Vec<f64>,
    n: u64,
    rate_distribution: RateDistribution,
    seed: u64,
}

impl SyntheticWorld {
    pub fn new(
        m: u64,
        n: u64,
        rate_distribution: RateDistribution,
        seed: u64,
    ) -> Result<Self, SimError> {
        if m < 1 {
            return Err(SimError::InvalidM(m));
        }
        if n < 1 {
            return Err(SimError::Bound(BoundError::InvalidN(n)));
        }
        let rates = match &rate_distribution {
            RateDistribution::UniformOnInterval { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && 0.0 <= *lo && lo <= hi && *hi <= 1.0) {
                    return Err(SimError::InvalidInterval { lo: *lo, hi: *hi });
                }
                let mut rng = ChaCha12Rng::seed_from_u64(seed);
                rng.set_stream(WORLD_STREAM);
                (0..m)
                    .map(|_| lo + (hi - lo) * rng.random::<f64>())
                    .collect()
            }
            RateDistribution::FixedList(rates) => {
                if rates.len() as u64 != m {
                    return Err(SimError::RateCount {
                        expected: m,
                        got: rates.len(),
                    });
                }
                rates.clone()
            }
            RateDistribution::TwoPoint {
                p_low,
                p_high,
                fraction_low,
            } => {
                if !(0.0..=1.0).contains(fraction_low) {
                    return Err(SimError::InvalidFraction(*fraction_low));
                }
                let low_count = (fraction_low * m as f64).round() as u64;
                (0..m)
                    .map(|i| if i < low_count { *p_low } else { *p_high })
                    .collect::<Vec<f64>>()
            }
        };
        for &rate in &rates {
            if !(rate.is_finite() && (0.0..=1.0).contains(&rate)) {
                return Err(SimError::InvalidRate(rate));
            }
        }
        Ok(Self {
            true_error_rates: rates,
            n,
            rate_distribution,
            seed,
        })
    }

    pub fn m(&self) -> u64 {
        self.true_error_rates.len() as u64
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn true_error_rates(&self) -> &[f64] {
        &self.true_error_rates
    }

    pub fn rate_distribution(&self) -> &RateDistribution {
        &self.rate_distribution
    }
}

/// How the ensemble is chosen from observed validation rates.
#[derive(Debug, Clone, PartialEq)]
pub enum SelectionRule {
    /// The `s` smallest rates, ties broken by ascending index.
    LowestS,
    /// `s` indices drawn without replacement from the trial's generator.
    RandomS,
    /// Every index with rate at most `tau`; errors when none qualify.
    Threshold(f64),
}

/// Applies a selection rule to one trial's validation rates. The returned
/// indices are ascending. Deterministic given the rates, the rule, and
/// (for random selection) the generator state.
pub fn select_ensemble<R: Rng>(
    validation_rates: &[f64],
    s: u64,
    rule: &SelectionRule,
    rng: &mut R,
) -> Result<Vec<usize>, SimError> {
    let m = validation_rates.len() as u64;
    match rule {
        SelectionRule::LowestS => {
            if s < 1 || s > m {
                return Err(SimError::InvalidS { s, m });
            }
            let mut order: Vec<usize> = (0..validation_rates.len()).collect();
            order.sort_by(|&a, &b| {
                validation_rates[a]
                    .total_cmp(&validation_rates[b])
                    .then(a.cmp(&b))
            });
            let mut selected = order[..s as usize].to_vec();
            selected.sort_unstable();
            Ok(selected)
        }
        SelectionRule::RandomS => {
            if s < 1 || s > m {
                return Err(SimError::InvalidS { s, m });
            }
            // Partial Fisher-Yates over the index vector.
            let mut indices: Vec<usize> = (0..validation_rates.len()).collect();
            for i in 0..s as usize {
                let j = i + rng.random_range(0..indices.len() - i);
                indices.swap(i, j);
            }
            let mut selected = indices[..s as usize].to_vec();
            selected.sort_unstable();
            Ok(selected)
        }
        SelectionRule::Threshold(tau) => {
            let selected: Vec<usize> = (0..validation_rates.len())
                .filter(|&i| validation_rates[i] <= *tau)
                .collect();
            if selected.is_empty() {
                return Err(SimError::EmptyThresholdSelection { tau: *tau });
            }
            Ok(selected)
        }
    }
}

/// A bound under test, with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundSpecUnderTest {
    EnsembleUniform,
    EnsembleNearlyUniform {
        j: f64,
    },
    /// Recomputed from each trial's observed rates.
    EnsembleNearlyUniformObserved {
        j: u64,
    },
    Telescoping {
        schedule: Schedule,
    },
    DpOptimized {
        grid: OptimizerGrid,
    },
    ClosedForm {
        c: f64,
    },
    AnalyticEnvelope {
        c: f64,
    },
}

impl BoundSpecUnderTest {
    /// Stable label used in reports and machine output.
    pub fn label(&self) -> String {
        match self {
            Self::EnsembleUniform => "ensemble-uniform".into(),
            Self::EnsembleNearlyUniform { j } => format!("ensemble-nearly-uniform(j={j})"),
            Self::EnsembleNearlyUniformObserved { j } => format!("observed(j={j})"),
            Self::Telescoping { schedule } => {
                format!("telescoping(t={})", schedule.stages())
            }
            Self::DpOptimized { grid } => format!(
                "dp-optimized(t={};inc={})",
                grid.stages(),
                grid.delta_increment()
            ),
            Self::ClosedForm { c } => format!("closed-form(c={c})"),
            Self::AnalyticEnvelope { c } => format!("analytic-envelope(c={c})"),
        }
    }

    pub fn kind(&self) -> BoundKind {
        match self {
            Self::EnsembleUniform => BoundKind::EnsembleUniform,
            Self::EnsembleNearlyUniform { .. } => BoundKind::EnsembleNearlyUniform,
            Self::EnsembleNearlyUniformObserved { .. } => BoundKind::EnsembleNearlyUniformObserved,
            Self::Telescoping { .. } | Self::DpOptimized { .. } => BoundKind::Telescoping,
            Self::ClosedForm { .. } => BoundKind::ClosedForm,
            Self::AnalyticEnvelope { .. } => BoundKind::AnalyticEnvelope,
        }
    }
}

/// One trial's draw, selection, realized gap, and per-bound violations.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub validation_rates: Vec<f64>,
    pub selected: Vec<usize>,
    pub gap: f64,
    /// `(label, epsilon, violated)` per bound under test.
    pub violated: Vec<(String, f64, bool)>,
}

/// Per-bound coverage statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageEntry {
    pub label: String,
    pub kind: BoundKind,
    /// The width tested; for per-trial bounds, the mean width.
    pub epsilon: f64,
    pub violations: u64,
    pub frequency: f64,
    /// Exact one-sided binomial upper confidence limit on the violation
    /// probability, at level 0.999.
    pub upper_confidence: f64,
}

/// Aggregate report of a coverage experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub seed: u64,
    pub trials: u64,
    pub delta: f64,
    pub entries: Vec<CoverageEntry>,
}

impl CoverageReport {
    /// True when some bound's observed violation frequency exceeds the
    /// confidence budget — a hard soundness failure.
    pub fn has_coverage_failure(&self) -> bool {
        self.entries.iter().any(|e| e.frequency > self.delta)
    }
}

/// A prepared coverage experiment: world, selection, and bound widths
/// (fixed widths computed once; observed-rate bounds recomputed per
/// trial).
#[derive(Debug, Clone)]
pub struct Experiment {
    world: SyntheticWorld,
    s: u64,
    delta: f64,
    rule: SelectionRule,
    bounds: Vec<BoundSpecUnderTest>,
    fixed_epsilons: Vec<Option<f64>>,
    ctx: BoundContext,
}

impl Experiment {
    pub fn new(
        world: SyntheticWorld,
        s: u64,
        delta: f64,
        rule: SelectionRule,
        bounds: Vec<BoundSpecUnderTest>,
    ) -> Result<Self, SimError> {
        if matches!(rule, SelectionRule::Threshold(_)) {
            return Err(SimError::ThresholdRuleInExperiment);
        }
        if s < 1 || s > world.m() {
            return Err(SimError::InvalidS { s, m: world.m() });
        }
        if bounds.is_empty() {
            return Err(SimError::NoBounds);
        }
        let ctx = BoundContext::new(world.m(), world.n(), delta)?;
        let ens = EnsembleSpec::new(s)?;
        let mut fixed_epsilons = Vec::with_capacity(bounds.len());
        for bound in &bounds {
            let epsilon = match bound {
                BoundSpecUnderTest::EnsembleUniform => {
                    Some(ensemble_uniform_epsilon(&ctx, &ens)?.epsilon)
                }
                BoundSpecUnderTest::EnsembleNearlyUniform { j } => {
                    Some(ensemble_nearly_uniform_epsilon(&ctx, &ens, *j)?.epsilon)
                }
                BoundSpecUnderTest::EnsembleNearlyUniformObserved { j } => {
                    // Validate the parameter now; the width is per-trial.
                    if *j < 1 || *j > s {
                        return Err(SimError::Bound(BoundError::InvalidJ {
                            j: *j as f64,
                            low: 1.0,
                            high: s as f64,
                        }));
                    }
                    None
                }
                BoundSpecUnderTest::Telescoping { schedule } => {
                    Some(telescoping_epsilon(&ctx, &ens, schedule)?.epsilon)
                }
                BoundSpecUnderTest::DpOptimized { grid } => {
                    Some(optimize_schedule(&ctx, &ens, grid)?.1.epsilon)
                }
                BoundSpecUnderTest::ClosedForm { c } => Some(epsilon_star(&ctx, &ens, *c)?.epsilon),
                BoundSpecUnderTest::AnalyticEnvelope { c } => {
                    Some(epsilon_star_analytic_bound(&ctx, &ens, *c)?.epsilon)
                }
            };
            fixed_epsilons.push(epsilon);
        }
        Ok(Self {
            world,
            s,
            delta,
            rule,
            bounds,
            fixed_epsilons,
            ctx,
        })
    }

    /// Draws and scores one trial. Trial `index` is reproducible in
    /// isolation: it depends only on `(seed, index)`.
    pub fn run_trial(&self, index: u64) -> TrialOutcome {
        let mut rng = ChaCha12Rng::seed_from_u64(self.world.seed());
        rng.set_stream(index);
        let n = self.world.n();
        let validation_rates: Vec<f64> = self
            .world
            .true_error_rates()
            .iter()
            .map(|&p| sample_binomial(&mut rng, n, p) as f64 / n as f64)
            .collect();
        let selected = select_ensemble(&validation_rates, self.s, &self.rule, &mut rng)
            .expect("rule validated at construction");

        let s = selected.len() as f64;
        let true_mean: f64 = selected
            .iter()
            .map(|&i| self.world.true_error_rates()[i])
            .sum::<f64>()
            / s;
        let observed_mean: f64 = selected.iter().map(|&i| validation_rates[i]).sum::<f64>() / s;
        let gap = true_mean - observed_mean;

        let violated = self
            .bounds
            .iter()
            .zip(&self.fixed_epsilons)
            .map(|(bound, fixed)| {
                let epsilon = match (bound, fixed) {
                    (_, Some(e)) => *e,
                    (BoundSpecUnderTest::EnsembleNearlyUniformObserved { j }, None) => {
                        let rates: Vec<f64> =
                            selected.iter().map(|&i| validation_rates[i]).collect();
                        let ens = EnsembleSpec::with_observed_rates(rates)
                            .expect("selected set is nonempty");
                        ensemble_nearly_uniform_epsilon_observed(&self.ctx, &ens, *j)
                            .expect("bound parameters validated at construction")
                            .epsilon
                    }
                    _ => unreachable!("only observed bounds lack a fixed width"),
                };
                (bound.label(), epsilon, gap >= epsilon)
            })
            .collect();

        TrialOutcome {
            validation_rates,
            selected,
            gap,
            violated,
        }
    }

    /// Runs `trials` trials and aggregates the coverage report.
    pub fn run(&self, trials: u64) -> Result<CoverageReport, SimError> {
        if trials < 1 {
            return Err(SimError::NoTrials);
        }
        let mut violations = vec![0u64; self.bounds.len()];
        let mut epsilon_sums = vec![0.0f64; self.bounds.len()];
        for index in 0..trials {
            let outcome = self.run_trial(index);
            for (slot, (_, epsilon, violated)) in outcome.violated.iter().enumerate() {
                epsilon_sums[slot] += epsilon;
                if *violated {
                    violations[slot] += 1;
                }
            }
        }
        let entries = self
            .bounds
            .iter()
            .enumerate()
            .map(|(slot, bound)| {
                let epsilon = match self.fixed_epsilons[slot] {
                    Some(e) => e,
                    None => epsilon_sums[slot] / trials as f64,
                };
                CoverageEntry {
                    label: bound.label(),
                    kind: bound.kind(),
                    epsilon,
                    violations: violations[slot],
                    frequency: violations[slot] as f64 / trials as f64,
                    upper_confidence: clopper_pearson_upper(violations[slot], trials, 0.999),
                }
            })
            .collect();
        Ok(CoverageReport {
            seed: self.world.seed(),
            trials,
            delta: self.delta,
            entries,
        })
    }
}

/// Builds and runs a coverage experiment in one call.
pub fn run_coverage_experiment(
    world: SyntheticWorld,
    s: u64,
    delta: f64,
    rule: SelectionRule,
    bounds: Vec<BoundSpecUnderTest>,
    trials: u64,
) -> Result<CoverageReport, SimError> {
    Experiment::new(world, s, delta, rule, bounds)?.run(trials)
}

/// Draws Binomial(n, p) by inverse-CDF search on the probability mass
/// recurrence, reflecting p > 1/2 and splitting n into chunks small enough
/// that `(1-p)^chunk` stays normal. Exact up to f64 rounding and fully
/// determined by the generator stream.
pub(crate) fn sample_binomial<R: Rng>(rng: &mut R, n: u64, p: f64) -> u64 {
    debug_assert!((0.0..=1.0).contains(&p));
    if p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    if p > 0.5 {
        return n - sample_binomial(rng, n, 1.0 - p);
    }
    const CHUNK: u64 = 1000;
    let mut remaining = n;
    let mut total = 0u64;
    while remaining > 0 {
        let take = remaining.min(CHUNK);
        total += binomial_inverse_cdf(rng.random::<f64>(), take, p);
        remaining -= take;
    }
    total
}

fn binomial_inverse_cdf(u: f64, n: u64, p: f64) -> u64 {
    let q = 1.0 - p;
    let ratio = p / q;
    let mut pmf = q.powi(n as i32);
    let mut cdf = pmf;
    let mut k = 0u64;
    while u >= cdf && k < n {
        k += 1;
        pmf *= ratio * (n - k + 1) as f64 / k as f64;
        cdf += pmf;
    }
    k
}

/// Exact (Clopper-Pearson) one-sided upper confidence limit for a
/// binomial proportion: the smallest rate `p` such that seeing at most
/// `successes` of `trials` has probability no more than `1 - confidence`.
pub fn clopper_pearson_upper(successes: u64, trials: u64, confidence: f64) -> f64 {
    assert!(trials >= 1, "need at least one trial");
    assert!(
        (0.5..1.0).contains(&confidence),
        "confidence must be in [0.5, 1)"
    );
    if successes >= trials {
        return 1.0;
    }
    // P(X <= x; p) = I_{1-p}(n - x, x + 1) is continuous and decreasing in
    // p; bisect it against 1 - confidence.
    let x = successes as f64;
    let n = trials as f64;
    let tail = 1.0 - confidence;
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let cdf = regularized_incomplete_beta(n - x, x + 1.0, 1.0 - mid);
        if cdf > tail {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    hi
}

/// Regularized incomplete beta function I_x(a, b) by the Lentz continued
/// fraction, using the symmetry I_x(a, b) = 1 - I_{1-x}(b, a) to stay in
/// the rapidly converging region.
fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-15 {
            break;
        }
    }
    h
}

/// Lanczos approximation (g = 7, 9 terms), accurate to ~1e-13 over the
/// positive reals used here.
fn ln_gamma(z: f64) -> f64 {
    const COEFFICIENTS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507343278686905,
        -0.13857109526572012,
        9.984_369_578_019_572e-6,
        1.5056327351493116e-7,
    ];
    if z < 0.5 {
        // Reflection for the left half plane.
        return (std::f64::consts::PI / (std::f64::consts::PI * z).sin()).ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut sum = 0.999_999_999_999_809_9;
    for (i, &coefficient) in COEFFICIENTS.iter().enumerate() {
        sum += coefficient / (z + i as f64 + 1.0);
    }
    let t = z + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + sum.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_world(m: u64, n: u64, seed: u64) -> SyntheticWorld {
        SyntheticWorld::new(
            m,
            n,
            RateDistribution::UniformOnInterval { lo: 0.0, hi: 0.5 },
            seed,
        )
        .unwrap()
    }

    #[test]
    fn ln_gamma_matches_known_values() {
        // Gamma(1) = Gamma(2) = 1, Gamma(5) = 24, Gamma(1/2) = sqrt(pi).
        assert!(ln_gamma(1.0).abs() < 1e-12);
        assert!(ln_gamma(2.0).abs() < 1e-12);
        assert!((ln_gamma(5.0) - 24.0f64.ln()).abs() < 1e-12);
        assert!((ln_gamma(0.5) - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-12);
    }

    #[test]
    fn incomplete_beta_basics() {
        assert_eq!(regularized_incomplete_beta(2.0, 3.0, 0.0), 0.0);
        assert_eq!(regularized_incomplete_beta(2.0, 3.0, 1.0), 1.0);
        // I_x(1, 1) = x.
        assert!((regularized_incomplete_beta(1.0, 1.0, 0.37) - 0.37).abs() < 1e-12);
        // I_x(1, b) = 1 - (1-x)^b.
        let x = 0.2;
        let b = 5.0;
        let expected = 1.0 - (1.0 - x) * (1.0 - x) * (1.0 - x) * (1.0 - x) * (1.0 - x);
        assert!((regularized_incomplete_beta(1.0, b, x) - expected).abs() < 1e-12);
    }

    #[test]
    fn clopper_pearson_zero_successes_closed_form() {
        // With zero successes the limit solves (1-p)^n = 1 - confidence.
        for &(n, confidence) in &[(100u64, 0.999f64), (10_000, 0.999), (50, 0.95)] {
            let expected = 1.0 - (1.0 - confidence).powf(1.0 / n as f64);
            let got = clopper_pearson_upper(0, n, confidence);
            assert!(
                (got - expected).abs() < 1e-9,
                "n={n} conf={confidence}: got {got}, expected {expected}"
            );
        }
    }

    #[test]
    fn clopper_pearson_matches_direct_tail_sum() {
        // Independent check: bisect the binomial tail computed by direct
        // pmf summation for small n.
        fn tail_cdf(x: u64, n: u64, p: f64) -> f64 {
            let q = 1.0 - p;
            let mut pmf = q.powi(n as i32);
            let mut cdf = pmf;
            for k in 1..=x {
                pmf *= (p / q) * (n - k + 1) as f64 / k as f64;
                cdf += pmf;
            }
            cdf
        }
        for &(x, n) in &[(0u64, 20u64), (1, 20), (3, 20), (10, 20), (19, 20)] {
            let got = clopper_pearson_upper(x, n, 0.999);
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if tail_cdf(x, n, mid) > 0.001 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            assert!((got - hi).abs() < 1e-7, "x={x}: got {got}, expected {hi}");
        }
    }

    #[test]
    fn clopper_pearson_all_successes_is_one() {
        assert_eq!(clopper_pearson_upper(10, 10, 0.999), 1.0);
    }

    #[test]
    fn binomial_sampler_edge_cases() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        assert_eq!(sample_binomial(&mut rng, 100, 0.0), 0);
        assert_eq!(sample_binomial(&mut rng, 100, 1.0), 100);
    }

    #[test]
    fn binomial_sampler_moments() {
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for &(n, p) in &[(500u64, 0.3f64), (500, 0.8), (5000, 0.05)] {
            let draws = 20_000usize;
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for _ in 0..draws {
                let x = sample_binomial(&mut rng, n, p) as f64;
                sum += x;
                sumsq += x * x;
            }
            let mean = sum / draws as f64;
            let var = sumsq / draws as f64 - mean * mean;
            let expected_mean = n as f64 * p;
            let expected_var = n as f64 * p * (1.0 - p);
            // Wide tolerances; this is a sanity check, not an estimate.
            assert!(
                (mean - expected_mean).abs() < 8.0 * (expected_var / draws as f64).sqrt() + 0.05,
                "n={n} p={p}: mean={mean}"
            );
            assert!(
                (var - expected_var).abs() < 0.1 * expected_var + 0.5,
                "n={n} p={p}: var={var}"
            );
        }
    }

    #[test]
    fn lowest_s_breaks_ties_by_index() {
        let rates = [0.3, 0.1, 0.1, 0.5];
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let selected = select_ensemble(&rates, 2, &SelectionRule::LowestS, &mut rng).unwrap();
        assert_eq!(selected, vec![1, 2]);
    }

    #[test]
    fn lowest_s_single_pick_is_argmin() {
        let rates = [0.4, 0.2, 0.9];
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let selected = select_ensemble(&rates, 1, &SelectionRule::LowestS, &mut rng).unwrap();
        assert_eq!(selected, vec![1]);
    }

    #[test]
    fn selecting_everything_returns_all_indices() {
        let rates = [0.4, 0.2, 0.9];
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        for rule in [SelectionRule::LowestS, SelectionRule::RandomS] {
            let selected = select_ensemble(&rates, 3, &rule, &mut rng).unwrap();
            assert_eq!(selected, vec![0, 1, 2]);
        }
    }

    #[test]
    fn threshold_selection_filters_and_errors_when_empty() {
        let rates = [0.4, 0.2, 0.9];
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let selected =
            select_ensemble(&rates, 0, &SelectionRule::Threshold(0.45), &mut rng).unwrap();
        assert_eq!(selected, vec![0, 1]);
        assert!(matches!(
            select_ensemble(&rates, 0, &SelectionRule::Threshold(0.1), &mut rng),
            Err(SimError::EmptyThresholdSelection { .. })
        ));
    }

    #[test]
    fn random_s_is_reproducible() {
        let rates = [0.4, 0.2, 0.9, 0.1, 0.6];
        let mut a = ChaCha12Rng::seed_from_u64(5);
        let mut b = ChaCha12Rng::seed_from_u64(5);
        let lhs = select_ensemble(&rates, 3, &SelectionRule::RandomS, &mut a).unwrap();
        let rhs = select_ensemble(&rates, 3, &SelectionRule::RandomS, &mut b).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.len(), 3);
    }

    #[test]
    fn zero_error_world_never_violates() {
        let world =
            SyntheticWorld::new(20, 50, RateDistribution::FixedList(vec![0.0; 20]), 11).unwrap();
        let report = run_coverage_experiment(
            world,
            5,
            0.05,
            SelectionRule::LowestS,
            vec![
                BoundSpecUnderTest::EnsembleUniform,
                BoundSpecUnderTest::EnsembleNearlyUniform { j: 2.0 },
                BoundSpecUnderTest::EnsembleNearlyUniformObserved { j: 2 },
            ],
            200,
        )
        .unwrap();
        for entry in &report.entries {
            assert_eq!(entry.violations, 0, "{}", entry.label);
        }
        assert!(!report.has_coverage_failure());
    }

    #[test]
    fn reports_are_bit_identical_for_equal_seeds() {
        let bounds = vec![
            BoundSpecUnderTest::EnsembleUniform,
            BoundSpecUnderTest::EnsembleNearlyUniform { j: 3.0 },
            BoundSpecUnderTest::EnsembleNearlyUniformObserved { j: 3 },
            BoundSpecUnderTest::ClosedForm { c: 3.0 },
        ];
        let run = |seed: u64| {
            run_coverage_experiment(
                uniform_world(30, 100, seed),
                5,
                0.05,
                SelectionRule::LowestS,
                bounds.clone(),
                300,
            )
            .unwrap()
        };
        assert_eq!(run(42), run(42));
        assert_ne!(run(42), run(43));
    }

    #[test]
    fn trials_do_not_depend_on_execution_order() {
        let world = uniform_world(10, 50, 123);
        let experiment = Experiment::new(
            world,
            3,
            0.05,
            SelectionRule::LowestS,
            vec![BoundSpecUnderTest::EnsembleUniform],
        )
        .unwrap();
        let forward: Vec<_> = (0..5).map(|i| experiment.run_trial(i)).collect();
        let backward: Vec<_> = (0..5).rev().map(|i| experiment.run_trial(i)).collect();
        for (i, outcome) in forward.iter().enumerate() {
            assert_eq!(*outcome, backward[4 - i]);
        }
    }

    #[test]
    fn tighter_bounds_violate_at_least_as_often() {
        // Violation sets are nested: epsilon_A <= epsilon_B means every
        // B violation is an A violation.
        let world = uniform_world(50, 20, 7);
        let report = run_coverage_experiment(
            world,
            10,
            0.2,
            SelectionRule::LowestS,
            vec![
                BoundSpecUnderTest::EnsembleUniform,
                BoundSpecUnderTest::EnsembleNearlyUniform { j: 2.0 },
                BoundSpecUnderTest::EnsembleNearlyUniform { j: 5.0 },
            ],
            2000,
        )
        .unwrap();
        let mut pairs = report.entries.clone();
        pairs.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon));
        for window in pairs.windows(2) {
            assert!(
                window[0].violations >= window[1].violations,
                "{} vs {}",
                window[0].label,
                window[1].label
            );
        }
    }

    #[test]
    fn threshold_rule_is_rejected_in_experiments() {
        let world = uniform_world(10, 50, 1);
        assert!(matches!(
            Experiment::new(
                world,
                3,
                0.05,
                SelectionRule::Threshold(0.5),
                vec![BoundSpecUnderTest::EnsembleUniform],
            ),
            Err(SimError::ThresholdRuleInExperiment)
        ));
    }

    #[test]
    fn violations_occur_at_the_binomial_tail_rate() {
        // One classifier with true rate 1/2 on 10 validation examples at
        // delta = 1/2: the width is sqrt(ln 2 / 20) ~ 0.186, so a
        // violation is exactly a count of 3 or fewer successes,
        // P(Bin(10, 1/2) <= 3) = 176/1024 ~ 0.172. Guards the sign of the
        // gap: a flipped gap would never violate and every coverage check
        // would pass vacuously.
        let world = SyntheticWorld::new(
            1,
            10,
            RateDistribution::FixedList(vec![0.5]),
            271828,
        )
        .unwrap();
        let report = run_coverage_experiment(
            world,
            1,
            0.5,
            SelectionRule::LowestS,
            vec![BoundSpecUnderTest::EnsembleUniform],
            4000,
        )
        .unwrap();
        let frequency = report.entries[0].frequency;
        assert!(
            (frequency - 176.0 / 1024.0).abs() < 0.03,
            "frequency {frequency} far from 0.172"
        );
        assert!(frequency <= 0.5);
        assert!(!report.has_coverage_failure());
    }

    #[test]
    fn trial_outcomes_lie_on_the_count_grid() {
        let world = uniform_world(12, 37, 5);
        let experiment = Experiment::new(
            world,
            4,
            0.05,
            SelectionRule::LowestS,
            vec![BoundSpecUnderTest::EnsembleUniform],
        )
        .unwrap();
        for index in 0..10 {
            let outcome = experiment.run_trial(index);
            assert_eq!(outcome.selected.len(), 4);
            assert_eq!(outcome.validation_rates.len(), 12);
            for &rate in &outcome.validation_rates {
                let scaled = rate * 37.0;
                assert!((0.0..=1.0).contains(&rate));
                assert!((scaled - scaled.round()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn coverage_failure_trips_on_frequency_above_delta() {
        let entry = |frequency: f64| CoverageEntry {
            label: "x".into(),
            kind: BoundKind::EnsembleUniform,
            epsilon: 0.1,
            violations: (frequency * 100.0) as u64,
            frequency,
            upper_confidence: 1.0,
        };
        let report = CoverageReport {
            seed: 0,
            trials: 100,
            delta: 0.05,
            entries: vec![entry(0.01), entry(0.05)],
        };
        assert!(!report.has_coverage_failure());
        let failing = CoverageReport {
            entries: vec![entry(0.01), entry(0.06)],
            ..report
        };
        assert!(failing.has_coverage_failure());
    }

    #[test]
    fn two_point_world_materializes_counts() {
        let world = SyntheticWorld::new(
            10,
            50,
            RateDistribution::TwoPoint {
                p_low: 0.1,
                p_high: 0.4,
                fraction_low: 0.3,
            },
            0,
        )
        .unwrap();
        let low = world
            .true_error_rates()
            .iter()
            .filter(|&&r| r == 0.1)
            .count();
        assert_eq!(low, 3);
    }

    #[test]
    fn world_validates_inputs() {
        assert!(SyntheticWorld::new(0, 10, RateDistribution::FixedList(vec![]), 0).is_err());
        assert!(SyntheticWorld::new(2, 10, RateDistribution::FixedList(vec![0.5]), 0).is_err());
        assert!(SyntheticWorld::new(1, 10, RateDistribution::FixedList(vec![1.5]), 0).is_err());
        assert!(SyntheticWorld::new(
            1,
            10,
            RateDistribution::UniformOnInterval { lo: 0.4, hi: 0.2 },
            0
        )
        .is_err());
    }
}
