//! Straight-line transcriptions of every bound formula, kept independent
//! of the library's evaluation order, plus expected values frozen from a
//! 50-digit arbitrary-precision evaluation of the same expressions.
//!
//! The transcriptions use naive forward summation on purpose; agreement
//! with the library is asserted at 1e-12 relative, which allows for
//! differing floating-point association but nothing larger.

use ensemble_bounds::bounds::{
    analytic_envelope_coefficients, closed_form_schedule, closed_form_stage_count,
    ensemble_nearly_uniform_epsilon, ensemble_nearly_uniform_epsilon_observed,
    ensemble_uniform_epsilon, epsilon_hat, epsilon_star, epsilon_star_analytic_bound,
    extend_full_classifier_bound, hoeffding_epsilon, nearly_uniform_epsilon, telescoping_epsilon,
    uniform_epsilon, BoundContext, EnsembleSpec, Schedule,
};

const E: f64 = std::f64::consts::E;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

// ---- independent transcriptions -------------------------------------------

fn oracle_eps_hat(m: f64, n: f64, j: f64, delta_part: f64) -> f64 {
    if delta_part <= 0.0 {
        return 1.0;
    }
    let arg = if j == 0.0 {
        m / delta_part
    } else {
        m / (delta_part * j)
    };
    (arg.ln() / (2.0 * n)).sqrt().min(1.0)
}

fn oracle_telescoping(m: f64, n: f64, s: f64, j: &[f64], d: &[f64]) -> f64 {
    let t = j.len();
    let total: f64 = j.iter().sum();
    let mut value = (1.0 - total / s) * oracle_eps_hat(m, n, total, d[0]);
    for h in 0..t {
        let tail: f64 = j[h + 1..].iter().sum();
        value += (j[h] / s) * oracle_eps_hat(m, n, tail, d[h + 1]);
    }
    value
}

fn oracle_epsilon_star(m: f64, n: f64, s: f64, delta: f64, c: f64) -> f64 {
    let t = ((2.0 * n).ln() / (2.0 * c)).ceil();
    let mut value = 0.0;
    let mut i = 1.0;
    while i <= t {
        value += (1.0 / (c * (i - 1.0)).exp())
            * oracle_eps_hat(m, n, s / (c * i).exp(), (E - 1.0) * delta / i.exp());
        i += 1.0;
    }
    value + (1.0 / (c * t).exp())
}

fn oracle_analytic(m: f64, n: f64, s: f64, delta: f64, c: f64) -> f64 {
    let k = c.exp() / (c.exp() - 1.0);
    (1.0 / (2.0 * n).sqrt())
        * (((m / s).ln() + (1.0 / delta).ln()).sqrt() * k + (c + 1.0).sqrt() * k * k + 1.0)
}

// ---- frozen values ---------------------------------------------------------

#[test]
fn hoeffding_frozen_values() {
    assert!(rel_close(
        hoeffding_epsilon(5000, 0.05).unwrap(),
        0.017308183826022852,
        1e-12
    ));
    assert!(rel_close(
        hoeffding_epsilon(50, 0.05).unwrap(),
        0.17308183826022852,
        1e-12
    ));
}

#[test]
fn uniform_frozen_values() {
    let tight = uniform_epsilon(&BoundContext::new(100, 5000, 0.05).unwrap());
    assert!(rel_close(tight.epsilon, 0.027569734238004694, 1e-12));
    // Small n: wide but still below the clamp.
    let wide = uniform_epsilon(&BoundContext::new(100, 5, 0.05).unwrap());
    assert!(rel_close(wide.epsilon_raw, 0.8718315467762154, 1e-12));
    assert_eq!(wide.epsilon, wide.epsilon_raw);
}

#[test]
fn nearly_uniform_frozen_value() {
    let ctx = BoundContext::new(100, 5000, 0.05).unwrap();
    let bound = nearly_uniform_epsilon(&ctx, 10.0).unwrap();
    assert!(rel_close(bound.epsilon, 0.023018074130013652, 1e-12));
}

#[test]
fn epsilon_hat_frozen_value() {
    let ctx = BoundContext::new(100, 50, 0.05).unwrap();
    assert!(rel_close(
        epsilon_hat(&ctx, 2.0, 0.01),
        0.2918423065872431,
        1e-12
    ));
}

#[test]
fn ensemble_uniform_frozen_value() {
    let ctx = BoundContext::new(10, 500, 0.05).unwrap();
    let ens = EnsembleSpec::new(10).unwrap();
    let bound = ensemble_uniform_epsilon(&ctx, &ens).unwrap();
    assert!(rel_close(bound.epsilon, 0.07278954160144187, 1e-12));
}

#[test]
fn ensemble_nearly_uniform_frozen_value() {
    let ctx = BoundContext::new(1000, 500, 0.05).unwrap();
    let ens = EnsembleSpec::new(100).unwrap();
    let bound = ensemble_nearly_uniform_epsilon(&ctx, &ens, 10.0).unwrap();
    assert!(rel_close(bound.epsilon, 0.1784648392098594, 1e-12));
    assert!(rel_close(
        epsilon_hat(&ctx, 10.0, 0.05),
        0.08718315467762154,
        1e-12
    ));
}

#[test]
fn observed_frozen_value() {
    let ctx = BoundContext::new(1000, 500, 0.05).unwrap();
    let ens = EnsembleSpec::with_observed_rates(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
    let bound = ensemble_nearly_uniform_epsilon_observed(&ctx, &ens, 2).unwrap();
    // 0.5 * eps_hat(2, 0.05) + 0.5 * (1 - 0.15)
    assert!(rel_close(bound.epsilon, 0.47298525912188083, 1e-12));
    assert!(rel_close(
        epsilon_hat(&ctx, 2.0, 0.05),
        0.09597051824376163,
        1e-12
    ));
}

#[test]
fn telescoping_frozen_value_and_oracle() {
    let ctx = BoundContext::new(1000, 500, 0.05).unwrap();
    let ens = EnsembleSpec::new(100).unwrap();
    let schedule = Schedule::new(vec![10.0, 2.0], vec![0.03, 0.015, 0.005]).unwrap();
    let bound = telescoping_epsilon(&ctx, &ens, &schedule).unwrap();
    assert!(rel_close(bound.epsilon, 0.0907762254875825, 1e-12));
    let oracle = oracle_telescoping(1000.0, 500.0, 100.0, &[10.0, 2.0], &[0.03, 0.015, 0.005]);
    assert!(rel_close(bound.epsilon_raw, oracle, 1e-12));
}

#[test]
fn closed_form_schedule_frozen_values() {
    assert_eq!(closed_form_stage_count(500, 3.0), 2);
    let ctx = BoundContext::new(1000, 500, 0.05).unwrap();
    let ens = EnsembleSpec::new(100).unwrap();
    let schedule = closed_form_schedule(&ctx, &ens, 3.0).unwrap();
    assert_eq!(schedule.stages(), 2);
    assert!(rel_close(
        schedule.delta_values()[0],
        0.03160602794142788,
        1e-12
    ));
    assert!(rel_close(
        schedule.delta_values()[1],
        0.011627207896741482,
        1e-12
    ));
    assert_eq!(schedule.delta_values()[2], 0.0);
    assert!(rel_close(schedule.j_values()[0], 4.978706836786395, 1e-12));
    assert!(rel_close(
        schedule.j_values()[1],
        0.24787521766663584,
        1e-12
    ));
}

#[test]
fn epsilon_star_frozen_values_and_oracle() {
    let ctx = BoundContext::new(1000, 500, 0.05).unwrap();
    let ens = EnsembleSpec::new(100).unwrap();
    let star = epsilon_star(&ctx, &ens, 3.0).unwrap();
    assert!(rel_close(star.epsilon, 0.10168084882282442, 1e-12));
    assert!(rel_close(
        star.epsilon_raw,
        oracle_epsilon_star(1000.0, 500.0, 100.0, 0.05, 3.0),
        1e-12
    ));

    let ens10 = EnsembleSpec::new(10).unwrap();
    let star10 = epsilon_star(&ctx, &ens10, 3.0).unwrap();
    assert!(rel_close(star10.epsilon, 0.11375302164022506, 1e-12));
}

#[test]
fn closed_form_dominates_its_own_telescoping_evaluation() {
    // The closed form substitutes the geometric schedule into the upper
    // envelope of the telescoping chain, so re-evaluating the chain at the
    // same schedule can only come out tighter. At this configuration the
    // gap is about five percent.
    let ctx = BoundContext::new(1000, 500, 0.05).unwrap();
    let ens = EnsembleSpec::new(100).unwrap();
    let star = epsilon_star(&ctx, &ens, 3.0).unwrap();
    let schedule = closed_form_schedule(&ctx, &ens, 3.0).unwrap();
    let chain = telescoping_epsilon(&ctx, &ens, &schedule).unwrap();
    assert!(rel_close(chain.epsilon, 0.09654349557398231, 1e-12));
    assert!(chain.epsilon_raw <= star.epsilon_raw);
}

#[test]
fn analytic_envelope_frozen_constants() {
    let (k, additive) = analytic_envelope_coefficients(3.0).unwrap();
    assert!(rel_close(k, 1.052395696491256, 1e-12));
    assert!(rel_close(additive, 3.2150734039866316, 1e-12));
}

#[test]
fn analytic_envelope_frozen_value_and_oracle() {
    let ctx = BoundContext::new(1000, 500, 0.05).unwrap();
    let ens = EnsembleSpec::new(10).unwrap();
    let bound = epsilon_star_analytic_bound(&ctx, &ens, 3.0).unwrap();
    assert!(rel_close(bound.epsilon, 0.19342072480154474, 1e-12));
    assert!(rel_close(
        bound.epsilon_raw,
        oracle_analytic(1000.0, 500.0, 10.0, 0.05, 3.0),
        1e-12
    ));
}

#[test]
fn full_classifier_ten_way_split_example() {
    // Ten-way split of in-sample data: the Gibbs classifier picks the one
    // member whose withheld block holds the query's nearest neighbor with
    // probability 1/10, so disagreement with the full classifier is at
    // most 10%.
    let ctx = BoundContext::new(10, 500, 0.05).unwrap();
    let ens = EnsembleSpec::new(10).unwrap();
    let gibbs = ensemble_uniform_epsilon(&ctx, &ens).unwrap();
    let full = extend_full_classifier_bound(&gibbs, 0.10).unwrap();
    assert!(rel_close(full.epsilon_raw, gibbs.epsilon + 0.10, 1e-15));
}
