//! Subcommand implementations. Each returns the full stdout text; errors
//! carry the exit class (and, for oracle/coverage failures, the results
//! computed so far).

use ensemble_bounds::bounds::{
    ensemble_nearly_uniform_epsilon, ensemble_nearly_uniform_epsilon_observed,
    ensemble_uniform_epsilon, epsilon_star, epsilon_star_analytic_bound,
    extend_full_classifier_bound, nearly_uniform_epsilon, telescoping_epsilon, uniform_epsilon,
    BoundContext, BoundResult, EnsembleSpec, Schedule,
};
use ensemble_bounds::knn::{
    brute_force_average_holdout_error_with_cap, gibbs_average_holdout_error, LabeledDataset,
    DEFAULT_SPLIT_CAP,
};
use ensemble_bounds::simulate::{run_coverage_experiment, CoverageReport};
use ensemble_bounds::telescope::{
    brute_force_optimize_with_cap, optimize_schedule_with_cap, JCandidates, OptimizerGrid,
    DEFAULT_CAP,
};

use crate::output::{
    csv_document, human, json_f64_array, key_value_block, machine, Format, JsonObject,
};
use crate::spec::{
    parse_bounds_list, parse_config_file, parse_distribution, parse_f64, parse_f64_list,
    parse_rule, parse_u64,
};
use crate::{BoundArgs, CliError, KindArg, KnnArgs, OptimizeArgs, SimulateArgs, SweepArgs};

fn require<T: Copy>(value: Option<T>, flag: &str, kind: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--kind {kind} requires {flag}")))
}

fn context(args: &BoundArgs, kind: &str) -> Result<BoundContext, CliError> {
    let m = require(args.m, "--m", kind)?;
    let n = require(args.n, "--n", kind)?;
    let delta = require(args.delta, "--delta", kind)?;
    Ok(BoundContext::new(m, n, delta)?)
}

fn ensemble(args: &BoundArgs, kind: &str) -> Result<EnsembleSpec, CliError> {
    Ok(EnsembleSpec::new(require(args.s, "--s", kind)?)?)
}

fn kind_name(kind: KindArg) -> &'static str {
    match kind {
        KindArg::Uniform => "uniform",
        KindArg::NearlyUniform => "nearly-uniform",
        KindArg::EnsembleUniform => "ensemble-uniform",
        KindArg::EnsembleNearlyUniform => "ensemble-nearly-uniform",
        KindArg::Observed => "observed",
        KindArg::Telescoping => "telescoping",
        KindArg::ClosedForm => "closed-form",
        KindArg::Analytic => "analytic",
        KindArg::FullClassifier => "full-classifier",
    }
}

fn evaluate(kind: KindArg, args: &BoundArgs) -> Result<BoundResult, CliError> {
    let name = kind_name(kind);
    match kind {
        KindArg::Uniform => Ok(uniform_epsilon(&context(args, name)?)),
        KindArg::NearlyUniform => {
            let ctx = context(args, name)?;
            let j = require(args.j, "--j", name)?;
            Ok(nearly_uniform_epsilon(&ctx, j)?)
        }
        KindArg::EnsembleUniform => {
            let ctx = context(args, name)?;
            let ens = ensemble(args, name)?;
            Ok(ensemble_uniform_epsilon(&ctx, &ens)?)
        }
        KindArg::EnsembleNearlyUniform => {
            let ctx = context(args, name)?;
            let ens = ensemble(args, name)?;
            let j = require(args.j, "--j", name)?;
            Ok(ensemble_nearly_uniform_epsilon(&ctx, &ens, j)?)
        }
        KindArg::Observed => {
            let ctx = context(args, name)?;
            let path = args
                .rates
                .as_ref()
                .ok_or_else(|| CliError::Usage(format!("--kind {name} requires --rates")))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let rates = text
                .split_whitespace()
                .map(|piece| parse_f64("rate", piece))
                .collect::<Result<Vec<f64>, _>>()?;
            if let Some(s) = args.s {
                if s as usize != rates.len() {
                    return Err(CliError::Usage(format!(
                        "--s {s} disagrees with {} rates in the file",
                        rates.len()
                    )));
                }
            }
            let j = require(args.j, "--j", name)?;
            if j.fract() != 0.0 || j < 1.0 {
                return Err(CliError::Usage(format!(
                    "--kind {name} needs a positive integer --j, got {j}"
                )));
            }
            let ens = EnsembleSpec::with_observed_rates(rates)?;
            Ok(ensemble_nearly_uniform_epsilon_observed(
                &ctx, &ens, j as u64,
            )?)
        }
        KindArg::Telescoping => {
            let ctx = context(args, name)?;
            let ens = ensemble(args, name)?;
            let j_values = args
                .schedule_j
                .clone()
                .ok_or_else(|| CliError::Usage(format!("--kind {name} requires --schedule-j")))?;
            let delta_values = args.schedule_delta.clone().ok_or_else(|| {
                CliError::Usage(format!("--kind {name} requires --schedule-delta"))
            })?;
            let schedule = Schedule::new(j_values, delta_values)?;
            Ok(telescoping_epsilon(&ctx, &ens, &schedule)?)
        }
        KindArg::ClosedForm => {
            let ctx = context(args, name)?;
            let ens = ensemble(args, name)?;
            let c = require(args.c, "--c", name)?;
            Ok(epsilon_star(&ctx, &ens, c)?)
        }
        KindArg::Analytic => {
            let ctx = context(args, name)?;
            let ens = ensemble(args, name)?;
            let c = require(args.c, "--c", name)?;
            Ok(epsilon_star_analytic_bound(&ctx, &ens, c)?)
        }
        KindArg::FullClassifier => {
            let base = args
                .base_kind
                .ok_or_else(|| CliError::Usage(format!("--kind {name} requires --base-kind")))?;
            if base == KindArg::FullClassifier {
                return Err(CliError::Usage(
                    "--base-kind cannot itself be full-classifier".into(),
                ));
            }
            let rate = require(args.disagreement_rate, "--disagreement-rate", name)?;
            let gibbs = evaluate(base, args)?;
            Ok(extend_full_classifier_bound(&gibbs, rate)?)
        }
    }
}

pub fn bound(args: &BoundArgs) -> Result<String, CliError> {
    let result = evaluate(args.kind, args)?;
    let schedule = result.schedule.as_ref();
    let join = |values: &[f64]| -> String {
        values
            .iter()
            .map(|&v| machine(v))
            .collect::<Vec<_>>()
            .join(";")
    };
    Ok(match args.format {
        Format::Json => {
            let mut obj = JsonObject::new();
            obj.str("kind", result.kind.as_str());
            if let Some(m) = args.m {
                obj.u64("m", m);
            }
            if let Some(n) = args.n {
                obj.u64("n", n);
            }
            if let Some(s) = args.s {
                obj.u64("s", s);
            }
            if let Some(delta) = args.delta {
                obj.f64("delta", delta);
            }
            if let Some(j) = args.j {
                obj.f64("j", j);
            }
            if let Some(c) = args.c {
                obj.f64("c", c);
            }
            if let Some(rate) = args.disagreement_rate {
                obj.f64("disagreement_rate", rate);
            }
            obj.f64("epsilon", result.epsilon);
            obj.f64("epsilon_raw", result.epsilon_raw);
            obj.f64("delta_spent", result.delta_spent);
            if let Some(schedule) = schedule {
                obj.raw(
                    "schedule",
                    &format!(
                        "{{\"j\":{},\"delta\":{}}}",
                        json_f64_array(schedule.j_values()),
                        json_f64_array(schedule.delta_values())
                    ),
                );
            }
            let mut text = obj.finish();
            text.push('\n');
            text
        }
        Format::Csv => {
            let header = [
                "kind",
                "m",
                "n",
                "s",
                "delta",
                "j",
                "c",
                "disagreement_rate",
                "epsilon",
                "epsilon_raw",
                "delta_spent",
                "schedule_j",
                "schedule_delta",
            ];
            let opt_u = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
            let opt_f = |v: Option<f64>| v.map(machine).unwrap_or_default();
            let row = vec![
                result.kind.as_str().to_string(),
                opt_u(args.m),
                opt_u(args.n),
                opt_u(args.s),
                opt_f(args.delta),
                opt_f(args.j),
                opt_f(args.c),
                opt_f(args.disagreement_rate),
                machine(result.epsilon),
                machine(result.epsilon_raw),
                machine(result.delta_spent),
                schedule.map(|s| join(s.j_values())).unwrap_or_default(),
                schedule.map(|s| join(s.delta_values())).unwrap_or_default(),
            ];
            csv_document(&header, &[row])
        }
        Format::Human => {
            let mut pairs: Vec<(&str, String)> = vec![("kind", result.kind.as_str().to_string())];
            if let Some(m) = args.m {
                pairs.push(("m", m.to_string()));
            }
            if let Some(n) = args.n {
                pairs.push(("n", n.to_string()));
            }
            if let Some(s) = args.s {
                pairs.push(("s", s.to_string()));
            }
            if let Some(delta) = args.delta {
                pairs.push(("delta", human(delta)));
            }
            if let Some(j) = args.j {
                pairs.push(("j", human(j)));
            }
            if let Some(c) = args.c {
                pairs.push(("c", human(c)));
            }
            if let Some(rate) = args.disagreement_rate {
                pairs.push(("disagreement_rate", human(rate)));
            }
            pairs.push(("epsilon", human(result.epsilon)));
            pairs.push(("epsilon_raw", human(result.epsilon_raw)));
            pairs.push(("delta_spent", human(result.delta_spent)));
            if let Some(schedule) = schedule {
                pairs.push((
                    "schedule_j",
                    schedule
                        .j_values()
                        .iter()
                        .map(|&v| human(v))
                        .collect::<Vec<_>>()
                        .join(", "),
                ));
                pairs.push((
                    "schedule_delta",
                    schedule
                        .delta_values()
                        .iter()
                        .map(|&v| human(v))
                        .collect::<Vec<_>>()
                        .join(", "),
                ));
            }
            key_value_block(&pairs)
        }
    })
}

fn parse_j_grid(
    value: &str,
    stages: usize,
    increment: f64,
    s: u64,
) -> Result<OptimizerGrid, CliError> {
    let value = value.trim();
    if value == "integers" {
        return Ok(OptimizerGrid::new(
            stages,
            increment,
            JCandidates::Integers,
        )?);
    }
    if let Some(c) = value.strip_prefix("geometric:") {
        return Ok(OptimizerGrid::geometric(
            stages,
            increment,
            parse_f64("geometric c", c)?,
            s,
        )?);
    }
    if let Some(list) = value.strip_prefix("list:") {
        let values = parse_f64_list("j grid", list, ',')?;
        return Ok(OptimizerGrid::new(
            stages,
            increment,
            JCandidates::Explicit(values),
        )?);
    }
    Err(CliError::Usage(format!(
        "unknown --j-grid {value:?}; expected integers, geometric:<c>, or list:<v,v,...>"
    )))
}

pub fn optimize(args: &OptimizeArgs) -> Result<String, CliError> {
    let ctx = BoundContext::new(args.m, args.n, args.delta)?;
    let ens = EnsembleSpec::new(args.s)?;
    let grid = parse_j_grid(&args.j_grid, args.t, args.delta_increment, args.s)?;
    let cap = args.cap.unwrap_or(DEFAULT_CAP);
    let (schedule, result) = optimize_schedule_with_cap(&ctx, &ens, &grid, cap)?;

    let oracle = if args.brute_force_check {
        let (_, oracle) = brute_force_optimize_with_cap(&ctx, &ens, &grid, cap)?;
        Some(oracle)
    } else {
        None
    };

    let text = match args.format {
        Format::Json => {
            let mut obj = JsonObject::new();
            obj.u64("m", args.m)
                .u64("n", args.n)
                .u64("s", args.s)
                .f64("delta", args.delta)
                .u64("t", args.t as u64)
                .f64("delta_increment", args.delta_increment)
                .f64("epsilon", result.epsilon)
                .f64("epsilon_raw", result.epsilon_raw)
                .f64("delta_spent", result.delta_spent)
                .raw(
                    "schedule",
                    &format!(
                        "{{\"j\":{},\"delta\":{}}}",
                        json_f64_array(schedule.j_values()),
                        json_f64_array(schedule.delta_values())
                    ),
                );
            if let Some(oracle) = &oracle {
                obj.f64("oracle_epsilon", oracle.epsilon);
                obj.bool("oracle_match", oracle.epsilon_raw == result.epsilon_raw);
            }
            let mut text = obj.finish();
            text.push('\n');
            text
        }
        Format::Csv => {
            let join = |values: &[f64]| {
                values
                    .iter()
                    .map(|&v| machine(v))
                    .collect::<Vec<_>>()
                    .join(";")
            };
            let mut header = vec![
                "m",
                "n",
                "s",
                "delta",
                "t",
                "delta_increment",
                "epsilon",
                "epsilon_raw",
                "delta_spent",
                "schedule_j",
                "schedule_delta",
            ];
            let mut row = vec![
                args.m.to_string(),
                args.n.to_string(),
                args.s.to_string(),
                machine(args.delta),
                args.t.to_string(),
                machine(args.delta_increment),
                machine(result.epsilon),
                machine(result.epsilon_raw),
                machine(result.delta_spent),
                join(schedule.j_values()),
                join(schedule.delta_values()),
            ];
            if let Some(oracle) = &oracle {
                header.push("oracle_epsilon");
                header.push("oracle_match");
                row.push(machine(oracle.epsilon));
                row.push((oracle.epsilon_raw == result.epsilon_raw).to_string());
            }
            csv_document(&header, &[row])
        }
        Format::Human => {
            let mut pairs = vec![
                ("m", args.m.to_string()),
                ("n", args.n.to_string()),
                ("s", args.s.to_string()),
                ("delta", human(args.delta)),
                ("t", args.t.to_string()),
                ("delta_increment", format!("{}", args.delta_increment)),
                ("epsilon", human(result.epsilon)),
                ("epsilon_raw", human(result.epsilon_raw)),
                ("delta_spent", human(result.delta_spent)),
                (
                    "schedule_j",
                    schedule
                        .j_values()
                        .iter()
                        .map(|&v| human(v))
                        .collect::<Vec<_>>()
                        .join(", "),
                ),
                (
                    "schedule_delta",
                    schedule
                        .delta_values()
                        .iter()
                        .map(|&v| human(v))
                        .collect::<Vec<_>>()
                        .join(", "),
                ),
            ];
            if let Some(oracle) = &oracle {
                pairs.push(("oracle_epsilon", human(oracle.epsilon)));
                pairs.push((
                    "oracle_match",
                    (oracle.epsilon_raw == result.epsilon_raw).to_string(),
                ));
            }
            key_value_block(&pairs)
        }
    };

    if let Some(oracle) = &oracle {
        if oracle.epsilon_raw != result.epsilon_raw {
            return Err(CliError::OracleMismatch {
                message: format!(
                    "optimizer epsilon {} disagrees with exhaustive search {}",
                    machine(result.epsilon_raw),
                    machine(oracle.epsilon_raw)
                ),
                output: text,
            });
        }
    }
    Ok(text)
}

pub fn knn_gibbs(args: &KnnArgs) -> Result<String, CliError> {
    let text = std::fs::read_to_string(&args.data)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", args.data.display())))?;
    let data = LabeledDataset::parse_delimited(&text, args.delimiter, args.header, args.n_holdout)?;
    let average = gibbs_average_holdout_error(&data, args.k)?;

    let oracle = if args.oracle {
        Some(brute_force_average_holdout_error_with_cap(
            &data,
            args.k,
            args.cap.unwrap_or(DEFAULT_SPLIT_CAP),
        )?)
    } else {
        None
    };
    let matched = oracle.map(|o| (o - average).abs() <= 1e-12);

    let rendered = match args.format {
        Format::Json => {
            let mut obj = JsonObject::new();
            obj.u64("points", data.len() as u64)
                .u64("r", data.r_train() as u64)
                .u64("n_holdout", data.n_holdout() as u64)
                .u64("k", args.k as u64)
                .f64("average_error", average);
            if let Some(o) = oracle {
                obj.f64("oracle_error", o);
                obj.bool("oracle_match", matched.unwrap());
            }
            let mut text = obj.finish();
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut header = vec!["points", "r", "n_holdout", "k", "average_error"];
            let mut row = vec![
                data.len().to_string(),
                data.r_train().to_string(),
                data.n_holdout().to_string(),
                args.k.to_string(),
                machine(average),
            ];
            if let Some(o) = oracle {
                header.push("oracle_error");
                header.push("oracle_match");
                row.push(machine(o));
                row.push(matched.unwrap().to_string());
            }
            csv_document(&header, &[row])
        }
        Format::Human => {
            let mut pairs = vec![
                ("points", data.len().to_string()),
                ("r", data.r_train().to_string()),
                ("n_holdout", data.n_holdout().to_string()),
                ("k", args.k.to_string()),
                ("average_error", human(average)),
            ];
            if let Some(o) = oracle {
                pairs.push(("oracle_error", human(o)));
                pairs.push(("oracle_match", matched.unwrap().to_string()));
            }
            key_value_block(&pairs)
        }
    };

    if matched == Some(false) {
        return Err(CliError::OracleMismatch {
            message: format!(
                "recurrence value {} disagrees with split enumeration {}",
                machine(average),
                machine(oracle.unwrap())
            ),
            output: rendered,
        });
    }
    Ok(rendered)
}

pub fn simulate(args: &SimulateArgs) -> Result<String, CliError> {
    let config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            parse_config_file(&text)?
        }
        None => Default::default(),
    };
    let pick_u64 = |flag: Option<u64>, key: &str| -> Result<Option<u64>, CliError> {
        match (flag, config.get(key)) {
            (Some(v), _) => Ok(Some(v)),
            (None, Some(raw)) => Ok(Some(parse_u64(key, raw)?)),
            (None, None) => Ok(None),
        }
    };
    let pick_f64 = |flag: Option<f64>, key: &str| -> Result<Option<f64>, CliError> {
        match (flag, config.get(key)) {
            (Some(v), _) => Ok(Some(v)),
            (None, Some(raw)) => Ok(Some(parse_f64(key, raw)?)),
            (None, None) => Ok(None),
        }
    };
    let pick_str = |flag: &Option<String>, key: &str| -> Option<String> {
        flag.clone().or_else(|| config.get(key).cloned())
    };

    let missing = |key: &str| CliError::Usage(format!("simulate requires {key} (flag or config)"));
    let m = pick_u64(args.m, "m")?.ok_or_else(|| missing("--m"))?;
    let n = pick_u64(args.n, "n")?.ok_or_else(|| missing("--n"))?;
    let s = pick_u64(args.s, "s")?.ok_or_else(|| missing("--s"))?;
    let delta = pick_f64(args.delta, "delta")?.ok_or_else(|| missing("--delta"))?;
    let trials = pick_u64(args.trials, "trials")?.ok_or_else(|| missing("--trials"))?;
    let seed = pick_u64(args.seed, "seed")?.unwrap_or(0);
    let rule = parse_rule(&pick_str(&args.rule, "rule").unwrap_or_else(|| "lowest".into()))?;
    let dist = parse_distribution(&pick_str(&args.dist, "dist").ok_or_else(|| missing("--dist"))?)?;
    let bounds = parse_bounds_list(
        &pick_str(&args.bounds, "bounds").ok_or_else(|| missing("--bounds"))?,
        s,
    )?;

    let world = ensemble_bounds::simulate::SyntheticWorld::new(m, n, dist, seed)?;
    let report = run_coverage_experiment(world, s, delta, rule, bounds, trials)?;
    let text = render_report(&report, args.format);
    if report.has_coverage_failure() {
        let worst = report
            .entries
            .iter()
            .max_by(|a, b| a.frequency.total_cmp(&b.frequency))
            .expect("nonempty report");
        return Err(CliError::CoverageFailure {
            message: format!(
                "bound {} violated in {} of {} trials (frequency {} > delta {})",
                worst.label,
                worst.violations,
                report.trials,
                machine(worst.frequency),
                machine(report.delta)
            ),
            output: text,
        });
    }
    Ok(text)
}

fn render_report(report: &CoverageReport, format: Format) -> String {
    match format {
        Format::Json => {
            let rows: Vec<String> = report
                .entries
                .iter()
                .map(|entry| {
                    let mut obj = JsonObject::new();
                    obj.str("label", &entry.label)
                        .str("kind", entry.kind.as_str())
                        .f64("epsilon", entry.epsilon)
                        .u64("violations", entry.violations)
                        .f64("frequency", entry.frequency)
                        .f64("upper_confidence", entry.upper_confidence);
                    obj.finish()
                })
                .collect();
            let mut obj = JsonObject::new();
            obj.u64("seed", report.seed)
                .u64("trials", report.trials)
                .f64("delta", report.delta)
                .raw("bounds", &format!("[{}]", rows.join(",")));
            let mut text = obj.finish();
            text.push('\n');
            text
        }
        Format::Csv => {
            let header = [
                "seed",
                "trials",
                "delta",
                "label",
                "kind",
                "epsilon",
                "violations",
                "frequency",
                "upper_confidence",
            ];
            let rows: Vec<Vec<String>> = report
                .entries
                .iter()
                .map(|entry| {
                    vec![
                        report.seed.to_string(),
                        report.trials.to_string(),
                        machine(report.delta),
                        entry.label.clone(),
                        entry.kind.as_str().to_string(),
                        machine(entry.epsilon),
                        entry.violations.to_string(),
                        machine(entry.frequency),
                        machine(entry.upper_confidence),
                    ]
                })
                .collect();
            csv_document(&header, &rows)
        }
        Format::Human => {
            let mut out = String::new();
            out.push_str(&format!(
                "seed {}  trials {}  delta {}\n",
                report.seed,
                report.trials,
                human(report.delta)
            ));
            let label_width = report
                .entries
                .iter()
                .map(|e| e.label.len())
                .max()
                .unwrap_or(5)
                .max(5);
            out.push_str(&format!(
                "{:<label_width$}  {:>10} {:>10} {:>10} {:>10}\n",
                "bound", "epsilon", "violations", "frequency", "ucl@0.999"
            ));
            for entry in &report.entries {
                out.push_str(&format!(
                    "{:<label_width$}  {:>10} {:>10} {:>10} {:>10}\n",
                    entry.label,
                    human(entry.epsilon),
                    entry.violations,
                    human(entry.frequency),
                    human(entry.upper_confidence),
                ));
            }
            out
        }
    }
}

pub fn sweep(args: &SweepArgs) -> Result<String, CliError> {
    let pairs: Vec<(u64, u64)> = match (&args.ratio, &args.s) {
        (Some(ratio), None) => {
            if !(*ratio >= 1.0 && ratio.is_finite()) {
                return Err(CliError::Usage(
                    "--ratio must be a finite value >= 1".into(),
                ));
            }
            args.m
                .iter()
                .map(|&m| (m, ((m as f64 / ratio).round() as u64).max(1)))
                .collect()
        }
        (None, Some(s_values)) => {
            if args.m.len() != 1 {
                return Err(CliError::Usage(
                    "--s sweeps need exactly one --m value".into(),
                ));
            }
            s_values.iter().map(|&s| (args.m[0], s)).collect()
        }
        _ => return Err(CliError::Usage(
            "sweep needs exactly one of --ratio (vary m at fixed m/s) or --s (vary s at fixed m)"
                .into(),
        )),
    };

    let mut rows = Vec::with_capacity(pairs.len());
    for &(m, s) in &pairs {
        let ctx = BoundContext::new(m, args.n, args.delta)?;
        let ens = EnsembleSpec::new(s)?;
        let star = epsilon_star(&ctx, &ens, args.c)?;
        let envelope = epsilon_star_analytic_bound(&ctx, &ens, args.c)?;
        rows.push((m, s, star, envelope));
    }

    Ok(match args.format {
        Format::Json => {
            let items: Vec<String> = rows
                .iter()
                .map(|(m, s, star, envelope)| {
                    let mut obj = JsonObject::new();
                    obj.u64("m", *m)
                        .u64("s", *s)
                        .u64("n", args.n)
                        .f64("delta", args.delta)
                        .f64("c", args.c)
                        .f64("epsilon_star", star.epsilon)
                        .f64("epsilon_star_raw", star.epsilon_raw)
                        .f64("epsilon_analytic", envelope.epsilon)
                        .f64("epsilon_analytic_raw", envelope.epsilon_raw);
                    obj.finish()
                })
                .collect();
            format!("{{\"rows\":[{}]}}\n", items.join(","))
        }
        Format::Csv => {
            let header = [
                "m",
                "s",
                "n",
                "delta",
                "c",
                "epsilon_star",
                "epsilon_star_raw",
                "epsilon_analytic",
                "epsilon_analytic_raw",
            ];
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|(m, s, star, envelope)| {
                    vec![
                        m.to_string(),
                        s.to_string(),
                        args.n.to_string(),
                        machine(args.delta),
                        machine(args.c),
                        machine(star.epsilon),
                        machine(star.epsilon_raw),
                        machine(envelope.epsilon),
                        machine(envelope.epsilon_raw),
                    ]
                })
                .collect();
            csv_document(&header, &rows)
        }
        Format::Human => {
            let mut out = String::new();
            out.push_str(&format!(
                "{:>10} {:>10} {:>8} {:>8} {:>6} {:>14} {:>16}\n",
                "m", "s", "n", "delta", "c", "epsilon_star", "epsilon_analytic"
            ));
            for (m, s, star, envelope) in &rows {
                out.push_str(&format!(
                    "{:>10} {:>10} {:>8} {:>8} {:>6} {:>14} {:>16}\n",
                    m,
                    s,
                    args.n,
                    human(args.delta),
                    human(args.c),
                    human(star.epsilon),
                    human(envelope.epsilon),
                ));
            }
            out
        }
    })
}
