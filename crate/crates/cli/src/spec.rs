//! Flag-value grammars: bound-under-test lists, selection rules, rate
//! distributions, the key=value experiment config file, and small list
//! parsers shared by the subcommands.

use std::collections::HashMap;
use std::path::Path;

use ensemble_bounds::bounds::Schedule;
use ensemble_bounds::simulate::{BoundSpecUnderTest, RateDistribution, SelectionRule};
use ensemble_bounds::telescope::{JCandidates, OptimizerGrid};

use crate::CliError;

pub fn parse_f64(field: &str, value: &str) -> Result<f64, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{field}: not a number: {value:?}")))
}

pub fn parse_u64(field: &str, value: &str) -> Result<u64, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{field}: not an integer: {value:?}")))
}

pub fn parse_f64_list(field: &str, value: &str, separator: char) -> Result<Vec<f64>, CliError> {
    value
        .split(separator)
        .map(|piece| parse_f64(field, piece))
        .collect()
}

/// Selection rule grammar: `lowest`, `random`, or `threshold:<tau>`.
pub fn parse_rule(value: &str) -> Result<SelectionRule, CliError> {
    let value = value.trim();
    match value {
        "lowest" => Ok(SelectionRule::LowestS),
        "random" => Ok(SelectionRule::RandomS),
        _ => {
            if let Some(tau) = value.strip_prefix("threshold:") {
                Ok(SelectionRule::Threshold(parse_f64("threshold", tau)?))
            } else {
                Err(CliError::Usage(format!(
                    "unknown selection rule {value:?}; expected lowest, random, or threshold:<tau>"
                )))
            }
        }
    }
}

/// Rate distribution grammar: `uniform:<lo>,<hi>`, `two-point:<pl>,<ph>,<frac>`,
/// or `fixed:<path>` (whitespace-separated rates, one per classifier).
pub fn parse_distribution(value: &str) -> Result<RateDistribution, CliError> {
    let value = value.trim();
    if let Some(args) = value.strip_prefix("uniform:") {
        let parts = parse_f64_list("uniform", args, ',')?;
        if parts.len() != 2 {
            return Err(CliError::Usage("uniform distribution takes lo,hi".into()));
        }
        return Ok(RateDistribution::UniformOnInterval {
            lo: parts[0],
            hi: parts[1],
        });
    }
    if let Some(args) = value.strip_prefix("two-point:") {
        let parts = parse_f64_list("two-point", args, ',')?;
        if parts.len() != 3 {
            return Err(CliError::Usage(
                "two-point distribution takes p_low,p_high,fraction_low".into(),
            ));
        }
        return Ok(RateDistribution::TwoPoint {
            p_low: parts[0],
            p_high: parts[1],
            fraction_low: parts[2],
        });
    }
    if let Some(path) = value.strip_prefix("fixed:") {
        let text = std::fs::read_to_string(Path::new(path.trim()))
            .map_err(|e| CliError::Usage(format!("cannot read rate file {path:?}: {e}")))?;
        let rates = text
            .split_whitespace()
            .map(|piece| parse_f64("fixed rate", piece))
            .collect::<Result<Vec<f64>, _>>()?;
        return Ok(RateDistribution::FixedList(rates));
    }
    Err(CliError::Usage(format!(
        "unknown distribution {value:?}; expected uniform:lo,hi, two-point:pl,ph,frac, or fixed:<path>"
    )))
}

/// Bounds-under-test grammar: a comma-separated list of specs, each
/// `name[:key=value]*` with `|`-separated lists inside values.
///
/// ```text
/// ensemble-uniform
/// ensemble-nearly-uniform:j=5
/// observed:j=2
/// telescoping:j=10|2:delta=0.03|0.015|0.005
/// dp:t=2:inc=0.0025            (optional :grid=integers|geometric-<c>)
/// closed-form:c=3
/// analytic:c=3
/// ```
pub fn parse_bounds_list(value: &str, s: u64) -> Result<Vec<BoundSpecUnderTest>, CliError> {
    let mut bounds = Vec::new();
    for piece in value.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        bounds.push(parse_bound_spec(piece, s)?);
    }
    if bounds.is_empty() {
        return Err(CliError::Usage("empty bounds list".into()));
    }
    Ok(bounds)
}

fn parse_bound_spec(spec: &str, s: u64) -> Result<BoundSpecUnderTest, CliError> {
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or_default().trim();
    let mut params: HashMap<&str, &str> = HashMap::new();
    for part in parts {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("bound parameter {part:?} is not key=value")))?;
        params.insert(key.trim(), value.trim());
    }
    let require = |key: &str| -> Result<&str, CliError> {
        params
            .get(key)
            .copied()
            .ok_or_else(|| CliError::Usage(format!("bound {name:?} requires {key}=")))
    };
    match name {
        "ensemble-uniform" => Ok(BoundSpecUnderTest::EnsembleUniform),
        "ensemble-nearly-uniform" => Ok(BoundSpecUnderTest::EnsembleNearlyUniform {
            j: parse_f64("j", require("j")?)?,
        }),
        "observed" => Ok(BoundSpecUnderTest::EnsembleNearlyUniformObserved {
            j: parse_u64("j", require("j")?)?,
        }),
        "telescoping" => {
            let j = parse_f64_list("j", require("j")?, '|')?;
            let delta = parse_f64_list("delta", require("delta")?, '|')?;
            let schedule = Schedule::new(j, delta)
                .map_err(|e| CliError::Usage(format!("telescoping schedule: {e}")))?;
            Ok(BoundSpecUnderTest::Telescoping { schedule })
        }
        "dp" => {
            let t = parse_u64("t", require("t")?)? as usize;
            let inc = parse_f64("inc", require("inc")?)?;
            let grid = match params.get("grid").copied() {
                None | Some("integers") => OptimizerGrid::new(t, inc, JCandidates::Integers),
                Some(other) => {
                    if let Some(c) = other.strip_prefix("geometric-") {
                        OptimizerGrid::geometric(t, inc, parse_f64("grid c", c)?, s)
                    } else {
                        return Err(CliError::Usage(format!(
                            "unknown dp grid {other:?}; expected integers or geometric-<c>"
                        )));
                    }
                }
            }
            .map_err(|e| CliError::Usage(format!("dp grid: {e}")))?;
            Ok(BoundSpecUnderTest::DpOptimized { grid })
        }
        "closed-form" => Ok(BoundSpecUnderTest::ClosedForm {
            c: parse_f64("c", require("c")?)?,
        }),
        "analytic" => Ok(BoundSpecUnderTest::AnalyticEnvelope {
            c: parse_f64("c", require("c")?)?,
        }),
        other => Err(CliError::Usage(format!("unknown bound kind {other:?}"))),
    }
}

/// Key = value experiment config, one entry per line, `#` comments.
pub fn parse_config_file(text: &str) -> Result<HashMap<String, String>, CliError> {
    const KEYS: &[&str] = &[
        "m", "n", "s", "delta", "trials", "seed", "rule", "dist", "bounds",
    ];
    let mut map = HashMap::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value", line_no + 1))
        })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(CliError::Usage(format!(
                "config line {}: unknown key {key:?}",
                line_no + 1
            )));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}
