//! Mamdani inference and defuzzification.

use super::{Connector, Defuzzifier, FmlError, FuzzySystem};
use std::collections::HashMap;

/// Number of uniform samples used to discretize the output domain.
/// Fixed so that inference is deterministic and the COG error for
/// piecewise-linear aggregates stays within 1e-3 of the domain width.
pub const COG_SAMPLES: usize = 1001;

/// Result of one inference run.
#[derive(Debug, Clone, PartialEq)]
pub struct InferenceOutcome {
    /// Defuzzified output value.
    pub crisp: f64,
    /// Output term with the highest membership at `crisp` (first declared
    /// wins ties).
    pub label: String,
    /// Firing strength of each rule, aligned with the system's rule list.
    pub activations: Vec<f64>,
    /// True when no rule fired and the outcome fell back to the domain
    /// midpoint.
    pub fallback: bool,
}

/// Run the Mamdani pipeline: fuzzify, fire rules (MIN activation, weight
/// scaled), accumulate with MAX on a sampled grid, then defuzzify.
///
/// Inputs outside a variable's domain are clamped. When no rule fires the
/// outcome is flagged and reports the domain midpoint.
pub fn infer(
    system: &FuzzySystem,
    inputs: &HashMap<String, f64>,
) -> Result<InferenceOutcome, FmlError> {
    let mut clamped: HashMap<&str, f64> = HashMap::new();
    for var in system.inputs() {
        let value = inputs
            .get(&var.name)
            .copied()
            .ok_or_else(|| FmlError::MissingInput {
                name: var.name.clone(),
            })?;
        clamped.insert(var.name.as_str(), var.clamp(value));
    }

    let activations: Vec<f64> = system
        .rules
        .iter()
        .map(|rule| {
            let degrees = rule.antecedent.iter().map(|clause| {
                let var = system.variable(&clause.variable).expect("validated");
                let term = var.term(&clause.term).expect("validated");
                term.mf.membership(clamped[clause.variable.as_str()])
            });
            let combined = match rule.connector {
                Connector::And => degrees.fold(1.0_f64, f64::min),
                Connector::Or => degrees.fold(0.0_f64, f64::max),
            };
            combined * rule.weight
        })
        .collect();

    let output = system.output();
    if activations.iter().all(|&a| a <= 0.0) {
        return Ok(fallback_outcome(system, activations));
    }

    let step = (output.hi - output.lo) / (COG_SAMPLES - 1) as f64;
    let aggregate: Vec<f64> = (0..COG_SAMPLES)
        .map(|i| {
            let x = output.lo + step * i as f64;
            system
                .rules
                .iter()
                .zip(&activations)
                .map(|(rule, &activation)| {
                    let term = output.term(&rule.consequent.term).expect("validated");
                    activation.min(term.mf.membership(x))
                })
                .fold(0.0_f64, f64::max)
        })
        .collect();

    let crisp = match defuzzify(&aggregate, output.lo, output.hi, system.defuzzifier) {
        Ok(v) => v,
        // Positive activation but nothing landed on the grid (e.g. an
        // off-grid singleton consequent): treat as the no-fire case.
        Err(FmlError::EmptyAggregate) => return Ok(fallback_outcome(system, activations)),
        Err(e) => return Err(e),
    };

    Ok(InferenceOutcome {
        crisp,
        label: label_at(system, crisp),
        activations,
        fallback: false,
    })
}

fn fallback_outcome(system: &FuzzySystem, activations: Vec<f64>) -> InferenceOutcome {
    let crisp = system.output().midpoint();
    InferenceOutcome {
        crisp,
        label: label_at(system, crisp),
        activations,
        fallback: true,
    }
}

fn label_at(system: &FuzzySystem, crisp: f64) -> String {
    let output = system.output();
    let mut best: Option<(&str, f64)> = None;
    for term in &output.terms {
        let degree = term.mf.membership(crisp);
        if best.map_or(true, |(_, d)| degree > d) {
            best = Some((&term.name, degree));
        }
    }
    best.map(|(name, _)| name.to_string()).unwrap_or_default()
}

/// Defuzzify a membership curve sampled uniformly over [lo, hi].
///
/// COG is the discrete centroid; MOM is the mean of the grid points that
/// reach the maximum. An all-zero aggregate is an error so callers can
/// route through their no-rule-fires handling.
pub fn defuzzify(
    aggregate: &[f64],
    lo: f64,
    hi: f64,
    method: Defuzzifier,
) -> Result<f64, FmlError> {
    assert!(aggregate.len() >= 2, "aggregate needs at least two samples");
    let step = (hi - lo) / (aggregate.len() - 1) as f64;
    let max = aggregate.iter().copied().fold(0.0_f64, f64::max);
    if max <= 0.0 {
        return Err(FmlError::EmptyAggregate);
    }
    match method {
        Defuzzifier::Cog => {
            let mut numerator = 0.0;
            let mut denominator = 0.0;
            for (i, &mu) in aggregate.iter().enumerate() {
                let x = lo + step * i as f64;
                numerator += x * mu;
                denominator += mu;
            }
            Ok(numerator / denominator)
        }
        Defuzzifier::Mom => {
            let mut sum = 0.0;
            let mut count = 0usize;
            for (i, &mu) in aggregate.iter().enumerate() {
                if mu >= max - 1e-12 {
                    sum += lo + step * i as f64;
                    count += 1;
                }
            }
            Ok(sum / count as f64)
        }
    }
}
