//! Shipped assessment systems.
//!
//! Both rule bases are generated over a full grid of input terms so that
//! they are total (some rule fires for every input vector) and
//! color-symmetric by construction: mirroring the inputs mirrors the
//! consequent. The `.fml` documents shipped with the crate are the
//! serialized form of these builders.

use super::FmlVariant;
use crate::fml::{
    parse_fml, Connector, Defuzzifier, FuzzyRule, FuzzySystem, FuzzyTerm, FuzzyVariable,
    MembershipFunction, RuleClause, VariableRole,
};

/// Document text shipped for FML Assessment-1.
pub const ASSESSMENT1_FML: &str = include_str!("../../fml/assessment1.fml");
/// Document text shipped for FML Assessment-2.
pub const ASSESSMENT2_FML: &str = include_str!("../../fml/assessment2.fml");

/// Parse the shipped document for a variant.
pub fn default_fml_system(variant: FmlVariant) -> FuzzySystem {
    let text = match variant {
        FmlVariant::One => ASSESSMENT1_FML,
        FmlVariant::Two => ASSESSMENT2_FML,
    };
    parse_fml(text).expect("shipped documents are valid")
}

fn tri(name: &str, a: f64, b: f64, c: f64) -> FuzzyTerm {
    FuzzyTerm {
        name: name.to_string(),
        mf: MembershipFunction::Triangular { a, b, c },
    }
}

fn trap(name: &str, a: f64, b: f64, c: f64, d: f64) -> FuzzyTerm {
    FuzzyTerm {
        name: name.to_string(),
        mf: MembershipFunction::Trapezoidal { a, b, c, d },
    }
}

/// Input terms in domain order with their Black-negative advantage codes.
/// White-leaning values sit low in the wr domain, so the code runs +2..-2.
const FIVE_CODES: [(&str, i32); 5] = [
    ("white_big", 2),
    ("white_small", 1),
    ("even", 0),
    ("black_small", -1),
    ("black_big", -2),
];

const THREE_CODES: [(&str, i32); 3] = [("white_ahead", 1), ("even", 0), ("black_ahead", -1)];

fn wr_variable() -> FuzzyVariable {
    FuzzyVariable {
        name: "wr_black".to_string(),
        lo: 0.0,
        hi: 1.0,
        role: VariableRole::Input,
        terms: vec![
            trap("white_big", 0.0, 0.0, 0.2, 0.4),
            tri("white_small", 0.2, 0.4, 0.5),
            tri("even", 0.4, 0.5, 0.6),
            tri("black_small", 0.5, 0.6, 0.8),
            trap("black_big", 0.6, 0.8, 1.0, 1.0),
        ],
    }
}

fn sim_variable() -> FuzzyVariable {
    FuzzyVariable {
        name: "sim_share".to_string(),
        lo: -1.0,
        hi: 1.0,
        role: VariableRole::Input,
        terms: vec![
            trap("white_big", -1.0, -1.0, -0.5, -0.25),
            tri("white_small", -0.5, -0.25, 0.0),
            tri("even", -0.25, 0.0, 0.25),
            tri("black_small", 0.0, 0.25, 0.5),
            trap("black_big", 0.25, 0.5, 1.0, 1.0),
        ],
    }
}

fn tmr_variable() -> FuzzyVariable {
    FuzzyVariable {
        name: "tmr_diff".to_string(),
        lo: -1.0,
        hi: 1.0,
        role: VariableRole::Input,
        terms: vec![
            trap("white_ahead", -1.0, -1.0, -0.2, 0.0),
            tri("even", -0.2, 0.0, 0.2),
            trap("black_ahead", 0.0, 0.2, 1.0, 1.0),
        ],
    }
}

fn cgs_variable() -> FuzzyVariable {
    FuzzyVariable {
        name: "cgs".to_string(),
        lo: -2.0,
        hi: 2.0,
        role: VariableRole::Output,
        terms: vec![
            tri("B2", -2.0, -2.0, -1.0),
            tri("B1", -2.0, -1.0, 0.0),
            tri("U", -1.0, 0.0, 1.0),
            tri("W1", 0.0, 1.0, 2.0),
            tri("W2", 1.0, 2.0, 2.0),
        ],
    }
}

fn cgs_term_for(code: i32) -> &'static str {
    match code {
        -2 => "B2",
        -1 => "B1",
        0 => "U",
        1 => "W1",
        2 => "W2",
        _ => unreachable!("codes are clamped to [-2, 2]"),
    }
}

fn rule(clauses: Vec<(&str, &str)>, consequent_code: i32) -> FuzzyRule {
    FuzzyRule {
        antecedent: clauses
            .into_iter()
            .map(|(variable, term)| RuleClause {
                variable: variable.to_string(),
                term: term.to_string(),
            })
            .collect(),
        connector: Connector::And,
        consequent: RuleClause {
            variable: "cgs".to_string(),
            term: cgs_term_for(consequent_code).to_string(),
        },
        weight: 1.0,
    }
}

/// Round half away from zero and clamp to the label range.
fn blend(weighted_sum: f64, total_weight: f64) -> i32 {
    (weighted_sum / total_weight).round().clamp(-2.0, 2.0) as i32
}

/// Build a shipped assessment system programmatically. Winning rate is
/// weighted strongest, simulation share next, top-move rate least.
pub fn build_fml_system(variant: FmlVariant) -> FuzzySystem {
    let mut variables = vec![wr_variable(), sim_variable()];
    if variant == FmlVariant::Two {
        variables.push(tmr_variable());
    }
    variables.push(cgs_variable());

    let mut rules = Vec::new();
    match variant {
        FmlVariant::One => {
            for (wr_term, wr_code) in FIVE_CODES {
                for (sim_term, sim_code) in FIVE_CODES {
                    let code = blend((3 * wr_code + sim_code) as f64, 4.0);
                    rules.push(rule(
                        vec![("wr_black", wr_term), ("sim_share", sim_term)],
                        code,
                    ));
                }
            }
        }
        FmlVariant::Two => {
            for (wr_term, wr_code) in FIVE_CODES {
                for (sim_term, sim_code) in FIVE_CODES {
                    for (tmr_term, tmr_code) in THREE_CODES {
                        let code = blend((6 * wr_code + 2 * sim_code + tmr_code) as f64, 8.0);
                        rules.push(rule(
                            vec![
                                ("wr_black", wr_term),
                                ("sim_share", sim_term),
                                ("tmr_diff", tmr_term),
                            ],
                            code,
                        ));
                    }
                }
            }
        }
    }

    let system = FuzzySystem {
        name: match variant {
            FmlVariant::One => "assessment1".to_string(),
            FmlVariant::Two => "assessment2".to_string(),
        },
        variables,
        rules,
        defuzzifier: Defuzzifier::Cog,
    };
    system.validate().expect("generated system is valid");
    system
}
