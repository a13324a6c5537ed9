//! Mamdani fuzzy systems expressed in a subset of the IEEE 1855-2016
//! Fuzzy Markup Language.
//!
//! The subset is fixed: triangular, trapezoid, and singleton terms; one
//! rule base with and=MIN, or=MAX, activation=MIN, accumulation=MAX; and
//! COG or MOM defuzzification. Anything outside the subset is a parse
//! error rather than a silent default.

mod infer;
mod parse;
mod serialize;
mod xml;

pub use infer::{defuzzify, infer, InferenceOutcome, COG_SAMPLES};
pub use parse::parse_fml;
pub use serialize::serialize_fml;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FmlError {
    #[error("xml error at byte {offset}: {reason}")]
    Xml { offset: usize, reason: String },
    #[error("unsupported term shape '{name}'")]
    UnsupportedShape { name: String },
    #[error("unsupported {attribute} '{value}'")]
    UnsupportedValue { attribute: String, value: String },
    #[error("unexpected element '{name}' inside '{parent}'")]
    UnexpectedElement { name: String, parent: String },
    #[error("element '{element}' missing attribute '{attribute}'")]
    MissingAttribute { element: String, attribute: String },
    #[error("bad attribute '{attribute}' on '{element}': {reason}")]
    BadAttribute {
        element: String,
        attribute: String,
        reason: String,
    },
    #[error("invalid knowledge base: {reason}")]
    InvalidSystem { reason: String },
    #[error("rule {rule} references undeclared {what} '{name}'")]
    UndeclaredReference {
        rule: usize,
        what: String,
        name: String,
    },
    #[error("inference input '{name}' missing")]
    MissingInput { name: String },
    #[error("cannot defuzzify an all-zero aggregate")]
    EmptyAggregate,
}

/// Piecewise-linear membership function. Parameters are ordered and must
/// lie inside the owning variable's domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MembershipFunction {
    Triangular { a: f64, b: f64, c: f64 },
    Trapezoidal { a: f64, b: f64, c: f64, d: f64 },
    Singleton { value: f64 },
}

impl MembershipFunction {
    /// Membership degree of `x`, always in [0, 1]. Points outside the
    /// support yield 0; a degenerate flank (equal parameters) is a step.
    pub fn membership(&self, x: f64) -> f64 {
        match *self {
            MembershipFunction::Triangular { a, b, c } => {
                if x < a || x > c {
                    0.0
                } else if x <= b {
                    if a == b {
                        1.0
                    } else {
                        (x - a) / (b - a)
                    }
                } else {
                    (c - x) / (c - b)
                }
            }
            MembershipFunction::Trapezoidal { a, b, c, d } => {
                if x < a || x > d {
                    0.0
                } else if x < b {
                    if a == b {
                        1.0
                    } else {
                        (x - a) / (b - a)
                    }
                } else if x <= c {
                    1.0
                } else {
                    (d - x) / (d - c)
                }
            }
            MembershipFunction::Singleton { value } => {
                if (x - value).abs() <= 1e-9 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn params(&self) -> Vec<f64> {
        match *self {
            MembershipFunction::Triangular { a, b, c } => vec![a, b, c],
            MembershipFunction::Trapezoidal { a, b, c, d } => vec![a, b, c, d],
            MembershipFunction::Singleton { value } => vec![value],
        }
    }
}

/// Named term of a linguistic variable.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyTerm {
    pub name: String,
    pub mf: MembershipFunction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariableRole {
    Input,
    Output,
}

/// Linguistic variable over a closed real interval.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyVariable {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub role: VariableRole,
    pub terms: Vec<FuzzyTerm>,
}

impl FuzzyVariable {
    pub fn term(&self, name: &str) -> Option<&FuzzyTerm> {
        self.terms.iter().find(|t| t.name == name)
    }

    pub fn midpoint(&self) -> f64 {
        (self.lo + self.hi) / 2.0
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connector {
    And,
    Or,
}

/// One (variable, term) pair of a rule.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleClause {
    pub variable: String,
    pub term: String,
}

/// Mamdani rule: antecedent clauses combined with one connector, a single
/// consequent clause on the output variable, and a weight in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyRule {
    pub antecedent: Vec<RuleClause>,
    pub connector: Connector,
    pub consequent: RuleClause,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Defuzzifier {
    Cog,
    Mom,
}

impl Defuzzifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Defuzzifier::Cog => "COG",
            Defuzzifier::Mom => "MOM",
        }
    }
}

/// A validated fuzzy system. Operators are fixed to the Mamdani profile
/// and=MIN, or=MAX, activation=MIN, accumulation=MAX; exactly one output
/// variable carries all rule consequents.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySystem {
    pub name: String,
    pub variables: Vec<FuzzyVariable>,
    pub rules: Vec<FuzzyRule>,
    pub defuzzifier: Defuzzifier,
}

impl FuzzySystem {
    pub fn variable(&self, name: &str) -> Option<&FuzzyVariable> {
        self.variables.iter().find(|v| v.name == name)
    }

    pub fn inputs(&self) -> impl Iterator<Item = &FuzzyVariable> {
        self.variables
            .iter()
            .filter(|v| v.role == VariableRole::Input)
    }

    pub fn output(&self) -> &FuzzyVariable {
        self.variables
            .iter()
            .find(|v| v.role == VariableRole::Output)
            .expect("validated system has one output variable")
    }

    /// Check every structural invariant. Called by the parser; useful when
    /// a system is assembled in code.
    pub fn validate(&self) -> Result<(), FmlError> {
        let invalid = |reason: String| Err(FmlError::InvalidSystem { reason });

        let outputs: Vec<&FuzzyVariable> = self
            .variables
            .iter()
            .filter(|v| v.role == VariableRole::Output)
            .collect();
        if outputs.len() > 1 {
            return invalid("more than one output variable".to_string());
        }
        if outputs.is_empty() {
            return invalid("no output variable declared".to_string());
        }
        let output_name = outputs[0].name.clone();

        for (i, var) in self.variables.iter().enumerate() {
            if self.variables[..i].iter().any(|v| v.name == var.name) {
                return invalid(format!("duplicate variable '{}'", var.name));
            }
            if !var.lo.is_finite() || !var.hi.is_finite() || var.lo >= var.hi {
                return invalid(format!(
                    "variable '{}' has invalid domain [{}, {}]",
                    var.name, var.lo, var.hi
                ));
            }
            for (j, term) in var.terms.iter().enumerate() {
                if var.terms[..j].iter().any(|t| t.name == term.name) {
                    return invalid(format!(
                        "duplicate term '{}' in variable '{}'",
                        term.name, var.name
                    ));
                }
                let params = term.mf.params();
                if params.iter().any(|p| !p.is_finite()) {
                    return invalid(format!(
                        "term '{}' of '{}' has a non-finite parameter",
                        term.name, var.name
                    ));
                }
                if params.windows(2).any(|w| w[0] > w[1]) {
                    return invalid(format!(
                        "term '{}' of '{}' has unordered parameters",
                        term.name, var.name
                    ));
                }
                if params.iter().any(|&p| p < var.lo || p > var.hi) {
                    return invalid(format!(
                        "term '{}' of '{}' has parameters outside [{}, {}]",
                        term.name, var.name, var.lo, var.hi
                    ));
                }
            }
        }

        for (i, rule) in self.rules.iter().enumerate() {
            if rule.antecedent.is_empty() {
                return invalid(format!("rule {} has an empty antecedent", i + 1));
            }
            if !(0.0..=1.0).contains(&rule.weight) {
                return invalid(format!(
                    "rule {} weight {} outside [0, 1]",
                    i + 1,
                    rule.weight
                ));
            }
            for clause in &rule.antecedent {
                let var = self.check_clause(i + 1, clause)?;
                if var.role != VariableRole::Input {
                    return invalid(format!(
                        "rule {} antecedent uses output variable '{}'",
                        i + 1,
                        clause.variable
                    ));
                }
            }
            let var = self.check_clause(i + 1, &rule.consequent)?;
            if var.name != output_name {
                return invalid(format!(
                    "rule {} consequent must use output variable '{output_name}'",
                    i + 1
                ));
            }
        }
        Ok(())
    }

    fn check_clause(&self, rule: usize, clause: &RuleClause) -> Result<&FuzzyVariable, FmlError> {
        let var = self.variable(&clause.variable).ok_or_else(|| {
            FmlError::UndeclaredReference {
                rule,
                what: "variable".to_string(),
                name: clause.variable.clone(),
            }
        })?;
        if var.term(&clause.term).is_none() {
            return Err(FmlError::UndeclaredReference {
                rule,
                what: "term".to_string(),
                name: format!("{}.{}", clause.variable, clause.term),
            });
        }
        Ok(var)
    }
}
