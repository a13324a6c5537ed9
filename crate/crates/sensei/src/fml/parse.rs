//! FML document reader.

use super::xml::{parse_document, XmlElement};
use super::{
    Connector, Defuzzifier, FmlError, FuzzyRule, FuzzySystem, FuzzyTerm, FuzzyVariable,
    MembershipFunction, RuleClause, VariableRole,
};

/// Parse an FML document into a validated [`FuzzySystem`].
pub fn parse_fml(text: &str) -> Result<FuzzySystem, FmlError> {
    let root = parse_document(text)?;
    if root.name != "fuzzySystem" {
        return Err(FmlError::UnexpectedElement {
            name: root.name,
            parent: "document root".to_string(),
        });
    }
    check_attrs(&root, &["name"])?;
    let name = root.attr("name").unwrap_or("").to_string();

    let mut knowledge_base = None;
    let mut rule_base = None;
    for child in &root.children {
        match child.name.as_str() {
            "fuzzyKnowledgeBase" if knowledge_base.is_none() => knowledge_base = Some(child),
            "ruleBase" if rule_base.is_none() => rule_base = Some(child),
            _ => {
                return Err(FmlError::UnexpectedElement {
                    name: child.name.clone(),
                    parent: "fuzzySystem".to_string(),
                })
            }
        }
    }
    let knowledge_base = knowledge_base.ok_or_else(|| FmlError::InvalidSystem {
        reason: "missing fuzzyKnowledgeBase".to_string(),
    })?;
    let rule_base = rule_base.ok_or_else(|| FmlError::InvalidSystem {
        reason: "missing ruleBase".to_string(),
    })?;

    let mut defuzzifier = Defuzzifier::Cog;
    let mut variables = Vec::new();
    check_attrs(knowledge_base, &[])?;
    for child in &knowledge_base.children {
        if child.name != "fuzzyVariable" {
            return Err(FmlError::UnexpectedElement {
                name: child.name.clone(),
                parent: "fuzzyKnowledgeBase".to_string(),
            });
        }
        let (variable, defuzz) = parse_variable(child)?;
        if let Some(d) = defuzz {
            defuzzifier = d;
        }
        variables.push(variable);
    }

    let rules = parse_rule_base(rule_base)?;

    let system = FuzzySystem {
        name,
        variables,
        rules,
        defuzzifier,
    };
    system.validate()?;
    Ok(system)
}

fn check_attrs(element: &XmlElement, allowed: &[&str]) -> Result<(), FmlError> {
    for (key, _) in &element.attrs {
        if !allowed.contains(&key.as_str()) {
            return Err(FmlError::BadAttribute {
                element: element.name.clone(),
                attribute: key.clone(),
                reason: "not part of the supported subset".to_string(),
            });
        }
    }
    Ok(())
}

fn required<'a>(element: &'a XmlElement, attr: &str) -> Result<&'a str, FmlError> {
    element.attr(attr).ok_or_else(|| FmlError::MissingAttribute {
        element: element.name.clone(),
        attribute: attr.to_string(),
    })
}

fn float_attr(element: &XmlElement, attr: &str) -> Result<f64, FmlError> {
    let raw = required(element, attr)?;
    raw.trim()
        .parse::<f64>()
        .map_err(|_| FmlError::BadAttribute {
            element: element.name.clone(),
            attribute: attr.to_string(),
            reason: format!("'{raw}' is not a number"),
        })
}

fn parse_variable(element: &XmlElement) -> Result<(FuzzyVariable, Option<Defuzzifier>), FmlError> {
    check_attrs(
        element,
        &["name", "domainleft", "domainright", "type", "defuzzifier"],
    )?;
    let name = required(element, "name")?.to_string();
    let lo = float_attr(element, "domainleft")?;
    let hi = float_attr(element, "domainright")?;
    let role = match required(element, "type")? {
        "input" => VariableRole::Input,
        "output" => VariableRole::Output,
        other => {
            return Err(FmlError::UnsupportedValue {
                attribute: "type".to_string(),
                value: other.to_string(),
            })
        }
    };
    let defuzzifier = match element.attr("defuzzifier") {
        None => None,
        Some(_) if role == VariableRole::Input => {
            return Err(FmlError::BadAttribute {
                element: element.name.clone(),
                attribute: "defuzzifier".to_string(),
                reason: "only allowed on the output variable".to_string(),
            })
        }
        Some("COG") => Some(Defuzzifier::Cog),
        Some("MOM") => Some(Defuzzifier::Mom),
        Some(other) => {
            return Err(FmlError::UnsupportedValue {
                attribute: "defuzzifier".to_string(),
                value: other.to_string(),
            })
        }
    };

    let mut terms = Vec::new();
    for child in &element.children {
        if child.name != "fuzzyTerm" {
            return Err(FmlError::UnexpectedElement {
                name: child.name.clone(),
                parent: "fuzzyVariable".to_string(),
            });
        }
        terms.push(parse_term(child)?);
    }

    Ok((
        FuzzyVariable {
            name,
            lo,
            hi,
            role,
            terms,
        },
        defuzzifier,
    ))
}

fn parse_term(element: &XmlElement) -> Result<FuzzyTerm, FmlError> {
    check_attrs(element, &["name"])?;
    let name = required(element, "name")?.to_string();
    let [shape] = element.children.as_slice() else {
        return Err(FmlError::InvalidSystem {
            reason: format!("term '{name}' must hold exactly one shape element"),
        });
    };
    let mf = match shape.name.as_str() {
        "triangularShape" => {
            check_attrs(shape, &["param1", "param2", "param3"])?;
            MembershipFunction::Triangular {
                a: float_attr(shape, "param1")?,
                b: float_attr(shape, "param2")?,
                c: float_attr(shape, "param3")?,
            }
        }
        "trapezoidShape" => {
            check_attrs(shape, &["param1", "param2", "param3", "param4"])?;
            MembershipFunction::Trapezoidal {
                a: float_attr(shape, "param1")?,
                b: float_attr(shape, "param2")?,
                c: float_attr(shape, "param3")?,
                d: float_attr(shape, "param4")?,
            }
        }
        "singletonShape" => {
            check_attrs(shape, &["param1"])?;
            MembershipFunction::Singleton {
                value: float_attr(shape, "param1")?,
            }
        }
        other => {
            return Err(FmlError::UnsupportedShape {
                name: other.to_string(),
            })
        }
    };
    Ok(FuzzyTerm { name, mf })
}

fn parse_rule_base(element: &XmlElement) -> Result<Vec<FuzzyRule>, FmlError> {
    check_attrs(
        element,
        &["andMethod", "orMethod", "activationMethod", "accumulationMethod"],
    )?;
    // Operators are fixed; a document may state them but only with the
    // supported values.
    for (attr, expected) in [
        ("andMethod", "MIN"),
        ("orMethod", "MAX"),
        ("activationMethod", "MIN"),
        ("accumulationMethod", "MAX"),
    ] {
        if let Some(value) = element.attr(attr) {
            if value != expected {
                return Err(FmlError::UnsupportedValue {
                    attribute: attr.to_string(),
                    value: value.to_string(),
                });
            }
        }
    }

    let mut rules = Vec::new();
    for (i, child) in element.children.iter().enumerate() {
        if child.name != "rule" {
            return Err(FmlError::UnexpectedElement {
                name: child.name.clone(),
                parent: "ruleBase".to_string(),
            });
        }
        rules.push(parse_rule(child, i + 1)?);
    }
    Ok(rules)
}

fn parse_rule(element: &XmlElement, rule_no: usize) -> Result<FuzzyRule, FmlError> {
    check_attrs(element, &["connector", "weight"])?;
    let connector = match element.attr("connector").unwrap_or("and") {
        c if c.eq_ignore_ascii_case("and") => Connector::And,
        c if c.eq_ignore_ascii_case("or") => Connector::Or,
        other => {
            return Err(FmlError::UnsupportedValue {
                attribute: "connector".to_string(),
                value: other.to_string(),
            })
        }
    };
    let weight = match element.attr("weight") {
        None => 1.0,
        Some(_) => float_attr(element, "weight")?,
    };

    let mut antecedent = None;
    let mut consequent = None;
    for child in &element.children {
        match child.name.as_str() {
            "antecedent" if antecedent.is_none() => antecedent = Some(child),
            "consequent" if consequent.is_none() => consequent = Some(child),
            _ => {
                return Err(FmlError::UnexpectedElement {
                    name: child.name.clone(),
                    parent: "rule".to_string(),
                })
            }
        }
    }
    let missing = |part: &str| FmlError::InvalidSystem {
        reason: format!("rule {rule_no} is missing its {part}"),
    };
    let antecedent = antecedent.ok_or_else(|| missing("antecedent"))?;
    let consequent = consequent.ok_or_else(|| missing("consequent"))?;

    let antecedent_clauses = parse_clauses(antecedent)?;
    let mut consequent_clauses = parse_clauses(consequent)?;
    if consequent_clauses.len() != 1 {
        return Err(FmlError::InvalidSystem {
            reason: format!("rule {rule_no} must have exactly one consequent clause"),
        });
    }

    Ok(FuzzyRule {
        antecedent: antecedent_clauses,
        connector,
        consequent: consequent_clauses.remove(0),
        weight,
    })
}

fn parse_clauses(element: &XmlElement) -> Result<Vec<RuleClause>, FmlError> {
    check_attrs(element, &[])?;
    let mut clauses = Vec::new();
    for child in &element.children {
        if child.name != "clause" {
            return Err(FmlError::UnexpectedElement {
                name: child.name.clone(),
                parent: element.name.clone(),
            });
        }
        check_attrs(child, &[])?;
        let mut variable = None;
        let mut term = None;
        for part in &child.children {
            match part.name.as_str() {
                "variable" if variable.is_none() => variable = Some(part.text.trim().to_string()),
                "term" if term.is_none() => term = Some(part.text.trim().to_string()),
                _ => {
                    return Err(FmlError::UnexpectedElement {
                        name: part.name.clone(),
                        parent: "clause".to_string(),
                    })
                }
            }
        }
        let incomplete = || FmlError::InvalidSystem {
            reason: "clause must hold one variable and one term".to_string(),
        };
        clauses.push(RuleClause {
            variable: variable.ok_or_else(incomplete)?,
            term: term.ok_or_else(incomplete)?,
        });
    }
    Ok(clauses)
}
