//! FML document writer. Output is deterministic and parses back to an
//! equal system.

use super::{Connector, FuzzySystem, MembershipFunction, RuleClause, VariableRole};
use std::fmt::Write;

pub fn serialize_fml(system: &FuzzySystem) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(out, "<fuzzySystem name=\"{}\">", escape(&system.name)).expect("string write");
    out.push_str("  <fuzzyKnowledgeBase>\n");
    for var in &system.variables {
        let role = match var.role {
            VariableRole::Input => "input",
            VariableRole::Output => "output",
        };
        write!(
            out,
            "    <fuzzyVariable name=\"{}\" domainleft=\"{}\" domainright=\"{}\" type=\"{}\"",
            escape(&var.name),
            var.lo,
            var.hi,
            role
        )
        .expect("string write");
        if var.role == VariableRole::Output {
            write!(out, " defuzzifier=\"{}\"", system.defuzzifier.keyword()).expect("string write");
        }
        out.push_str(">\n");
        for term in &var.terms {
            writeln!(out, "      <fuzzyTerm name=\"{}\">", escape(&term.name))
                .expect("string write");
            let shape = match term.mf {
                MembershipFunction::Triangular { a, b, c } => format!(
                    "<triangularShape param1=\"{a}\" param2=\"{b}\" param3=\"{c}\"/>"
                ),
                MembershipFunction::Trapezoidal { a, b, c, d } => format!(
                    "<trapezoidShape param1=\"{a}\" param2=\"{b}\" param3=\"{c}\" param4=\"{d}\"/>"
                ),
                MembershipFunction::Singleton { value } => {
                    format!("<singletonShape param1=\"{value}\"/>")
                }
            };
            writeln!(out, "        {shape}").expect("string write");
            out.push_str("      </fuzzyTerm>\n");
        }
        out.push_str("    </fuzzyVariable>\n");
    }
    out.push_str("  </fuzzyKnowledgeBase>\n");
    out.push_str(
        "  <ruleBase andMethod=\"MIN\" orMethod=\"MAX\" activationMethod=\"MIN\" accumulationMethod=\"MAX\">\n",
    );
    for rule in &system.rules {
        let connector = match rule.connector {
            Connector::And => "and",
            Connector::Or => "or",
        };
        writeln!(
            out,
            "    <rule connector=\"{}\" weight=\"{}\">",
            connector, rule.weight
        )
        .expect("string write");
        out.push_str("      <antecedent>\n");
        for clause in &rule.antecedent {
            write_clause(&mut out, clause);
        }
        out.push_str("      </antecedent>\n");
        out.push_str("      <consequent>\n");
        write_clause(&mut out, &rule.consequent);
        out.push_str("      </consequent>\n");
        out.push_str("    </rule>\n");
    }
    out.push_str("  </ruleBase>\n");
    out.push_str("</fuzzySystem>\n");
    out
}

fn write_clause(out: &mut String, clause: &RuleClause) {
    writeln!(
        out,
        "        <clause>\n          <variable>{}</variable>\n          <term>{}</term>\n        </clause>",
        escape(&clause.variable),
        escape(&clause.term)
    )
    .expect("string write");
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
