//! Text certificates.
//!
//! ```text
//! system S4
//! 1: p -> p ; TAUT
//! 2: K1 (p -> p) ; NEC 1 1
//! ```
//!
//! Step references are 1-based. `NEC i j` and `RM i j` name the agent
//! first, then the premise step. `system TOPOS4` selects the
//! interior-operator rules (`AXN`, `AXR`, `RM`, no `NEC`).

use std::fmt::{self, Write as _};

use thiserror::Error;

use super::{check_proof, check_with, CheckError, Proof, Rule, RuleSet, Step, System};
use crate::formula::{parse, Agent, Formula, SchemaName};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertSystem {
    Normal(System),
    Topo,
}

impl CertSystem {
    pub fn name(&self) -> String {
        match self {
            CertSystem::Normal(s) => s.name(),
            CertSystem::Topo => "TOPOS4".into(),
        }
    }
}

impl fmt::Display for CertSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl std::str::FromStr for CertSystem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "TOPOS4" {
            return Ok(CertSystem::Topo);
        }
        s.parse::<System>()
            .map(CertSystem::Normal)
            .map_err(|_| format!("unknown system `{s}` (expected K, S4, K2, S42 or TOPOS4)"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub system: CertSystem,
    pub proof: Proof,
}

impl Certificate {
    pub fn check(&self) -> Result<Formula, CheckError> {
        match &self.system {
            CertSystem::Normal(s) => check_proof(s, &self.proof),
            CertSystem::Topo => check_with(&RuleSet::topo(), &self.proof),
        }
    }
}

/// Syntax error at a physical line of the certificate file.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct CertificateError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> CertificateError {
    CertificateError {
        line,
        message: message.into(),
    }
}

fn number(tok: Option<&str>, line: usize, what: &str) -> Result<usize, CertificateError> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| err(line, format!("expected {what}, found `{tok}`")))
}

fn step_ref(tok: Option<&str>, line: usize) -> Result<usize, CertificateError> {
    match number(tok, line, "step number")? {
        0 => Err(err(line, "step numbers start at 1")),
        n => Ok(n - 1),
    }
}

fn parse_rule(text: &str, line: usize) -> Result<Rule, CertificateError> {
    let mut toks = text.split_whitespace();
    let name = toks.next().ok_or_else(|| err(line, "missing justification"))?;
    let rule = match name {
        "TAUT" => Rule::Taut,
        "MP" => Rule::Mp(step_ref(toks.next(), line)?, step_ref(toks.next(), line)?),
        "NEC" | "RM" => {
            let agent = Agent(number(toks.next(), line, "agent")? as u32);
            let j = step_ref(toks.next(), line)?;
            if name == "NEC" {
                Rule::Nec(j, agent)
            } else {
                Rule::Rm(j, agent)
            }
        }
        other => match SchemaName::ALL.iter().find(|s| s.keyword() == other) {
            Some(&s) => Rule::Axiom(s),
            None => return Err(err(line, format!("unknown justification `{other}`"))),
        },
    };
    if let Some(extra) = toks.next() {
        return Err(err(line, format!("unexpected `{extra}` after {name}")));
    }
    Ok(rule)
}

pub fn parse_certificate(text: &str) -> Result<Certificate, CertificateError> {
    let mut system = None;
    let mut steps = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        if system.is_none() {
            let name = content
                .strip_prefix("system")
                .ok_or_else(|| err(line, "expected `system NAME` header"))?
                .trim();
            system = Some(name.parse::<CertSystem>().map_err(|m| err(line, m))?);
            continue;
        }
        let (label, rest) = content
            .split_once(':')
            .ok_or_else(|| err(line, "expected `n: formula ; RULE`"))?;
        let n = number(Some(label.trim()), line, "step number")?;
        if n != steps.len() + 1 {
            return Err(err(line, format!("step {n} out of sequence (expected {})", steps.len() + 1)));
        }
        let (formula, rule) = rest
            .rsplit_once(';')
            .ok_or_else(|| err(line, "missing `; RULE`"))?;
        let formula = parse(formula.trim()).map_err(|e| err(line, format!("formula: {e}")))?;
        steps.push(Step {
            formula,
            rule: parse_rule(rule, line)?,
        });
    }
    let system = system.ok_or_else(|| err(1, "missing `system NAME` header"))?;
    Ok(Certificate {
        system,
        proof: Proof { steps },
    })
}

pub fn print_certificate(c: &Certificate) -> String {
    let mut out = format!("system {}\n", c.system);
    for (at, step) in c.proof.steps.iter().enumerate() {
        write!(out, "{}: {} ; ", at + 1, step.formula).unwrap();
        out.push_str(step.rule.name());
        match step.rule {
            Rule::Taut | Rule::Axiom(_) => {}
            Rule::Mp(j, k) => write!(out, " {} {}", j + 1, k + 1).unwrap(),
            Rule::Nec(j, i) | Rule::Rm(j, i) => write!(out, " {} {}", i, j + 1).unwrap(),
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::CheckFailure;

    #[test]
    fn round_trip_and_check() {
        let text = "system S4\n1: p -> p ; TAUT\n2: K1 (p -> p) ; NEC 1 1\n3: K1 (p -> p) -> p -> p ; AXT\n4: p -> p ; MP 3 2\n";
        let c = parse_certificate(text).unwrap();
        assert_eq!(c.system, CertSystem::Normal(System::s4()));
        assert_eq!(print_certificate(&c), text);
        assert_eq!(c.check(), Ok(parse("p -> p").unwrap()));
    }

    #[test]
    fn topo_header_and_rm() {
        let c = parse_certificate("system TOPOS4\n1: K1 true ; AXN\n2: p -> p ; TAUT\n3: K1 p -> K1 p ; RM 1 2\n").unwrap();
        assert_eq!(c.system, CertSystem::Topo);
        assert!(c.check().is_ok());
        let nec = parse_certificate("system TOPOS4\n1: p -> p ; TAUT\n2: K1 (p -> p) ; NEC 1 1\n").unwrap();
        assert_eq!(nec.check().unwrap_err().reason, CheckFailure::RuleNotInSystem("NEC"));
    }

    #[test]
    fn broken_mp_is_a_check_error_not_a_syntax_error() {
        let c = parse_certificate("system K\n1: p -> p ; TAUT\n2: q -> q ; TAUT\n3: p ; MP 1 2\n").unwrap();
        assert_eq!(c.check().unwrap_err().line, 3);
    }

    #[test]
    fn syntax_errors() {
        for (text, line) in [
            ("1: p ; TAUT\n", 1),
            ("system S5\n", 1),
            ("system K\n2: p -> p ; TAUT\n", 2),
            ("system K\n1: p -> ; TAUT\n", 2),
            ("system K\n1: p -> p ; FOO\n", 2),
            ("system K\n1: p -> p ; MP 0 1\n", 2),
            ("system K\n# c\n1: p -> p ; TAUT extra\n", 3),
            ("", 1),
        ] {
            assert_eq!(parse_certificate(text).unwrap_err().line, line, "{text:?}");
        }
    }
}
