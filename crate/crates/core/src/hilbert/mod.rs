//! Hilbert-style proof kernel.
//!
//! One step-checking kernel serves both the normal systems (K plus schema
//! sets, with Modus Ponens and Necessitation) and the interior-operator
//! system of [`crate::toposys`] (N, R, T, 4 with Modus Ponens and monotonicity).

mod builder;
mod cert;
mod lemmas;
mod taut;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{imply, Agent, Formula, SchemaName};

pub use builder::ProofBuilder;
pub use cert::{parse_certificate, print_certificate, Certificate, CertificateError, CertSystem};
pub use lemmas::{
    prove_imply_conjunct_equiv, prove_k_conj_imply_factor, prove_k_imp, prove_k_over_conjunct, prove_k_thm,
    BuildError, Direction, MAX_CONJUNCTS,
};
pub(crate) use lemmas::k_over_conjunct_into;
pub use taut::{is_tautology, skeleton_atoms, TooManyAtoms, MAX_ATOMS};

/// A normal modal system: K plus a set of extra schemas.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct System {
    schemas: BTreeSet<SchemaName>,
}

impl System {
    /// K extended with `extra`; `AxK` is always included. Only `AxT`, `Ax4`
    /// and `Ax2` are meaningful extensions.
    pub fn with(extra: &[SchemaName]) -> System {
        let mut schemas: BTreeSet<SchemaName> = extra
            .iter()
            .copied()
            .filter(|s| matches!(s, SchemaName::AxT | SchemaName::Ax4 | SchemaName::Ax2))
            .collect();
        schemas.insert(SchemaName::AxK);
        System { schemas }
    }

    pub fn k() -> System {
        System::with(&[])
    }

    pub fn s4() -> System {
        System::with(&[SchemaName::AxT, SchemaName::Ax4])
    }

    pub fn k2() -> System {
        System::with(&[SchemaName::Ax2])
    }

    pub fn s42() -> System {
        System::with(&[SchemaName::AxT, SchemaName::Ax4, SchemaName::Ax2])
    }

    /// Schema-set union.
    pub fn combine(&self, other: &System) -> System {
        System {
            schemas: self.schemas.union(&other.schemas).copied().collect(),
        }
    }

    pub fn schemas(&self) -> &BTreeSet<SchemaName> {
        &self.schemas
    }

    pub fn contains(&self, s: SchemaName) -> bool {
        self.schemas.contains(&s)
    }

    pub fn name(&self) -> String {
        let preset = [
            (System::k(), "K"),
            (System::s4(), "S4"),
            (System::k2(), "K2"),
            (System::s42(), "S42"),
        ];
        match preset.iter().find(|(s, _)| s == self) {
            Some((_, n)) => n.to_string(),
            None => {
                let names: Vec<_> = self.schemas.iter().map(|s| s.keyword()).collect();
                format!("K+{{{}}}", names.join(","))
            }
        }
    }

    pub(crate) fn rules(&self) -> RuleSet {
        RuleSet {
            schemas: self.schemas.clone(),
            nec: true,
            rm: false,
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for System {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "K" => Ok(System::k()),
            "S4" => Ok(System::s4()),
            "K2" => Ok(System::k2()),
            "S42" => Ok(System::s42()),
            _ => Err(format!("unknown system `{s}` (expected K, S4, K2 or S42)")),
        }
    }
}

/// Step justification. Step references are 0-based indices into the proof.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Taut,
    Axiom(SchemaName),
    /// `Mp(j, k)`: step `j` is `A → B`, step `k` is `A`.
    Mp(usize, usize),
    /// `Nec(j, i)`: from step `j` infer `K_i` of it.
    Nec(usize, Agent),
    /// `Rm(j, i)`: from step `j` = `A → B` infer `K_i A → K_i B`.
    Rm(usize, Agent),
}

impl Rule {
    pub(crate) fn name(&self) -> &'static str {
        match self {
            Rule::Taut => "TAUT",
            Rule::Axiom(s) => s.keyword(),
            Rule::Mp(..) => "MP",
            Rule::Nec(..) => "NEC",
            Rule::Rm(..) => "RM",
        }
    }

    fn refs(&self) -> Vec<usize> {
        match *self {
            Rule::Taut | Rule::Axiom(_) => vec![],
            Rule::Mp(j, k) => vec![j, k],
            Rule::Nec(j, _) | Rule::Rm(j, _) => vec![j],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub formula: Formula,
    pub rule: Rule,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Proof {
    pub steps: Vec<Step>,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckFailure {
    #[error("proof is empty")]
    Empty,
    #[error("reference to step {0} is not to an earlier step")]
    ForwardReference(usize),
    #[error("not a propositional tautology")]
    NotTautology,
    #[error(transparent)]
    TooManyAtoms(#[from] TooManyAtoms),
    #[error("schema {0} not in system")]
    SchemaNotInSystem(SchemaName),
    #[error("formula is not an instance of {0}")]
    NotAnInstance(SchemaName),
    #[error("rule {0} not in this system")]
    RuleNotInSystem(&'static str),
    #[error("modus ponens: step {major} is not an implication from step {minor} to this formula")]
    MpMismatch { major: usize, minor: usize },
    #[error("necessitation: formula is not K{agent} of step {premise}")]
    NecMismatch { premise: usize, agent: Agent },
    #[error("monotonicity: formula is not K{agent} A -> K{agent} B for step {premise} = A -> B")]
    RmMismatch { premise: usize, agent: Agent },
}

/// Rejection of step `line` (1-based).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("step {line}: {reason}")]
pub struct CheckError {
    pub line: usize,
    pub reason: CheckFailure,
}

#[derive(Clone, Debug)]
pub(crate) struct RuleSet {
    pub schemas: BTreeSet<SchemaName>,
    pub nec: bool,
    pub rm: bool,
}

impl RuleSet {
    pub fn topo() -> RuleSet {
        RuleSet {
            schemas: [SchemaName::AxN, SchemaName::AxR, SchemaName::AxT, SchemaName::Ax4].into(),
            nec: false,
            rm: true,
        }
    }
}

pub(crate) fn check_step(rules: &RuleSet, steps: &[Step], at: usize) -> Result<(), CheckFailure> {
    let step = &steps[at];
    // Reported step numbers are 1-based.
    if let Some(&r) = step.rule.refs().iter().find(|&&r| r >= at) {
        return Err(CheckFailure::ForwardReference(r + 1));
    }
    match step.rule {
        Rule::Taut => {
            if !is_tautology(&step.formula)? {
                return Err(CheckFailure::NotTautology);
            }
        }
        Rule::Axiom(s) => {
            if !rules.schemas.contains(&s) {
                return Err(CheckFailure::SchemaNotInSystem(s));
            }
            if s.matches(&step.formula).is_none() {
                return Err(CheckFailure::NotAnInstance(s));
            }
        }
        Rule::Mp(j, k) => match &steps[j].formula {
            Formula::Imp(a, b) if **a == steps[k].formula && **b == step.formula => {}
            _ => {
                return Err(CheckFailure::MpMismatch {
                    major: j + 1,
                    minor: k + 1,
                })
            }
        },
        Rule::Nec(j, i) => {
            if !rules.nec {
                return Err(CheckFailure::RuleNotInSystem("NEC"));
            }
            match &step.formula {
                Formula::Know(a, body) if *a == i && **body == steps[j].formula => {}
                _ => return Err(CheckFailure::NecMismatch { premise: j + 1, agent: i }),
            }
        }
        Rule::Rm(j, i) => {
            if !rules.rm {
                return Err(CheckFailure::RuleNotInSystem("RM"));
            }
            let ok = match (&steps[j].formula, &step.formula) {
                (Formula::Imp(a, b), Formula::Imp(ka, kb)) => {
                    **ka == Formula::know(i, (**a).clone()) && **kb == Formula::know(i, (**b).clone())
                }
                _ => false,
            };
            if !ok {
                return Err(CheckFailure::RmMismatch { premise: j + 1, agent: i });
            }
        }
    }
    Ok(())
}

pub(crate) fn check_with(rules: &RuleSet, pr: &Proof) -> Result<Formula, CheckError> {
    if pr.steps.is_empty() {
        return Err(CheckError {
            line: 1,
            reason: CheckFailure::Empty,
        });
    }
    for at in 0..pr.steps.len() {
        check_step(rules, &pr.steps, at).map_err(|reason| CheckError { line: at + 1, reason })?;
    }
    Ok(pr.steps.last().unwrap().formula.clone())
}

/// Verifies every step and returns the final formula.
pub fn check_proof(sys: &System, pr: &Proof) -> Result<Formula, CheckError> {
    check_with(&sys.rules(), pr)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeductionError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("proof ends in `{0}`, which is not premises -> goal")]
    Mismatch(Formula),
}

/// Checks a certificate for `premises ⊢ goal`: the proof must end in
/// `ψ1 → (… → (ψk → goal))` with every `ψj` among the premises (any order,
/// repetition allowed). Returns the premises used, in order.
pub fn check_deduction(
    sys: &System,
    premises: &[Formula],
    goal: &Formula,
    pr: &Proof,
) -> Result<Vec<Formula>, DeductionError> {
    let last = check_proof(sys, pr)?;
    let mut used = Vec::new();
    let mut rest = &last;
    loop {
        if rest == goal {
            debug_assert_eq!(imply(&used, goal.clone()), last);
            return Ok(used);
        }
        match rest {
            Formula::Imp(a, b) if premises.contains(a) => {
                used.push((**a).clone());
                rest = b;
            }
            _ => return Err(DeductionError::Mismatch(last)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn step(s: &str, rule: Rule) -> Step {
        Step { formula: f(s), rule }
    }

    #[test]
    fn kernel_examples() {
        let pr = Proof {
            steps: vec![step("p -> p", Rule::Taut)],
        };
        assert_eq!(check_proof(&System::k(), &pr), Ok(f("p -> p")));
        let pr = Proof {
            steps: vec![step("p -> p", Rule::Taut), step("K1 (p -> p)", Rule::Nec(0, Agent(1)))],
        };
        assert_eq!(check_proof(&System::k(), &pr), Ok(f("K1 (p -> p)")));
        let pr = Proof {
            steps: vec![step("K1 p -> p", Rule::Axiom(SchemaName::AxT))],
        };
        assert_eq!(
            check_proof(&System::k(), &pr),
            Err(CheckError {
                line: 1,
                reason: CheckFailure::SchemaNotInSystem(SchemaName::AxT)
            })
        );
        assert!(check_proof(&System::s4(), &pr).is_ok());
    }

    #[test]
    fn kernel_rejections() {
        let k = System::k();
        let cases: Vec<(Vec<Step>, CheckError)> = vec![
            (vec![], CheckError { line: 1, reason: CheckFailure::Empty }),
            (
                vec![step("K1 p -> p", Rule::Taut)],
                CheckError { line: 1, reason: CheckFailure::NotTautology },
            ),
            (
                vec![step("p -> p", Rule::Taut), step("p", Rule::Mp(0, 1))],
                CheckError { line: 2, reason: CheckFailure::ForwardReference(2) },
            ),
            (
                vec![step("p -> p", Rule::Taut), step("q -> q", Rule::Taut), step("p", Rule::Mp(0, 1))],
                CheckError { line: 3, reason: CheckFailure::MpMismatch { major: 1, minor: 2 } },
            ),
            (
                vec![step("p -> p", Rule::Taut), step("K2 (p -> p)", Rule::Nec(0, Agent(1)))],
                CheckError { line: 2, reason: CheckFailure::NecMismatch { premise: 1, agent: Agent(1) } },
            ),
            (
                vec![step("K1 q & K1 p -> K1 q", Rule::Axiom(SchemaName::AxK))],
                CheckError { line: 1, reason: CheckFailure::NotAnInstance(SchemaName::AxK) },
            ),
            (
                vec![step("p -> p", Rule::Taut), step("K1 p -> K1 p", Rule::Rm(0, Agent(1)))],
                CheckError { line: 2, reason: CheckFailure::RuleNotInSystem("RM") },
            ),
        ];
        for (steps, expected) in cases {
            assert_eq!(check_proof(&k, &Proof { steps }), Err(expected));
        }
    }

    #[test]
    fn modus_ponens_and_axiom_k() {
        let pr = Proof {
            steps: vec![
                step("K1 (p -> q) & K1 p -> K1 q", Rule::Axiom(SchemaName::AxK)),
                step(
                    "(K1 (p -> q) & K1 p -> K1 q) -> K1 (p -> q) -> K1 p -> K1 q",
                    Rule::Taut,
                ),
                step("K1 (p -> q) -> K1 p -> K1 q", Rule::Mp(1, 0)),
            ],
        };
        assert_eq!(check_proof(&System::k(), &pr), Ok(f("K1 (p -> q) -> K1 p -> K1 q")));
    }

    #[test]
    fn deduction_examples() {
        let k = System::k();
        let pp = Proof {
            steps: vec![step("p -> p", Rule::Taut)],
        };
        assert_eq!(check_deduction(&k, &[f("p")], &f("p"), &pp), Ok(vec![f("p")]));
        // With no premises the goal itself must be proved.
        assert_eq!(check_deduction(&k, &[], &f("p -> p"), &pp), Ok(vec![]));
        let conj = Proof {
            steps: vec![step("p -> q -> p & q", Rule::Taut)],
        };
        assert_eq!(
            check_deduction(&k, &[f("p"), f("q")], &f("p & q"), &conj),
            Ok(vec![f("p"), f("q")])
        );
        // Order and repetition are free.
        let swapped = Proof {
            steps: vec![step("q -> p -> p -> p & q", Rule::Taut)],
        };
        assert!(check_deduction(&k, &[f("p"), f("q")], &f("p & q"), &swapped).is_ok());
        assert!(matches!(
            check_deduction(&k, &[f("p")], &f("p & q"), &conj),
            Err(DeductionError::Mismatch(_))
        ));
    }

    #[test]
    fn system_presets() {
        assert_eq!(System::k().schemas().len(), 1);
        assert_eq!(System::s4().combine(&System::k2()), System::s42());
        for name in ["K", "S4", "K2", "S42"] {
            assert_eq!(name.parse::<System>().unwrap().name(), name);
        }
    }
}
