//! The interior-operator axiomatization of S4 (axioms N, R, T, 4; rules MP
//! and RM) and proof translations to and from the normal system S4.
//!
//! Topological proofs share the [`Proof`] representation with the normal
//! systems; only the admissible rules differ.

use crate::formula::{Agent, Formula, SchemaName};
use crate::hilbert::{check_proof, check_with, CheckError, Proof, ProofBuilder, Rule, RuleSet, System};

pub type TopoProof = Proof;

pub fn check_topo_proof(pr: &TopoProof) -> Result<Formula, CheckError> {
    check_with(&RuleSet::topo(), pr)
}

/// `(K_i φ ∧ K_i(φ → ψ)) → K_i ψ` in the topological system.
pub fn prove_axiom_k_topo(i: Agent, phi: &Formula, psi: &Formula) -> TopoProof {
    let mut b = ProofBuilder::topo();
    let at = b.axiom_k_topo(i, phi, psi);
    b.finish(at)
}

/// Extends a topological proof of `φ` to one of `K_i φ`.
pub fn prove_nec_topo(i: Agent, pr: &TopoProof) -> Result<TopoProof, CheckError> {
    check_topo_proof(pr)?;
    let mut b = ProofBuilder::topo();
    let at = b.include(pr);
    let boxed = b.nec(at, i);
    Ok(b.finish(boxed))
}

fn binary_args(s: SchemaName, f: &Formula) -> (Agent, Formula, Formula) {
    let m = s.matches(f).expect("checked schema instance");
    let [a, b] = m.args;
    (m.agent.expect("agent"), a.expect("first argument"), b.expect("second argument"))
}

/// Translates an S4 proof step by step: K instances and Necessitation are
/// replaced by their topological derivations.
pub fn s4_to_topo(pr: &Proof) -> Result<TopoProof, CheckError> {
    check_proof(&System::s4(), pr)?;
    let mut b = ProofBuilder::topo();
    let mut map = Vec::with_capacity(pr.len());
    for step in &pr.steps {
        let at = match step.rule {
            Rule::Taut => b.taut(step.formula.clone()),
            Rule::Axiom(SchemaName::AxK) => {
                let (i, phi, psi) = binary_args(SchemaName::AxK, &step.formula);
                b.k_dist(i, &phi, &psi)
            }
            Rule::Axiom(s) => b.axiom(s, step.formula.clone()),
            Rule::Mp(j, k) => b.mp(map[j], map[k]),
            Rule::Nec(j, i) => b.nec(map[j], i),
            Rule::Rm(..) => unreachable!("RM is rejected by the S4 checker"),
        };
        debug_assert_eq!(b.formula(at), &step.formula);
        map.push(at);
    }
    Ok(b.finish(*map.last().unwrap()))
}

/// Translates a topological proof into S4: N becomes Necessitation of `⊤`,
/// R the two-conjunct distribution of `K_i` over `∧`, and RM the derived
/// monotonicity rule.
pub fn topo_to_s4(pr: &TopoProof) -> Result<Proof, CheckError> {
    check_topo_proof(pr)?;
    let mut b = ProofBuilder::normal();
    let mut map = Vec::with_capacity(pr.len());
    for step in &pr.steps {
        let at = match step.rule {
            Rule::Taut => b.taut(step.formula.clone()),
            Rule::Axiom(SchemaName::AxN) => {
                let i = SchemaName::AxN.matches(&step.formula).and_then(|m| m.agent).expect("checked");
                let top = b.taut(Formula::top());
                b.nec(top, i)
            }
            Rule::Axiom(SchemaName::AxR) => {
                let (i, phi, psi) = binary_args(SchemaName::AxR, &step.formula);
                axiom_r_normal(&mut b, i, &phi, &psi)
            }
            Rule::Axiom(s) => b.axiom(s, step.formula.clone()),
            Rule::Mp(j, k) => b.mp(map[j], map[k]),
            Rule::Rm(j, i) => b.box_mono(map[j], i),
            Rule::Nec(..) => unreachable!("NEC is rejected by the topological checker"),
        };
        debug_assert_eq!(b.formula(at), &step.formula);
        map.push(at);
    }
    Ok(b.finish(*map.last().unwrap()))
}

/// `K_i(φ ∧ ψ) ↔ (K_i φ ∧ K_i ψ)` from the list lemma on `[φ, ψ]`, whose
/// conjunctions carry a trailing `⊤`.
fn axiom_r_normal(b: &mut ProofBuilder, i: Agent, phi: &Formula, psi: &Formula) -> usize {
    use crate::formula::conjunct;
    use crate::hilbert::k_over_conjunct_into;
    let pair = [phi.clone(), psi.clone()];
    let (forward, backward) = k_over_conjunct_into(b, i, &pair);
    let both = Formula::and(phi.clone(), psi.clone());
    let padded = conjunct(&pair);
    let t_in = b.taut(Formula::imp(both.clone(), padded.clone()));
    let into = b.box_mono(t_in, i);
    let t_out = b.taut(Formula::imp(padded, both));
    let out = b.box_mono(t_out, i);
    let goal = crate::formula::instantiate_schema(SchemaName::AxR, i, phi, Some(psi)).expect("binary");
    b.glue(&[forward, backward, into, out], goal)
}
