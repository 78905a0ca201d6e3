//! Certificate-producing derivations of the standard K lemmas about the
//! list encoders `imply` and `conjunct`.

use thiserror::Error;

use super::{check_proof, CheckError, Proof, ProofBuilder, System};
use crate::formula::{conjunct, imply, Agent, Formula};

/// Default cap on list length for [`prove_k_over_conjunct`].
pub const MAX_CONJUNCTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// From `ψ1 → (… → φ)` to `(ψ1 ∧ … ∧ ⊤) → φ`.
    ImplyToConjunct,
    /// From `(ψ1 ∧ … ∧ ⊤) → φ` to `ψ1 → (… → φ)`.
    ConjunctToImply,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("source proof rejected: {0}")]
    SourceRejected(CheckError),
    #[error("source proof concludes `{found}`, expected `{expected}`")]
    SourceMismatch { expected: Formula, found: Formula },
    #[error("{n} conjuncts exceed the cap of {cap}")]
    TooManyConjuncts { n: usize, cap: usize },
    #[error("derived proof failed to check: {0}")]
    Output(CheckError),
}

fn checked(sys: &System, pr: Proof) -> Result<Proof, BuildError> {
    check_proof(sys, &pr).map_err(BuildError::Output)?;
    Ok(pr)
}

/// Translates a proof of one list encoding of a deduction into the other.
pub fn prove_imply_conjunct_equiv(
    sys: &System,
    psis: &[Formula],
    phi: &Formula,
    direction: Direction,
    source: &Proof,
) -> Result<Proof, BuildError> {
    let as_imply = imply(psis, phi.clone());
    let as_conj = Formula::imp(conjunct(psis), phi.clone());
    let (from, to) = match direction {
        Direction::ImplyToConjunct => (as_imply, as_conj),
        Direction::ConjunctToImply => (as_conj, as_imply),
    };
    let found = check_proof(sys, source).map_err(BuildError::SourceRejected)?;
    if found != from {
        return Err(BuildError::SourceMismatch { expected: from, found });
    }
    let mut b = ProofBuilder::normal();
    let s = b.include(source);
    let t = b.glue(&[s], to);
    checked(sys, b.finish(t))
}

/// Writes both directions of `K_i(conjunct ψs) ↔ conjunct(K_i ψs)` into `b`
/// and returns the step indices `(forward, backward)`.
pub(crate) fn k_over_conjunct_into(b: &mut ProofBuilder, i: Agent, psis: &[Formula]) -> (usize, usize) {
    let k = |f: &Formula| Formula::know(i, f.clone());
    let boxed: Vec<Formula> = psis.iter().map(k).collect();
    // Tails C_j = conjunct(ψs[j..]) and S_j = conjunct(Kψs[j..]).
    let tails: Vec<Formula> = (0..=psis.len()).map(|j| conjunct(&psis[j..])).collect();
    let boxed_tails: Vec<Formula> = (0..=psis.len()).map(|j| conjunct(&boxed[j..])).collect();

    let whole = k(&tails[0]);
    let parts: Vec<usize> = psis
        .iter()
        .map(|psi| {
            let t = b.taut(Formula::imp(tails[0].clone(), psi.clone()));
            b.box_mono(t, i)
        })
        .collect();
    let forward = b.glue(&parts, Formula::imp(whole, boxed_tails[0].clone()));

    let top = b.taut(Formula::top());
    let ktop = b.nec(top, i);
    let mut backward = b.glue(&[ktop], Formula::imp(Formula::top(), k(&Formula::top())));
    for j in (0..psis.len()).rev() {
        let pair = b.box_and_intro(i, &psis[j], &tails[j + 1]);
        backward = b.glue(
            &[backward, pair],
            Formula::imp(boxed_tails[j].clone(), k(&tails[j])),
        );
    }
    (forward, backward)
}

/// Proofs of `K_i(ψ1 ∧ … ∧ ⊤) → (K_i ψ1 ∧ … ∧ ⊤)` and its converse.
pub fn prove_k_over_conjunct(sys: &System, i: Agent, psis: &[Formula]) -> Result<(Proof, Proof), BuildError> {
    if psis.len() > MAX_CONJUNCTS {
        return Err(BuildError::TooManyConjuncts {
            n: psis.len(),
            cap: MAX_CONJUNCTS,
        });
    }
    let mut fwd = ProofBuilder::normal();
    let (f, _) = k_over_conjunct_into(&mut fwd, i, psis);
    let mut bwd = ProofBuilder::normal();
    let (_, g) = k_over_conjunct_into(&mut bwd, i, psis);
    Ok((checked(sys, fwd.finish(f))?, checked(sys, bwd.finish(g))?))
}

pub(crate) fn k_conj_imply_factor_into(
    b: &mut ProofBuilder,
    i: Agent,
    phi: &Formula,
    psi: &Formula,
    theta: &Formula,
) -> usize {
    let pair = [phi.clone(), psi.clone()];
    let (forward, _) = k_over_conjunct_into(b, i, &pair);
    let both = Formula::and(phi.clone(), psi.clone());
    let bridge = b.taut(Formula::imp(both.clone(), conjunct(&pair)));
    let mono = b.box_mono(bridge, i);
    let kphi = Formula::know(i, phi.clone());
    let kpsi = Formula::know(i, psi.clone());
    let goal = Formula::imp(
        Formula::imp(Formula::and(kphi, kpsi), theta.clone()),
        Formula::imp(Formula::know(i, both), theta.clone()),
    );
    b.glue(&[mono, forward], goal)
}

/// `((K_i φ ∧ K_i ψ) → θ) → (K_i(φ ∧ ψ) → θ)`, derived syntactically.
pub fn prove_k_conj_imply_factor(
    sys: &System,
    i: Agent,
    phi: &Formula,
    psi: &Formula,
    theta: &Formula,
) -> Result<Proof, BuildError> {
    let mut b = ProofBuilder::normal();
    let at = k_conj_imply_factor_into(&mut b, i, phi, psi, theta);
    checked(sys, b.finish(at))
}

pub(crate) fn k_thm_into(b: &mut ProofBuilder, i: Agent, phi: &Formula, psi: &Formula) -> usize {
    let both = Formula::and(phi.clone(), psi.clone());
    let not_both = Formula::neg(both.clone());
    let not_psi = Formula::neg(psi.clone());
    let inner = Formula::imp(not_both.clone(), not_psi.clone());
    // φ → (¬(φ ∧ ψ) → ¬ψ), boxed.
    let t = b.taut(Formula::imp(phi.clone(), inner.clone()));
    let boxed = b.nec(t, i);
    // Distribute twice.
    let dist = b.k_imp(i, phi, &inner);
    let stage = b.mp(dist, boxed);
    let dist2 = b.k_imp(i, &not_both, &not_psi);
    let goal = Formula::imp(
        Formula::and(Formula::know(i, phi.clone()), Formula::poss(i, psi.clone())),
        Formula::poss(i, both),
    );
    b.glue(&[stage, dist2], goal)
}

/// `(K_i φ ∧ L_i ψ) → L_i(φ ∧ ψ)`.
pub fn prove_k_thm(sys: &System, i: Agent, phi: &Formula, psi: &Formula) -> Result<Proof, BuildError> {
    let mut b = ProofBuilder::normal();
    let at = k_thm_into(&mut b, i, phi, psi);
    checked(sys, b.finish(at))
}

/// `K_i(φ → ψ) → (K_i φ → K_i ψ)` from the conjunctive axiom K.
pub fn prove_k_imp(sys: &System, i: Agent, phi: &Formula, psi: &Formula) -> Result<Proof, BuildError> {
    let mut b = ProofBuilder::normal();
    let at = b.k_imp(i, phi, psi);
    checked(sys, b.finish(at))
}
