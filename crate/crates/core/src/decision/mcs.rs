use thiserror::Error;

use super::tableau::{tableau_sat, Logic, TableauError, TableauResult};
use crate::formula::{closure_of_set, conjunct, Formula};

/// Default cap on closure size.
pub const MAX_CLOSURE: usize = 12;

/// A maximal consistent selection over a finite closure: `members[k]` is
/// either `closure[k]` or its negation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMcs {
    pub closure: Vec<Formula>,
    pub members: Vec<Formula>,
}

impl FiniteMcs {
    pub fn contains(&self, f: &Formula) -> bool {
        self.members.contains(f)
    }

    /// Whether `closure[k]` itself (not its negation) was chosen.
    pub fn positive(&self, k: usize) -> bool {
        self.members[k] == self.closure[k]
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum McsError {
    #[error("closure of {size} formulas exceeds the cap of {cap}")]
    ClosureTooLarge { size: usize, cap: usize },
    #[error("seed is inconsistent")]
    InconsistentSeed,
    #[error("seed formula `{0}` is not in the closure or its negations")]
    SeedOutsideClosure(Formula),
    #[error(transparent)]
    Tableau(#[from] TableauError),
}

pub fn consistent(logic: Logic, gamma: &[Formula]) -> Result<bool, TableauError> {
    Ok(matches!(tableau_sat(logic, &conjunct(gamma))?, TableauResult::Sat(_)))
}

/// Subformula closure of `seeds`, children before parents.
pub fn finite_closure(seeds: &[Formula]) -> Vec<Formula> {
    closure_of_set(seeds)
}

fn prepare(closure: &[Formula]) -> Result<Vec<Formula>, McsError> {
    let mut out: Vec<Formula> = Vec::with_capacity(closure.len());
    for f in closure {
        if !out.contains(f) {
            out.push(f.clone());
        }
    }
    if out.len() > MAX_CLOSURE {
        return Err(McsError::ClosureTooLarge {
            size: out.len(),
            cap: MAX_CLOSURE,
        });
    }
    Ok(out)
}

/// Every consistent exactly-one-of selection over `closure`, positive
/// choices first in closure order.
pub fn enumerate_mcs(logic: Logic, closure: &[Formula]) -> Result<Vec<FiniteMcs>, McsError> {
    fn go(
        logic: Logic,
        closure: &[Formula],
        chosen: &mut Vec<Formula>,
        out: &mut Vec<FiniteMcs>,
    ) -> Result<(), TableauError> {
        let k = chosen.len();
        if k == closure.len() {
            out.push(FiniteMcs {
                closure: closure.to_vec(),
                members: chosen.clone(),
            });
            return Ok(());
        }
        for pick in [closure[k].clone(), Formula::neg(closure[k].clone())] {
            chosen.push(pick);
            if consistent(logic, chosen)? {
                go(logic, closure, chosen, out)?;
            }
            chosen.pop();
        }
        Ok(())
    }
    let closure = prepare(closure)?;
    let mut out = Vec::new();
    go(logic, &closure, &mut Vec::new(), &mut out)?;
    Ok(out)
}

/// Greedy extension of `seed` in closure order.
pub fn extend_mcs(logic: Logic, seed: &[Formula], closure: &[Formula]) -> Result<FiniteMcs, McsError> {
    let closure = prepare(closure)?;
    for s in seed {
        if !closure.iter().any(|c| c == s || Formula::neg(c.clone()) == *s) {
            return Err(McsError::SeedOutsideClosure(s.clone()));
        }
    }
    if !consistent(logic, seed)? {
        return Err(McsError::InconsistentSeed);
    }
    let mut current = seed.to_vec();
    let mut members = Vec::with_capacity(closure.len());
    for c in &closure {
        current.push(c.clone());
        if !consistent(logic, &current)? {
            current.pop();
            current.push(Formula::neg(c.clone()));
        }
        members.push(current.last().unwrap().clone());
    }
    Ok(FiniteMcs { closure, members })
}
