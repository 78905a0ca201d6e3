//! Seeded generators for formulas and proofs.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::{Agent, Formula, SchemaName};
use crate::hilbert::{Proof, ProofBuilder};

#[derive(Clone, Debug)]
pub struct FormulaGen {
    pub max_depth: usize,
    pub vars: Vec<Arc<str>>,
    pub agents: Vec<Agent>,
}

impl FormulaGen {
    pub fn new(max_depth: usize, vars: &[&str], agents: &[Agent]) -> FormulaGen {
        assert!(!vars.is_empty() && !agents.is_empty());
        FormulaGen {
            max_depth,
            vars: vars.iter().map(|v| Arc::from(*v)).collect(),
            agents: agents.to_vec(),
        }
    }

    /// A formula with `depth() <= max_depth`. Negation and `L_i` appear as
    /// their primitive encodings.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        self.go(rng, self.max_depth)
    }

    fn go<R: Rng + ?Sized>(&self, rng: &mut R, d: usize) -> Formula {
        if d == 0 || rng.gen_bool(0.2) {
            return if rng.gen_bool(0.1) {
                Formula::Bottom
            } else {
                Formula::Var(self.vars.choose(rng).unwrap().clone())
            };
        }
        let i = *self.agents.choose(rng).unwrap();
        match rng.gen_range(0..6) {
            0 => Formula::or(self.go(rng, d - 1), self.go(rng, d - 1)),
            1 => Formula::and(self.go(rng, d - 1), self.go(rng, d - 1)),
            2 => Formula::imp(self.go(rng, d - 1), self.go(rng, d - 1)),
            3 => Formula::know(i, self.go(rng, d - 1)),
            4 => Formula::neg(self.go(rng, d - 1)),
            _ if d >= 3 => Formula::poss(i, self.go(rng, d - 3)),
            _ => Formula::know(i, self.go(rng, d - 1)),
        }
    }
}

/// Largest formula size the proof generators will box or weaken further.
const GROWTH_CAP: usize = 40;

fn random_proof<R: Rng + ?Sized>(rng: &mut R, mut b: ProofBuilder, topo: bool, steps: usize) -> Proof {
    let g = FormulaGen::new(2, &["p", "q"], &[Agent(1), Agent(2)]);
    let mut last = None;
    for _ in 0..steps.max(1) {
        let (a, c) = (g.sample(rng), g.sample(rng));
        let i = *g.agents.choose(rng).unwrap();
        let pick = last.map(|_| rng.gen_range(0..b.len()));
        let small = |b: &ProofBuilder, j: usize| b.formula(j).size() <= GROWTH_CAP;
        let at = match (rng.gen_range(0..7), pick) {
            (0, _) | (3..=5, None) => {
                let templates = [
                    Formula::imp(a.clone(), a.clone()),
                    Formula::imp(a.clone(), Formula::imp(c.clone(), a.clone())),
                    Formula::imp(Formula::and(a.clone(), c.clone()), c.clone()),
                    Formula::or(a.clone(), Formula::neg(a.clone())),
                    Formula::imp(
                        Formula::imp(a.clone(), c.clone()),
                        Formula::imp(Formula::neg(c.clone()), Formula::neg(a.clone())),
                    ),
                ];
                b.taut(templates.choose(rng).unwrap().clone())
            }
            (1, _) => {
                let s = *[SchemaName::AxT, SchemaName::Ax4].choose(rng).unwrap();
                b.instance(s, i, &a, None)
            }
            (2, _) if topo => {
                if rng.gen_bool(0.3) {
                    b.instance(SchemaName::AxN, i, &a, None)
                } else {
                    b.instance(SchemaName::AxR, i, &a, Some(&c))
                }
            }
            (2, _) => b.instance(SchemaName::AxK, i, &a, Some(&c)),
            (3, Some(j)) if small(&b, j) => b.nec(j, i),
            (4, Some(j)) if small(&b, j) && matches!(b.formula(j), Formula::Imp(..)) => b.box_mono(j, i),
            (5, Some(j)) if small(&b, j) => {
                let target = Formula::imp(a.clone(), b.formula(j).clone());
                b.glue(&[j], target)
            }
            _ => b.k_dist(i, &a, &c),
        };
        last = Some(at);
    }
    b.finish(last.unwrap())
}

/// A random proof in the normal system S4 built from Taut, AxK, AxT, Ax4,
/// Modus Ponens and Necessitation.
pub fn random_s4_proof<R: Rng + ?Sized>(rng: &mut R, steps: usize) -> Proof {
    random_proof(rng, ProofBuilder::normal(), false, steps)
}

/// A random proof in the topological system built from Taut, N, R, T, 4,
/// Modus Ponens and RM.
pub fn random_topo_proof<R: Rng + ?Sized>(rng: &mut R, steps: usize) -> Proof {
    random_proof(rng, ProofBuilder::topo(), true, steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{check_proof, Rule, System};
    use crate::toposys::check_topo_proof;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn depth_is_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = FormulaGen::new(4, &["p", "q"], &[Agent(1), Agent(2)]);
        for _ in 0..500 {
            assert!(g.sample(&mut rng).depth() <= 4);
        }
    }

    #[test]
    fn generated_proofs_check_and_use_every_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (mut nec, mut rm, mut k, mut r) = (false, false, false, false);
        for _ in 0..30 {
            let s4 = random_s4_proof(&mut rng, 8);
            check_proof(&System::s4(), &s4).unwrap();
            let topo = random_topo_proof(&mut rng, 8);
            check_topo_proof(&topo).unwrap();
            nec |= s4.steps.iter().any(|s| matches!(s.rule, Rule::Nec(..)));
            k |= s4.steps.iter().any(|s| s.rule == Rule::Axiom(SchemaName::AxK));
            rm |= topo.steps.iter().any(|s| matches!(s.rule, Rule::Rm(..)));
            r |= topo.steps.iter().any(|s| s.rule == Rule::Axiom(SchemaName::AxR));
        }
        assert!(nec && rm && k && r);
    }
}
