use std::collections::HashMap;

use super::{is_tautology, Proof, Rule, Step};
use crate::formula::{imply, instantiate_schema, Agent, Formula, SchemaName};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    /// Axiom K, Modus Ponens and Necessitation are primitive.
    Normal,
    /// Axioms N and R, Modus Ponens and monotonicity are primitive.
    Topo,
}

/// Accumulates a proof, reusing any step whose formula is already proved.
///
/// Derived rules (`nec`, `box_mono`, `k_dist`, ...) expand into primitive
/// steps of the builder's system, so the same lemma code produces
/// certificates for either axiomatization of S4.
#[derive(Clone, Debug)]
pub struct ProofBuilder {
    mode: Mode,
    steps: Vec<Step>,
    index: HashMap<Formula, usize>,
}

impl ProofBuilder {
    /// Builder for the normal systems (K and its extensions).
    pub fn normal() -> ProofBuilder {
        ProofBuilder {
            mode: Mode::Normal,
            steps: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Builder for the interior-operator system.
    pub fn topo() -> ProofBuilder {
        ProofBuilder {
            mode: Mode::Topo,
            ..ProofBuilder::normal()
        }
    }

    pub fn formula(&self, at: usize) -> &Formula {
        &self.steps[at].formula
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn lookup(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    fn push(&mut self, formula: Formula, rule: Rule) -> usize {
        if let Some(&at) = self.index.get(&formula) {
            return at;
        }
        self.steps.push(Step {
            formula: formula.clone(),
            rule,
        });
        let at = self.steps.len() - 1;
        self.index.insert(formula, at);
        at
    }

    pub fn taut(&mut self, f: Formula) -> usize {
        debug_assert!(
            is_tautology(&f).unwrap_or(true),
            "not a tautology: {f}"
        );
        self.push(f, Rule::Taut)
    }

    /// Schema instance; the schema must be primitive in this builder's system.
    pub fn axiom(&mut self, s: SchemaName, f: Formula) -> usize {
        debug_assert!(s.matches(&f).is_some(), "{f} is not an instance of {s}");
        self.push(f, Rule::Axiom(s))
    }

    pub fn instance(&mut self, s: SchemaName, i: Agent, phi: &Formula, psi: Option<&Formula>) -> usize {
        let f = instantiate_schema(s, i, phi, psi).expect("schema arity");
        self.axiom(s, f)
    }

    /// From `major` = `A → B` and `minor` = `A`, proves `B`.
    pub fn mp(&mut self, major: usize, minor: usize) -> usize {
        let b = match &self.steps[major].formula {
            Formula::Imp(a, b) if **a == self.steps[minor].formula => (**b).clone(),
            other => panic!("modus ponens mismatch: {other} applied to {}", self.steps[minor].formula),
        };
        self.push(b, Rule::Mp(major, minor))
    }

    /// Proves `conclusion` from the steps in `premises` by one tautology
    /// `p1 → (… → conclusion)` and repeated Modus Ponens.
    pub fn glue(&mut self, premises: &[usize], conclusion: Formula) -> usize {
        let ps: Vec<Formula> = premises.iter().map(|&p| self.steps[p].formula.clone()).collect();
        let mut at = self.taut(imply(&ps, conclusion));
        for &p in premises {
            at = self.mp(at, p);
        }
        at
    }

    /// `K_i` of step `j`.
    pub fn nec(&mut self, j: usize, i: Agent) -> usize {
        let phi = self.steps[j].formula.clone();
        match self.mode {
            Mode::Normal => self.push(Formula::know(i, phi), Rule::Nec(j, i)),
            Mode::Topo => {
                // φ ⊢ ⊤ → φ; RM gives K⊤ → Kφ; discharge with N.
                let top_imp = self.glue(&[j], Formula::imp(Formula::top(), phi));
                let mono = self.rm(top_imp, i);
                let n = self.instance(SchemaName::AxN, i, &Formula::top(), None);
                self.mp(mono, n)
            }
        }
    }

    /// Primitive monotonicity rule of the topological system.
    pub fn rm(&mut self, j: usize, i: Agent) -> usize {
        assert_eq!(self.mode, Mode::Topo, "RM is only primitive in the topological system");
        let f = match &self.steps[j].formula {
            Formula::Imp(a, b) => Formula::imp(Formula::know(i, (**a).clone()), Formula::know(i, (**b).clone())),
            other => panic!("RM needs an implication, got {other}"),
        };
        self.push(f, Rule::Rm(j, i))
    }

    /// `(K_i(a → b) ∧ K_i a) → K_i b`.
    pub fn k_dist(&mut self, i: Agent, a: &Formula, b: &Formula) -> usize {
        match self.mode {
            Mode::Normal => self.instance(SchemaName::AxK, i, a, Some(b)),
            Mode::Topo => {
                let k = self.axiom_k_topo(i, a, b);
                let (ka, kab, kb) = (
                    Formula::know(i, a.clone()),
                    Formula::know(i, Formula::imp(a.clone(), b.clone())),
                    Formula::know(i, b.clone()),
                );
                self.glue(&[k], Formula::imp(Formula::and(kab, ka), kb))
            }
        }
    }

    /// `(K_i a ∧ K_i(a → b)) → K_i b` in the topological system: the
    /// tautology `(a ∧ (a → b)) → b`, monotonicity, then axiom R to split
    /// the box over the conjunction.
    pub fn axiom_k_topo(&mut self, i: Agent, a: &Formula, b: &Formula) -> usize {
        assert_eq!(self.mode, Mode::Topo);
        let ab = Formula::imp(a.clone(), b.clone());
        let t = self.taut(Formula::imp(Formula::and(a.clone(), ab.clone()), b.clone()));
        let mono = self.rm(t, i);
        let r = self.instance(SchemaName::AxR, i, a, Some(&ab));
        let goal = Formula::imp(
            Formula::and(Formula::know(i, a.clone()), Formula::know(i, ab)),
            Formula::know(i, b.clone()),
        );
        self.glue(&[r, mono], goal)
    }

    /// `K_i(a → b) → (K_i a → K_i b)`.
    pub fn k_imp(&mut self, i: Agent, a: &Formula, b: &Formula) -> usize {
        let dist = self.k_dist(i, a, b);
        let goal = Formula::imp(
            Formula::know(i, Formula::imp(a.clone(), b.clone())),
            Formula::imp(Formula::know(i, a.clone()), Formula::know(i, b.clone())),
        );
        self.glue(&[dist], goal)
    }

    /// From step `j` = `a → b`, proves `K_i a → K_i b`.
    pub fn box_mono(&mut self, j: usize, i: Agent) -> usize {
        let (a, b) = match &self.steps[j].formula {
            Formula::Imp(a, b) => ((**a).clone(), (**b).clone()),
            other => panic!("box_mono needs an implication, got {other}"),
        };
        match self.mode {
            Mode::Topo => self.rm(j, i),
            Mode::Normal => {
                let boxed = self.nec(j, i);
                let dist = self.k_imp(i, &a, &b);
                self.mp(dist, boxed)
            }
        }
    }

    /// From step `j` = `a → b`, proves `L_i a → L_i b`.
    pub fn diamond_mono(&mut self, j: usize, i: Agent) -> usize {
        let (a, b) = match &self.steps[j].formula {
            Formula::Imp(a, b) => ((**a).clone(), (**b).clone()),
            other => panic!("diamond_mono needs an implication, got {other}"),
        };
        let contra = self.glue(&[j], Formula::imp(Formula::neg(b.clone()), Formula::neg(a.clone())));
        let boxed = self.box_mono(contra, i);
        self.glue(&[boxed], Formula::imp(Formula::poss(i, a), Formula::poss(i, b)))
    }

    /// `K_i a ∧ K_i b → K_i(a ∧ b)`.
    pub fn box_and_intro(&mut self, i: Agent, a: &Formula, b: &Formula) -> usize {
        let ab = Formula::and(a.clone(), b.clone());
        let pair = self.taut(Formula::imp(a.clone(), Formula::imp(b.clone(), ab.clone())));
        let first = self.box_mono(pair, i);
        let second = self.k_imp(i, b, &ab);
        let goal = Formula::imp(
            Formula::and(Formula::know(i, a.clone()), Formula::know(i, b.clone())),
            Formula::know(i, ab),
        );
        self.glue(&[first, second], goal)
    }

    /// Splices `pr` in (remapping references) and returns the index of its
    /// final formula. The proof's rules must be primitive in this builder.
    pub fn include(&mut self, pr: &Proof) -> usize {
        let mut map = Vec::with_capacity(pr.steps.len());
        for step in &pr.steps {
            let rule = match step.rule {
                Rule::Mp(j, k) => Rule::Mp(map[j], map[k]),
                Rule::Nec(j, i) => Rule::Nec(map[j], i),
                Rule::Rm(j, i) => Rule::Rm(map[j], i),
                ref r => r.clone(),
            };
            map.push(self.push(step.formula.clone(), rule));
        }
        *map.last().expect("empty proof")
    }

    /// Finishes with step `at` as the conclusion.
    pub fn finish(mut self, at: usize) -> Proof {
        if at + 1 != self.steps.len() {
            // Repeat the step; its references still point backwards.
            let step = self.steps[at].clone();
            self.steps.push(step);
        }
        Proof { steps: self.steps }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{check_proof, check_with, RuleSet, System};
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn derived_rules_check_in_both_modes() {
        for topo in [false, true] {
            let mut b = if topo { ProofBuilder::topo() } else { ProofBuilder::normal() };
            let i = Agent(1);
            let (a, c) = (f("p & q"), f("K2 r"));
            let k = b.k_imp(i, &a, &c);
            assert_eq!(b.formula(k), &f("K1 (p & q -> K2 r) -> K1 (p & q) -> K1 K2 r"));
            let t = b.taut(f("p & q -> p"));
            let m = b.box_mono(t, i);
            assert_eq!(b.formula(m), &f("K1 (p & q) -> K1 p"));
            let d = b.diamond_mono(t, i);
            assert_eq!(b.formula(d), &f("L1 (p & q) -> L1 p"));
            let n = b.nec(t, Agent(3));
            assert_eq!(b.formula(n), &f("K3 (p & q -> p)"));
            let intro = b.box_and_intro(i, &f("p"), &c);
            let pr = b.finish(intro);
            let result = if topo {
                check_with(&RuleSet::topo(), &pr)
            } else {
                check_proof(&System::k(), &pr)
            };
            assert_eq!(result, Ok(f("K1 p & K1 K2 r -> K1 (p & K2 r)")), "topo={topo}");
        }
    }

    #[test]
    fn finish_repeats_earlier_conclusion() {
        let mut b = ProofBuilder::normal();
        let first = b.taut(f("p -> p"));
        b.taut(f("q -> q"));
        let again = b.taut(f("p -> p"));
        assert_eq!(first, again);
        let pr = b.finish(first);
        assert_eq!(pr.len(), 3);
        assert_eq!(check_proof(&System::k(), &pr), Ok(f("p -> p")));
    }

    #[test]
    fn include_remaps() {
        let mut b = ProofBuilder::normal();
        b.taut(f("q -> q"));
        let inner = {
            let mut c = ProofBuilder::normal();
            let t = c.taut(f("p -> p"));
            let n = c.nec(t, Agent(1));
            c.finish(n)
        };
        let at = b.include(&inner);
        let pr = b.finish(at);
        assert_eq!(check_proof(&System::k(), &pr), Ok(f("K1 (p -> p)")));
    }
}
