//! Valuation-sliced evaluation on small frames.
//!
//! For a fixed frame on at most five worlds, a formula is evaluated against
//! 64 consecutive valuations at once: each node's truth value at world `w`
//! is a `u64` whose lane `j` belongs to valuation `64 * block + j`.

use std::collections::HashMap;
use std::sync::Arc;

use super::enumerate::{succ_mask, MASK_WORLDS};
use crate::formula::{Agent, Formula};

#[derive(Clone, Copy, Debug)]
enum Op {
    Bottom,
    Var(usize),
    Or(usize, usize),
    And(usize, usize),
    Imp(usize, usize),
    Know(usize, usize),
}

type Lanes = [u64; MASK_WORLDS];

/// A formula flattened into a DAG of shared nodes, children before parents.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    ops: Vec<Op>,
    pub vars: Vec<Arc<str>>,
    pub agents: Vec<Agent>,
}

const LOW_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Successor masks of one frame, indexed `[agent slot][world]`.
pub(crate) type SuccTable = Vec<[u32; MASK_WORLDS]>;

pub(crate) fn succ_table(n: usize, rels: &[u32]) -> SuccTable {
    rels.iter()
        .map(|&r| {
            let mut row = [0u32; MASK_WORLDS];
            for (a, slot) in row.iter_mut().enumerate().take(n) {
                *slot = succ_mask(r, n, a);
            }
            row
        })
        .collect()
}

impl Compiled {
    /// `vars` and `agents` fix the variable and agent slots; formula symbols
    /// outside them are treated as false variables / empty relations.
    pub fn new(f: &Formula, vars: &[Arc<str>], agents: &[Agent]) -> Compiled {
        let mut c = Compiled {
            ops: Vec::new(),
            vars: vars.to_vec(),
            agents: agents.to_vec(),
        };
        let mut memo = HashMap::new();
        c.add(f, &mut memo);
        c
    }

    fn add(&mut self, f: &Formula, memo: &mut HashMap<Formula, usize>) -> usize {
        if let Some(&i) = memo.get(f) {
            return i;
        }
        let op = match f {
            Formula::Bottom => Op::Bottom,
            Formula::Var(v) => match self.vars.iter().position(|x| x == v) {
                Some(k) => Op::Var(k),
                None => Op::Bottom,
            },
            Formula::Or(a, b) => Op::Or(self.add(a, memo), self.add(b, memo)),
            Formula::And(a, b) => Op::And(self.add(a, memo), self.add(b, memo)),
            Formula::Imp(a, b) => Op::Imp(self.add(a, memo), self.add(b, memo)),
            Formula::Know(i, a) => {
                let body = self.add(a, memo);
                match self.agents.iter().position(|x| x == i) {
                    Some(slot) => Op::Know(slot, body),
                    // No relation: the box is vacuously true.
                    None => Op::Imp(body, body),
                }
            }
        };
        self.ops.push(op);
        memo.insert(f.clone(), self.ops.len() - 1);
        self.ops.len() - 1
    }

    fn eval_block(&self, n: usize, succ: &SuccTable, block: u64, scratch: &mut Vec<Lanes>) {
        scratch.clear();
        for op in &self.ops {
            let mut out = [0u64; MASK_WORLDS];
            match *op {
                Op::Bottom => {}
                Op::Var(k) => {
                    for (w, lane) in out.iter_mut().enumerate().take(n) {
                        let bit = k * n + w;
                        *lane = if bit < 6 {
                            LOW_PATTERNS[bit]
                        } else if block >> (bit - 6) & 1 == 1 {
                            !0
                        } else {
                            0
                        };
                    }
                }
                Op::Or(a, b) => {
                    for w in 0..n {
                        out[w] = scratch[a][w] | scratch[b][w];
                    }
                }
                Op::And(a, b) => {
                    for w in 0..n {
                        out[w] = scratch[a][w] & scratch[b][w];
                    }
                }
                Op::Imp(a, b) => {
                    for w in 0..n {
                        out[w] = !scratch[a][w] | scratch[b][w];
                    }
                }
                Op::Know(slot, a) => {
                    for w in 0..n {
                        let mut acc = !0u64;
                        let mut s = succ[slot][w];
                        while s != 0 {
                            let v = s.trailing_zeros() as usize;
                            acc &= scratch[a][v];
                            s &= s - 1;
                        }
                        out[w] = acc;
                    }
                }
            }
            scratch.push(out);
        }
    }

    pub fn valuation_bits(&self, n: usize) -> usize {
        self.vars.len() * n
    }

    /// Smallest `(valuation index, world)` where the formula is false, in
    /// valuation-major order.
    pub fn first_refutation(&self, n: usize, succ: &SuccTable, scratch: &mut Vec<Lanes>) -> Option<(u64, usize)> {
        let bits = self.valuation_bits(n);
        let (blocks, valid) = if bits >= 6 {
            (1u64 << (bits - 6), !0u64)
        } else {
            (1, (1u64 << (1u64 << bits)) - 1)
        };
        for block in 0..blocks {
            self.eval_block(n, succ, block, scratch);
            let root = scratch.last().expect("non-empty formula");
            let any = (0..n).fold(0u64, |acc, w| acc | (!root[w] & valid));
            if any != 0 {
                let lane = any.trailing_zeros() as u64;
                let world = (0..n).find(|&w| !root[w] >> lane & 1 == 1).unwrap();
                return Some((block * 64 + lane, world));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::super::enumerate::{frame_from_masks, valuation_model};
    use super::super::{eval, tests::A1};
    use super::*;
    use crate::formula::parse;

    #[test]
    fn agrees_with_recursive_eval() {
        let vars: Vec<Arc<str>> = vec![Arc::from("p"), Arc::from("q")];
        let formulas = ["K1 p -> p", "L1 K1 p -> K1 L1 p", "p & ~q", "K1 (p | q) -> K1 p | K1 q", "K2 p"];
        for text in formulas {
            let f = parse(text).unwrap();
            let c = Compiled::new(&f, &vars, &[A1]);
            // A handful of 3-world relations.
            for rel in [0u32, 0b100_010_001, 0b111_011_001, 0b110_010_111, 0b101_000_011] {
                let frame = frame_from_masks(3, &[A1], &[rel]);
                let succ = succ_table(3, &[rel]);
                let mut scratch = Vec::new();
                let expected = (0..64u64).find_map(|v| {
                    let m = valuation_model(frame.clone(), &vars, v);
                    (0..3).find(|&w| !eval(&m, w, &f).unwrap()).map(|w| (v, w))
                });
                assert_eq!(c.first_refutation(3, &succ, &mut scratch), expected, "{text} rel={rel:b}");
            }
        }
    }

    #[test]
    fn large_valuation_space_uses_high_blocks() {
        // 3 vars on 3 worlds = 9 bits: refutation only at the all-true valuation.
        let vars: Vec<Arc<str>> = ["p", "q", "r"].iter().map(|v| Arc::from(*v)).collect();
        let f = parse("~(p & q & r)").unwrap();
        let c = Compiled::new(&f, &vars, &[]);
        let succ = succ_table(1, &[]);
        let mut scratch = Vec::new();
        assert_eq!(c.first_refutation(1, &succ, &mut scratch), Some((7, 0)));
        let r = c.first_refutation(3, &succ_table(3, &[]), &mut scratch).unwrap();
        // First valuation with p, q, r all true at some world: world 0 bits 0, 3, 6.
        assert_eq!(r, (1 | 1 << 3 | 1 << 6, 0));
    }
}
