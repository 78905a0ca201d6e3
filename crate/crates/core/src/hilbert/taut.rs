//! Truth-table tautology checking on the propositional skeleton.
//!
//! Maximal `K_i`-headed subformulas and variables become atoms; identical
//! subformulas share an atom. Assignments are evaluated 64 at a time.

use std::collections::HashMap;

use thiserror::Error;

use crate::formula::Formula;

pub const MAX_ATOMS: usize = 20;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("propositional skeleton has {atoms} atoms (cap {cap})")]
pub struct TooManyAtoms {
    pub atoms: usize,
    pub cap: usize,
}

enum Node {
    False,
    Atom(usize),
    Or(Box<Node>, Box<Node>),
    And(Box<Node>, Box<Node>),
    Imp(Box<Node>, Box<Node>),
}

fn skeleton<'a>(f: &'a Formula, atoms: &mut HashMap<&'a Formula, usize>) -> Node {
    let mut atom = |f: &'a Formula| {
        let next = atoms.len();
        Node::Atom(*atoms.entry(f).or_insert(next))
    };
    match f {
        Formula::Bottom => Node::False,
        Formula::Var(_) | Formula::Know(..) => atom(f),
        Formula::Or(a, b) => Node::Or(Box::new(skeleton(a, atoms)), Box::new(skeleton(b, atoms))),
        Formula::And(a, b) => Node::And(Box::new(skeleton(a, atoms)), Box::new(skeleton(b, atoms))),
        Formula::Imp(a, b) => Node::Imp(Box::new(skeleton(a, atoms)), Box::new(skeleton(b, atoms))),
    }
}

const LOW_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

fn eval(node: &Node, block: u64) -> u64 {
    match node {
        Node::False => 0,
        Node::Atom(k) if *k < 6 => LOW_PATTERNS[*k],
        Node::Atom(k) => {
            if block >> (k - 6) & 1 == 1 {
                !0
            } else {
                0
            }
        }
        Node::Or(a, b) => eval(a, block) | eval(b, block),
        Node::And(a, b) => eval(a, block) & eval(b, block),
        Node::Imp(a, b) => !eval(a, block) | eval(b, block),
    }
}

/// Number of distinct skeleton atoms.
pub fn skeleton_atoms(f: &Formula) -> usize {
    let mut atoms = HashMap::new();
    skeleton(f, &mut atoms);
    atoms.len()
}

pub fn is_tautology(f: &Formula) -> Result<bool, TooManyAtoms> {
    let mut atoms = HashMap::new();
    let node = skeleton(f, &mut atoms);
    let k = atoms.len();
    if k > MAX_ATOMS {
        return Err(TooManyAtoms { atoms: k, cap: MAX_ATOMS });
    }
    let (blocks, valid) = if k >= 6 {
        (1u64 << (k - 6), !0u64)
    } else {
        (1, (1u64 << (1u64 << k)) - 1)
    };
    Ok((0..blocks).all(|b| eval(&node, b) & valid == valid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn taut(s: &str) -> bool {
        is_tautology(&parse(s).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert!(taut("p -> p"));
        assert!(taut("K1 p -> K1 p"));
        assert!(!taut("K1 p -> p"));
        assert!(taut("true"));
        assert!(!taut("false"));
        assert!(taut("(p -> q) -> (~q -> ~p)"));
        assert!(!taut("K1 p -> K2 p"));
        assert!(taut("K1 (p & q) | ~K1 (p & q)"));
        assert!(!taut("K1 (p & q) | ~K1 (q & p)"));
    }

    #[test]
    fn many_atoms() {
        // 8 atoms: forces several 64-lane blocks.
        assert!(taut("a & b & c & d & e & f & g & h -> h"));
        assert!(!taut("a & b & c & d & e & f & g -> h"));
        let wide: Vec<String> = (0..21).map(|i| format!("x{i}")).collect();
        let f = parse(&wide.join(" | ")).unwrap();
        assert_eq!(is_tautology(&f), Err(TooManyAtoms { atoms: 21, cap: 20 }));
    }

    /// Independent oracle: per-assignment recursive evaluation.
    #[test]
    fn agrees_with_naive_truth_table() {
        fn naive(f: &Formula, atoms: &HashMap<&Formula, usize>, bits: u32) -> bool {
            match f {
                Formula::Bottom => false,
                Formula::Var(_) | Formula::Know(..) => bits >> atoms[f] & 1 == 1,
                Formula::Or(a, b) => naive(a, atoms, bits) || naive(b, atoms, bits),
                Formula::And(a, b) => naive(a, atoms, bits) && naive(b, atoms, bits),
                Formula::Imp(a, b) => !naive(a, atoms, bits) || naive(b, atoms, bits),
            }
        }
        for s in [
            "(a -> b) -> (b -> c) -> a -> c",
            "a | b | c | d | e | f | g -> g",
            "((a -> b) -> a) -> a",
            "a & ~a -> K1 z",
            "K1 a -> K1 a & (g | ~g)",
            "(a | b) & (c | d) & (e | f) -> a | d | e",
        ] {
            let f = parse(s).unwrap();
            let mut atoms = HashMap::new();
            skeleton(&f, &mut atoms);
            let k = atoms.len() as u32;
            let expected = (0..1u32 << k).all(|bits| naive(&f, &atoms, bits));
            assert_eq!(is_tautology(&f).unwrap(), expected, "{s}");
        }
    }
}
