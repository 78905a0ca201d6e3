//! Exhaustive enumeration of small frames and valuations.
//!
//! A relation on `n ≤ 5` worlds is a bit-vector: pair `(a, b)` is bit
//! `a * n + b`. Relations are produced in ascending bit-vector order, and
//! multi-agent frames in lexicographic order with the smallest agent label
//! most significant.

use std::sync::Arc;

use super::{Frame, FrameClass, KripkeError, Limits, Model, World};
use crate::formula::Agent;

/// Largest frame the bit-vector encoding supports.
pub(crate) const MASK_WORLDS: usize = 5;

pub(crate) fn succ_mask(rel: u32, n: usize, a: usize) -> u32 {
    (rel >> (a * n)) & ((1u32 << n) - 1)
}

pub(crate) fn diag_mask(n: usize) -> u32 {
    (0..n).fold(0, |m, w| m | 1 << (w * n + w))
}

pub(crate) fn mask_reflexive(rel: u32, n: usize) -> bool {
    let d = diag_mask(n);
    rel & d == d
}

pub(crate) fn mask_transitive(rel: u32, n: usize) -> bool {
    (0..n).all(|a| {
        let sa = succ_mask(rel, n, a);
        (0..n).all(|b| sa >> b & 1 == 0 || succ_mask(rel, n, b) & !sa == 0)
    })
}

pub(crate) fn mask_weakly_directed(rel: u32, n: usize) -> bool {
    (0..n).all(|x| {
        let sx = succ_mask(rel, n, x);
        (0..n).all(|y| {
            sx >> y & 1 == 0
                || (0..n).all(|z| sx >> z & 1 == 0 || succ_mask(rel, n, y) & succ_mask(rel, n, z) != 0)
        })
    })
}

pub(crate) fn mask_in_class(rel: u32, n: usize, cls: FrameClass) -> bool {
    (!cls.reflexive() || mask_reflexive(rel, n))
        && (!cls.transitive() || mask_transitive(rel, n))
        && (!cls.weakly_directed() || mask_weakly_directed(rel, n))
}

/// Deposits the bits of `index` into the off-diagonal positions, ascending.
fn spread_off_diagonal(index: u32, n: usize) -> u32 {
    let mut out = 0;
    let mut k = 0;
    for bit in 0..n * n {
        if bit / n != bit % n {
            out |= (index >> k & 1) << bit;
            k += 1;
        }
    }
    out
}

/// All relations on `n` worlds in a class, indexable in ascending order.
#[derive(Clone, Debug)]
pub struct RelationSpace {
    n: usize,
    repr: Repr,
}

#[derive(Clone, Debug)]
enum Repr {
    Dense,
    Reflexive,
    List(Vec<u32>),
}

impl RelationSpace {
    pub fn new(n: usize, cls: FrameClass) -> RelationSpace {
        assert!((1..=MASK_WORLDS).contains(&n));
        let repr = match cls {
            FrameClass::All => Repr::Dense,
            FrameClass::Reflexive => Repr::Reflexive,
            _ => {
                let base = RelationSpace::new(n, if cls.reflexive() { FrameClass::Reflexive } else { FrameClass::All });
                Repr::List((0..base.len()).map(|i| base.get(i)).filter(|&r| mask_in_class(r, n, cls)).collect())
            }
        };
        RelationSpace { n, repr }
    }

    pub fn worlds(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> u64 {
        match &self.repr {
            Repr::Dense => 1 << (self.n * self.n),
            Repr::Reflexive => 1 << (self.n * self.n - self.n),
            Repr::List(v) => v.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, index: u64) -> u32 {
        match &self.repr {
            Repr::Dense => index as u32,
            Repr::Reflexive => spread_off_diagonal(index as u32, self.n) | diag_mask(self.n),
            Repr::List(v) => v[index as usize],
        }
    }
}

pub(crate) fn check_worlds(n: usize, limits: &Limits) -> Result<(), KripkeError> {
    if n == 0 {
        return Err(KripkeError::NoWorlds);
    }
    let cap = limits.max_worlds.min(MASK_WORLDS);
    if n > cap {
        return Err(KripkeError::TooManyWorlds { n, cap });
    }
    Ok(())
}

pub(crate) fn frame_from_masks(n: usize, agents: &[Agent], rels: &[u32]) -> Frame {
    let mut fr = Frame::new(n);
    for (&agent, &rel) in agents.iter().zip(rels) {
        let pairs = (0..n).flat_map(|a| (0..n).map(move |b| (a, b)));
        fr.rel
            .insert(agent, pairs.filter(|&(a, b)| rel >> (a * n + b) & 1 == 1).collect());
    }
    fr
}

/// Frame index decoded to one relation index per agent.
pub(crate) fn decode_frame_index(spaces_len: u64, agents: usize, mut index: u64) -> Vec<u64> {
    let mut out = vec![0; agents];
    for slot in out.iter_mut().rev() {
        *slot = index % spaces_len;
        index /= spaces_len;
    }
    out
}

pub fn enumerate_frames(
    n: usize,
    agents: &[Agent],
    cls: FrameClass,
) -> Result<impl Iterator<Item = Frame>, KripkeError> {
    enumerate_frames_with(n, agents, cls, &Limits::default())
}

/// Every labeled frame on `n` worlds whose relations all lie in `cls`.
pub fn enumerate_frames_with(
    n: usize,
    agents: &[Agent],
    cls: FrameClass,
    limits: &Limits,
) -> Result<impl Iterator<Item = Frame>, KripkeError> {
    check_worlds(n, limits)?;
    let mut agents = agents.to_vec();
    agents.sort();
    agents.dedup();
    let space = RelationSpace::new(n, cls);
    let total = (0..agents.len()).try_fold(1u64, |acc, _| acc.checked_mul(space.len()));
    let total = total.ok_or(KripkeError::TooManyWorlds { n, cap: n - 1 })?;
    Ok((0..total).map(move |idx| {
        let rels: Vec<u32> = decode_frame_index(space.len(), agents.len(), idx)
            .into_iter()
            .map(|i| space.get(i))
            .collect();
        frame_from_masks(n, &agents, &rels)
    }))
}

pub fn enumerate_valuations<'a>(
    fr: &'a Frame,
    vars: &[&str],
) -> Result<impl Iterator<Item = Model> + 'a, KripkeError> {
    enumerate_valuations_with(fr, vars, &Limits::default())
}

/// All valuations of `vars` over the frame. Valuation index bit `k * n + w`
/// makes variable `k` true at world `w`.
pub fn enumerate_valuations_with<'a>(
    fr: &'a Frame,
    vars: &[&str],
    limits: &Limits,
) -> Result<impl Iterator<Item = Model> + 'a, KripkeError> {
    let bits = vars.len() * fr.worlds;
    if bits > limits.max_valuation_bits {
        return Err(KripkeError::TooManyValuationBits {
            bits,
            cap: limits.max_valuation_bits,
        });
    }
    let vars: Vec<Arc<str>> = vars.iter().map(|v| Arc::from(*v)).collect();
    Ok((0..1u64 << bits).map(move |idx| valuation_model(fr.clone(), &vars, idx)))
}

pub(crate) fn valuation_model(frame: Frame, vars: &[Arc<str>], index: u64) -> Model {
    let n = frame.worlds;
    let mut m = Model::new(frame);
    for (k, v) in vars.iter().enumerate() {
        let worlds: Vec<World> = (0..n).filter(|w| index >> (k * n + w) & 1 == 1).collect();
        m.valuation.insert(v.clone(), worlds.into_iter().collect());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::super::{class_check, tests::A1};
    use super::*;

    /// Brute force over every relation on `n` points through the pair-set
    /// class checks.
    fn brute_count(n: usize, cls: FrameClass) -> usize {
        (0u32..1 << (n * n))
            .filter(|&r| class_check(&frame_from_masks(n, &[A1], &[r]), A1, cls))
            .count()
    }

    #[test]
    fn preorder_counts_match_brute_force() {
        assert_eq!(brute_count(2, FrameClass::Preorder), 4);
        assert_eq!(brute_count(3, FrameClass::Preorder), 29);
        assert_eq!(enumerate_frames(2, &[A1], FrameClass::Preorder).unwrap().count(), 4);
        assert_eq!(enumerate_frames(3, &[A1], FrameClass::Preorder).unwrap().count(), 29);
        assert_eq!(enumerate_frames(1, &[A1], FrameClass::WeaklyDirectedPreorder).unwrap().count(), 1);
    }

    #[test]
    fn spaces_agree_with_pair_set_checks() {
        for n in 1..=3 {
            for cls in FrameClass::ALL {
                assert_eq!(
                    RelationSpace::new(n, cls).len() as usize,
                    brute_count(n, cls),
                    "n={n} cls={cls}"
                );
            }
        }
    }

    #[test]
    fn enumeration_is_ascending() {
        for cls in FrameClass::ALL {
            let s = RelationSpace::new(3, cls);
            let v: Vec<u32> = (0..s.len()).map(|i| s.get(i)).collect();
            assert!(v.windows(2).all(|w| w[0] < w[1]), "{cls}");
        }
    }

    #[test]
    fn two_agent_frames() {
        let frames: Vec<Frame> = enumerate_frames(2, &[Agent(2), A1], FrameClass::Preorder)
            .unwrap()
            .collect();
        assert_eq!(frames.len(), 16);
        // Smallest agent is most significant: the first four share agent 1's relation.
        assert!(frames[..4].iter().all(|f| f.relation(A1) == frames[0].relation(A1)));
    }

    #[test]
    fn caps() {
        assert_eq!(
            enumerate_frames(6, &[A1], FrameClass::All).err(),
            Some(KripkeError::TooManyWorlds { n: 6, cap: 5 })
        );
        assert_eq!(enumerate_frames(0, &[A1], FrameClass::All).err(), Some(KripkeError::NoWorlds));
        let fr = Frame::new(5);
        assert!(enumerate_valuations(&fr, &["a", "b", "c", "d", "e"]).is_err());
    }

    #[test]
    fn valuation_counts() {
        let one = Frame::new(1);
        let two = Frame::new(2);
        assert_eq!(enumerate_valuations(&one, &["p"]).unwrap().count(), 2);
        assert_eq!(enumerate_valuations(&two, &["p"]).unwrap().count(), 4);
        assert_eq!(enumerate_valuations(&two, &["p", "q"]).unwrap().count(), 16);
        let m = enumerate_valuations(&two, &["p", "q"]).unwrap().nth(0b0110).unwrap();
        assert!(m.holds_var("p", 1) && !m.holds_var("p", 0));
        assert!(m.holds_var("q", 0) && !m.holds_var("q", 1));
    }
}
