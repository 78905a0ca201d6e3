use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{append_final_world, frame_in_class, refl_trans_closure, Frame, FrameClass, KripkeError, Model};
use crate::formula::Agent;

const EDGE_PROBABILITY: f64 = 0.35;

/// Seeded random model in `cls`. Weakly directed classes get one extra
/// final world, so the result has `n + 1` worlds in that case.
pub fn random_model(
    n: usize,
    agents: &[Agent],
    vars: &[&str],
    cls: FrameClass,
    seed: u64,
) -> Result<Model, KripkeError> {
    if n == 0 {
        return Err(KripkeError::NoWorlds);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut frame = Frame::new(n);
    for &agent in agents {
        let mut rel = super::Relation::new();
        for a in 0..n {
            for b in 0..n {
                if rng.gen_bool(EDGE_PROBABILITY) {
                    rel.insert((a, b));
                }
            }
        }
        frame.rel.insert(agent, rel);
    }
    frame = match (cls.reflexive(), cls.transitive()) {
        (true, true) => refl_trans_closure(&frame),
        (true, false) => {
            for rel in frame.rel.values_mut() {
                rel.extend((0..n).map(|w| (w, w)));
            }
            frame
        }
        (false, true) => transitive_closure(&frame),
        (false, false) => frame,
    };
    if cls.weakly_directed() {
        frame = append_final_world(&frame);
    }
    assert!(frame_in_class(&frame, cls), "generator left class {cls}");
    let worlds = frame.worlds;
    let mut model = Model::new(frame);
    for v in vars {
        let set: Vec<usize> = (0..worlds).filter(|_| rng.gen_bool(0.5)).collect();
        model = model.with_true(v, set);
    }
    Ok(model)
}

fn transitive_closure(fr: &Frame) -> Frame {
    let n = fr.worlds;
    let mut out = Frame::new(n);
    for (&agent, rel) in &fr.rel {
        let mut reach = vec![vec![false; n]; n];
        for &(a, b) in rel {
            reach[a][b] = true;
        }
        for k in 0..n {
            for a in 0..n {
                if reach[a][k] {
                    for b in 0..n {
                        reach[a][b] |= reach[k][b];
                    }
                }
            }
        }
        let pairs = (0..n).flat_map(|a| (0..n).map(move |b| (a, b)));
        out.rel.insert(agent, pairs.filter(|&(a, b)| reach[a][b]).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{class_check, print_model};
    use super::*;

    #[test]
    fn deterministic_in_seed() {
        let a = random_model(4, &[Agent(1), Agent(2)], &["p", "q"], FrameClass::All, 42).unwrap();
        let b = random_model(4, &[Agent(1), Agent(2)], &["p", "q"], FrameClass::All, 42).unwrap();
        assert_eq!(a, b);
        let c = random_model(4, &[Agent(1), Agent(2)], &["p", "q"], FrameClass::All, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn output_lies_in_class() {
        for cls in FrameClass::ALL {
            for seed in 0..50 {
                let m = random_model(3, &[Agent(1), Agent(2)], &["p"], cls, seed).unwrap();
                for agent in [Agent(1), Agent(2)] {
                    assert!(class_check(&m.frame, agent, cls), "{cls} seed {seed}");
                }
            }
        }
        let m = random_model(3, &[Agent(1)], &["p"], FrameClass::WeaklyDirectedPreorder, 0).unwrap();
        assert_eq!(m.frame.worlds, 4);
    }

    #[test]
    fn seed_zero_golden() {
        let m = random_model(3, &[Agent(1)], &["p"], FrameClass::All, 0).unwrap();
        assert_eq!(print_model(&m), GOLDEN_SEED_ZERO);
    }

    const GOLDEN_SEED_ZERO: &str = "worlds 3\nagent 1: (1,0)\nval p: 0\n";
}
