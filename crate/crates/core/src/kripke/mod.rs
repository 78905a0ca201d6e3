//! Finite Kripke frames and models.

mod enumerate;
mod file;
mod random;
pub(crate) mod sliced;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::formula::{instantiate_schema, Agent, Formula, SchemaName};

pub use enumerate::{enumerate_frames, enumerate_frames_with, enumerate_valuations, enumerate_valuations_with, RelationSpace};
pub use file::{parse_model, parse_pointed_model, print_model, print_pointed_model, ModelFileError};
pub use random::random_model;
pub(crate) use enumerate::{decode_frame_index, frame_from_masks, valuation_model};

pub type World = usize;

/// Caps on exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_worlds: usize,
    pub max_valuation_bits: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_worlds: 5,
            max_valuation_bits: 24,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KripkeError {
    #[error("world {world} out of range (model has {worlds} worlds)")]
    WorldOutOfRange { world: World, worlds: usize },
    #[error("frame size {n} exceeds the cap of {cap} worlds")]
    TooManyWorlds { n: usize, cap: usize },
    #[error("frame must have at least one world")]
    NoWorlds,
    #[error("{bits} valuation bits exceed the cap of {cap}")]
    TooManyValuationBits { bits: usize, cap: usize },
    #[error("relation of agent {0} is not a preorder")]
    NotPreorder(Agent),
    #[error("schema {0} has no single-variable frame check")]
    UnsupportedSchema(SchemaName),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrameClass {
    All,
    Reflexive,
    Transitive,
    Preorder,
    WeaklyDirected,
    WeaklyDirectedPreorder,
}

impl FrameClass {
    pub const ALL: [FrameClass; 6] = [
        FrameClass::All,
        FrameClass::Reflexive,
        FrameClass::Transitive,
        FrameClass::Preorder,
        FrameClass::WeaklyDirected,
        FrameClass::WeaklyDirectedPreorder,
    ];

    pub fn reflexive(self) -> bool {
        matches!(
            self,
            FrameClass::Reflexive | FrameClass::Preorder | FrameClass::WeaklyDirectedPreorder
        )
    }

    pub fn transitive(self) -> bool {
        matches!(
            self,
            FrameClass::Transitive | FrameClass::Preorder | FrameClass::WeaklyDirectedPreorder
        )
    }

    pub fn weakly_directed(self) -> bool {
        matches!(
            self,
            FrameClass::WeaklyDirected | FrameClass::WeaklyDirectedPreorder
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            FrameClass::All => "all",
            FrameClass::Reflexive => "reflexive",
            FrameClass::Transitive => "transitive",
            FrameClass::Preorder => "preorder",
            FrameClass::WeaklyDirected => "weakly-directed",
            FrameClass::WeaklyDirectedPreorder => "wd-preorder",
        }
    }
}

impl fmt::Display for FrameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrameClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FrameClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = FrameClass::ALL.iter().map(|c| c.name()).collect();
                format!("unknown frame class `{s}` (expected one of {})", names.join(", "))
            })
    }
}

pub type Relation = BTreeSet<(World, World)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub worlds: usize,
    pub rel: BTreeMap<Agent, Relation>,
}

impl Frame {
    pub fn new(worlds: usize) -> Frame {
        Frame {
            worlds,
            rel: BTreeMap::new(),
        }
    }

    pub fn with_relation(mut self, agent: Agent, pairs: impl IntoIterator<Item = (World, World)>) -> Frame {
        let entry = self.rel.entry(agent).or_default();
        for (a, b) in pairs {
            assert!(a < self.worlds && b < self.worlds, "pair ({a},{b}) outside frame");
            entry.insert((a, b));
        }
        self
    }

    /// The relation of `agent`; empty if the agent has no entry.
    pub fn relation(&self, agent: Agent) -> Relation {
        self.rel.get(&agent).cloned().unwrap_or_default()
    }

    pub fn related(&self, agent: Agent, a: World, b: World) -> bool {
        self.rel.get(&agent).is_some_and(|r| r.contains(&(a, b)))
    }

    /// Successors of `w` for `agent`, ascending.
    pub fn successors(&self, agent: Agent, w: World) -> impl Iterator<Item = World> + '_ {
        self.rel
            .get(&agent)
            .into_iter()
            .flat_map(move |r| r.range((w, 0)..=(w, usize::MAX)).map(|&(_, v)| v))
    }

    pub fn agents(&self) -> impl Iterator<Item = Agent> + '_ {
        self.rel.keys().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub frame: Frame,
    pub valuation: BTreeMap<Arc<str>, BTreeSet<World>>,
}

impl Model {
    pub fn new(frame: Frame) -> Model {
        Model {
            frame,
            valuation: BTreeMap::new(),
        }
    }

    pub fn with_true(mut self, var: &str, worlds: impl IntoIterator<Item = World>) -> Model {
        let set = self.valuation.entry(Arc::from(var)).or_default();
        for w in worlds {
            assert!(w < self.frame.worlds, "world {w} outside frame");
            set.insert(w);
        }
        self
    }

    pub fn holds_var(&self, var: &str, w: World) -> bool {
        self.valuation.get(var).is_some_and(|s| s.contains(&w))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedModel {
    pub model: Model,
    pub world: World,
}

/// Truth of `f` at world `w`.
pub fn eval(m: &Model, w: World, f: &Formula) -> Result<bool, KripkeError> {
    if w >= m.frame.worlds {
        return Err(KripkeError::WorldOutOfRange {
            world: w,
            worlds: m.frame.worlds,
        });
    }
    Ok(eval_at(m, w, f))
}

fn eval_at(m: &Model, w: World, f: &Formula) -> bool {
    match f {
        Formula::Bottom => false,
        Formula::Var(v) => m.holds_var(v, w),
        Formula::Or(a, b) => eval_at(m, w, a) || eval_at(m, w, b),
        Formula::And(a, b) => eval_at(m, w, a) && eval_at(m, w, b),
        Formula::Imp(a, b) => !eval_at(m, w, a) || eval_at(m, w, b),
        Formula::Know(i, a) => m.frame.successors(*i, w).all(|v| eval_at(m, v, a)),
    }
}

/// Truth of `f` at every world.
pub fn valid_in_model(m: &Model, f: &Formula) -> bool {
    (0..m.frame.worlds).all(|w| eval_at(m, w, f))
}

pub fn is_reflexive(fr: &Frame, i: Agent) -> bool {
    (0..fr.worlds).all(|w| fr.related(i, w, w))
}

pub fn is_transitive(fr: &Frame, i: Agent) -> bool {
    let n = fr.worlds;
    (0..n).all(|x| {
        (0..n).all(|y| !fr.related(i, x, y) || (0..n).all(|z| !fr.related(i, y, z) || fr.related(i, x, z)))
    })
}

/// `∀x y z. xRy ∧ xRz → ∃w. yRw ∧ zRw`
pub fn is_weakly_directed(fr: &Frame, i: Agent) -> bool {
    let n = fr.worlds;
    (0..n).all(|x| {
        (0..n).all(|y| {
            !fr.related(i, x, y)
                || (0..n).all(|z| {
                    !fr.related(i, x, z) || (0..n).any(|w| fr.related(i, y, w) && fr.related(i, z, w))
                })
        })
    })
}

/// Decides membership of agent `i`'s relation in `cls`.
pub fn class_check(fr: &Frame, i: Agent, cls: FrameClass) -> bool {
    (!cls.reflexive() || is_reflexive(fr, i))
        && (!cls.transitive() || is_transitive(fr, i))
        && (!cls.weakly_directed() || is_weakly_directed(fr, i))
}

/// Every agent present in the frame satisfies `cls`.
pub fn frame_in_class(fr: &Frame, cls: FrameClass) -> bool {
    fr.agents().all(|i| class_check(fr, i, cls))
}

/// Per-agent reflexive-transitive closure.
pub fn refl_trans_closure(fr: &Frame) -> Frame {
    let n = fr.worlds;
    let mut out = Frame::new(n);
    for (&agent, rel) in &fr.rel {
        let mut reach = vec![vec![false; n]; n];
        for w in 0..n {
            reach[w][w] = true;
        }
        for &(a, b) in rel {
            reach[a][b] = true;
        }
        for k in 0..n {
            for a in 0..n {
                if reach[a][k] {
                    for b in 0..n {
                        if reach[k][b] {
                            reach[a][b] = true;
                        }
                    }
                }
            }
        }
        let pairs = (0..n).flat_map(|a| (0..n).map(move |b| (a, b)));
        let closed: Relation = pairs.filter(|&(a, b)| reach[a][b]).collect();
        out.rel.insert(agent, closed);
    }
    out
}

/// Adds one world that every world of every agent reaches, including itself.
pub fn add_final_cluster(fr: &Frame) -> Result<Frame, KripkeError> {
    if let Some(i) = fr.agents().find(|&i| !class_check(fr, i, FrameClass::Preorder)) {
        return Err(KripkeError::NotPreorder(i));
    }
    Ok(append_final_world(fr))
}

pub(crate) fn append_final_world(fr: &Frame) -> Frame {
    let f = fr.worlds;
    let mut out = fr.clone();
    out.worlds += 1;
    for rel in out.rel.values_mut() {
        for w in 0..=f {
            rel.insert((w, f));
        }
    }
    out
}

/// Whether every instance of `name` on a single fresh variable holds at
/// every world under every valuation. Only `AxT`, `Ax4` and `Ax2`.
pub fn validates_schema(fr: &Frame, name: SchemaName, i: Agent) -> Result<bool, KripkeError> {
    validates_schema_with(fr, name, i, &Limits::default())
}

pub fn validates_schema_with(
    fr: &Frame,
    name: SchemaName,
    i: Agent,
    limits: &Limits,
) -> Result<bool, KripkeError> {
    if !matches!(name, SchemaName::AxT | SchemaName::Ax4 | SchemaName::Ax2) {
        return Err(KripkeError::UnsupportedSchema(name));
    }
    let p = Formula::var("p");
    let inst = instantiate_schema(name, i, &p, None).expect("unary schema");
    let mut models = enumerate_valuations_with(fr, &["p"], limits)?;
    Ok(models.all(|m| valid_in_model(&m, &inst)))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::formula::parse;

    pub const A1: Agent = Agent(1);

    /// Worlds {0,1,2}; agent 1 reflexive plus 0→1, 0→2.
    pub fn fork_frame() -> Frame {
        Frame::new(3).with_relation(A1, [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2)])
    }

    pub fn fork_model() -> Model {
        Model::new(fork_frame()).with_true("p", [1])
    }

    pub fn chain_frame() -> Frame {
        Frame::new(2).with_relation(A1, [(0, 0), (1, 1), (0, 1)])
    }

    /// Independent evaluator: computes truth sets bottom-up.
    fn truth_set(m: &Model, f: &Formula) -> BTreeSet<World> {
        let all: BTreeSet<World> = (0..m.frame.worlds).collect();
        match f {
            Formula::Bottom => BTreeSet::new(),
            Formula::Var(v) => m.valuation.get(v).cloned().unwrap_or_default(),
            Formula::Or(a, b) => &truth_set(m, a) | &truth_set(m, b),
            Formula::And(a, b) => &truth_set(m, a) & &truth_set(m, b),
            Formula::Imp(a, b) => &(&all - &truth_set(m, a)) | &truth_set(m, b),
            Formula::Know(i, a) => {
                let body = truth_set(m, a);
                let rel = m.frame.relation(*i);
                all.iter()
                    .copied()
                    .filter(|w| rel.iter().filter(|(x, _)| x == w).all(|(_, v)| body.contains(v)))
                    .collect()
            }
        }
    }

    #[test]
    fn fork_model_evaluation() {
        let m = fork_model();
        let lk = parse("L1 K1 p").unwrap();
        let kl = parse("K1 L1 p").unwrap();
        assert!(eval(&m, 0, &lk).unwrap());
        assert!(!eval(&m, 0, &kl).unwrap());
        assert!(truth_set(&m, &lk).contains(&0));
        assert!(!truth_set(&m, &kl).contains(&0));
    }

    #[test]
    fn bottom_and_singleton() {
        let m = fork_model();
        for w in 0..3 {
            assert!(!eval(&m, w, &Formula::Bottom).unwrap());
        }
        let single = Model::new(Frame::new(1).with_relation(A1, [(0, 0)])).with_true("p", [0]);
        assert!(eval(&single, 0, &parse("K1 p").unwrap()).unwrap());
        assert!(matches!(
            eval(&single, 1, &Formula::Bottom),
            Err(KripkeError::WorldOutOfRange { world: 1, worlds: 1 })
        ));
    }

    #[test]
    fn evaluators_agree_on_fork() {
        let m = fork_model();
        for text in ["K1 p -> p", "L1 K1 p -> K1 L1 p", "K1 (p | ~p)", "~K1 ~K1 p", "K2 false"] {
            let f = parse(text).unwrap();
            let fast: BTreeSet<World> = (0..3).filter(|&w| eval(&m, w, &f).unwrap()).collect();
            assert_eq!(fast, truth_set(&m, &f), "{text}");
        }
    }

    #[test]
    fn class_check_examples() {
        assert!(!class_check(&fork_frame(), A1, FrameClass::WeaklyDirected));
        assert!(class_check(&fork_frame(), A1, FrameClass::Preorder));
        assert!(class_check(&chain_frame(), A1, FrameClass::WeaklyDirectedPreorder));
        let discrete = Frame::new(3).with_relation(A1, (0..3).map(|w| (w, w)));
        assert!(class_check(&discrete, A1, FrameClass::WeaklyDirected));
        // An agent with no relation is vacuously transitive and weakly directed.
        assert!(class_check(&discrete, Agent(7), FrameClass::WeaklyDirected));
        assert!(!class_check(&discrete, Agent(7), FrameClass::Reflexive));
    }

    #[test]
    fn closure_examples() {
        let fr = Frame::new(2).with_relation(A1, [(0, 1)]);
        assert_eq!(refl_trans_closure(&fr).relation(A1), [(0, 0), (0, 1), (1, 1)].into());
        let chain = chain_frame();
        assert_eq!(refl_trans_closure(&chain), chain);
        let fr = Frame::new(3).with_relation(A1, [(0, 1), (1, 2)]);
        let c = refl_trans_closure(&fr);
        assert!(c.related(A1, 0, 2));
        assert_eq!(refl_trans_closure(&c), c);
    }

    #[test]
    fn final_cluster() {
        let out = add_final_cluster(&fork_frame()).unwrap();
        assert_eq!(out.worlds, 4);
        assert!(class_check(&out, A1, FrameClass::WeaklyDirectedPreorder));
        for w in 0..4 {
            assert!(out.related(A1, w, 3));
        }
        let one = Frame::new(1).with_relation(A1, [(0, 0)]);
        assert_eq!(add_final_cluster(&one).unwrap(), chain_frame());
        let bad = Frame::new(2).with_relation(A1, [(0, 1)]);
        assert_eq!(add_final_cluster(&bad), Err(KripkeError::NotPreorder(A1)));
    }

    #[test]
    fn schema_validity_examples() {
        assert!(!validates_schema(&fork_frame(), SchemaName::Ax2, A1).unwrap());
        let irreflexive = Frame::new(1).with_relation(A1, []);
        assert!(!validates_schema(&irreflexive, SchemaName::AxT, A1).unwrap());
        assert!(validates_schema(&chain_frame(), SchemaName::AxT, A1).unwrap());
        assert!(validates_schema(&chain_frame(), SchemaName::Ax2, A1).unwrap());
        assert!(validates_schema(&fork_frame(), SchemaName::AxN, A1).is_err());
    }

    #[test]
    fn dual_and_box_laws_on_fork() {
        let m = fork_model();
        let phi = parse("p | K1 p").unwrap();
        for w in 0..3 {
            let l = eval(&m, w, &Formula::poss(A1, phi.clone())).unwrap();
            let k = eval(&m, w, &Formula::know(A1, Formula::neg(phi.clone()))).unwrap();
            assert_eq!(l, !k);
        }
    }

    #[test]
    fn frame_class_names_round_trip() {
        for c in FrameClass::ALL {
            assert_eq!(c.name().parse::<FrameClass>().unwrap(), c);
        }
        assert!("nope".parse::<FrameClass>().is_err());
    }
}
