use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{Agent, Formula};
use crate::kripke::{refl_trans_closure, Frame, FrameClass, Model, PointedModel};

/// Default cap on the size of a tableau query.
pub const MAX_TABLEAU_SIZE: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Logic {
    K,
    S4,
}

impl Logic {
    pub fn frame_class(self) -> FrameClass {
        match self {
            Logic::K => FrameClass::All,
            Logic::S4 => FrameClass::Preorder,
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logic::K => "K",
            Logic::S4 => "S4",
        })
    }
}

impl FromStr for Logic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "K" => Ok(Logic::K),
            "S4" => Ok(Logic::S4),
            _ => Err(format!("no decision procedure for `{s}` (expected K or S4)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("formula of size {size} exceeds the tableau cap of {cap}")]
pub struct TableauError {
    pub size: usize,
    pub cap: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableauResult {
    Sat(PointedModel),
    Unsat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Countermodel(PointedModel),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Signed {
    pos: bool,
    f: Formula,
}

impl Signed {
    fn t(f: &Formula) -> Signed {
        Signed { pos: true, f: f.clone() }
    }

    fn f(f: &Formula) -> Signed {
        Signed { pos: false, f: f.clone() }
    }

    fn flip(&self) -> Signed {
        Signed {
            pos: !self.pos,
            f: self.f.clone(),
        }
    }

    /// The two alternatives of a branching formula.
    fn split(&self) -> Option<[Signed; 2]> {
        match (self.pos, &self.f) {
            (true, Formula::Or(a, b)) => Some([Signed::t(a), Signed::t(b)]),
            (false, Formula::And(a, b)) => Some([Signed::f(a), Signed::f(b)]),
            (true, Formula::Imp(a, b)) => Some([Signed::f(a), Signed::t(b)]),
            _ => None,
        }
    }
}

type State = BTreeSet<Signed>;

/// All open propositional saturations of `init`, in a fixed order.
fn saturate(logic: Logic, init: &State) -> Vec<State> {
    let mut out = Vec::new();
    expand(logic, State::new(), init.iter().cloned().collect(), Vec::new(), &mut out);
    out.dedup();
    out
}

fn expand(logic: Logic, mut acc: State, mut todo: Vec<Signed>, mut betas: Vec<Signed>, out: &mut Vec<State>) {
    loop {
        let Some(s) = todo.pop() else {
            // Linear rules exhausted: branch on the first pending beta.
            let Some(beta) = betas.pop() else {
                out.push(acc);
                return;
            };
            let alts = beta.split().expect("beta formula");
            if alts.iter().any(|a| acc.contains(a)) {
                continue;
            }
            for alt in alts {
                expand(logic, acc.clone(), vec![alt], betas.clone(), out);
            }
            return;
        };
        if acc.contains(&s) {
            continue;
        }
        if acc.contains(&s.flip()) {
            return;
        }
        match (s.pos, &s.f) {
            (true, Formula::Bottom) => return,
            (false, Formula::Or(a, b)) => todo.extend([Signed::f(a), Signed::f(b)]),
            (true, Formula::And(a, b)) => todo.extend([Signed::t(a), Signed::t(b)]),
            (false, Formula::Imp(a, b)) => todo.extend([Signed::t(a), Signed::f(b)]),
            (true, Formula::Know(_, a)) if logic == Logic::S4 => todo.push(Signed::t(a)),
            _ if s.split().is_some() => betas.insert(0, s.clone()),
            _ => {}
        }
        acc.insert(s);
    }
}

/// Initial state of an `i`-successor witnessing `F K_i a`.
fn successor(logic: Logic, state: &State, i: Agent, a: &Formula) -> State {
    let mut next = State::new();
    next.insert(Signed::f(a));
    for s in state {
        if let (true, Formula::Know(j, b)) = (s.pos, &s.f) {
            if *j == i {
                next.insert(match logic {
                    Logic::K => Signed::t(b),
                    Logic::S4 => s.clone(),
                });
            }
        }
    }
    next
}

struct Node {
    state: State,
    edges: Vec<(Agent, usize)>,
}

struct Search {
    logic: Logic,
    nodes: Vec<Node>,
    /// Initial states shown unsatisfiable; independent of context since
    /// loop links only ever count as open.
    unsat: HashSet<State>,
}

impl Search {
    fn sat(&mut self, init: State, path: &mut Vec<(State, usize)>) -> Option<usize> {
        if self.unsat.contains(&init) {
            return None;
        }
        if self.logic == Logic::S4 {
            if let Some(&(_, id)) = path.iter().find(|(s, _)| *s == init) {
                return Some(id);
            }
        }
        for branch in saturate(self.logic, &init) {
            let mark = self.nodes.len();
            self.nodes.push(Node {
                state: branch.clone(),
                edges: Vec::new(),
            });
            path.push((init.clone(), mark));
            let mut open = true;
            for s in &branch {
                if let (false, Formula::Know(i, a)) = (s.pos, &s.f) {
                    let child = successor(self.logic, &branch, *i, a);
                    match self.sat(child, path) {
                        Some(c) => self.nodes[mark].edges.push((*i, c)),
                        None => {
                            open = false;
                            break;
                        }
                    }
                }
            }
            path.pop();
            if open {
                return Some(mark);
            }
            self.nodes.truncate(mark);
        }
        self.unsat.insert(init);
        None
    }

    fn model(&self, f: &Formula) -> Model {
        let mut frame = Frame::new(self.nodes.len());
        for i in f.agents() {
            frame.rel.insert(i, BTreeSet::new());
        }
        for (w, node) in self.nodes.iter().enumerate() {
            for &(i, v) in &node.edges {
                frame.rel.entry(i).or_default().insert((w, v));
            }
        }
        if self.logic == Logic::S4 {
            frame = refl_trans_closure(&frame);
        }
        let mut m = Model::new(frame);
        for v in f.vars() {
            let worlds = self
                .nodes
                .iter()
                .enumerate()
                .filter(|(_, n)| n.state.contains(&Signed::t(&Formula::Var(v.clone()))))
                .map(|(w, _)| w);
            m = m.with_true(&v, worlds);
        }
        m
    }
}

pub fn tableau_sat(logic: Logic, f: &Formula) -> Result<TableauResult, TableauError> {
    tableau_sat_with(logic, f, MAX_TABLEAU_SIZE)
}

pub fn tableau_sat_with(logic: Logic, f: &Formula, cap: usize) -> Result<TableauResult, TableauError> {
    let size = f.size();
    if size > cap {
        return Err(TableauError { size, cap });
    }
    let mut search = Search {
        logic,
        nodes: Vec::new(),
        unsat: HashSet::new(),
    };
    let root: State = [Signed::t(f)].into();
    Ok(match search.sat(root, &mut Vec::new()) {
        Some(world) => TableauResult::Sat(PointedModel {
            model: search.model(f),
            world,
        }),
        None => TableauResult::Unsat,
    })
}

pub fn decide_valid(logic: Logic, f: &Formula) -> Result<Validity, TableauError> {
    Ok(match tableau_sat(logic, &Formula::neg(f.clone()))? {
        TableauResult::Unsat => Validity::Valid,
        TableauResult::Sat(pm) => Validity::Countermodel(pm),
    })
}
