use std::sync::Arc;

use thiserror::Error;

use crate::formula::Formula;
use crate::kripke::sliced::{succ_table, Compiled};
use crate::kripke::{decode_frame_index, frame_from_masks, valuation_model, FrameClass, PointedModel, RelationSpace};
use crate::par::Exec;

/// Default world cap for [`bounded_countermodel`].
pub const MAX_SEARCH_WORLDS: usize = 5;
/// Variable cap for [`bounded_countermodel`].
pub const MAX_SEARCH_VARS: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    Countermodel(PointedModel),
    NoneUpTo(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("bound {bound} outside 1..={cap}")]
    Bound { bound: usize, cap: usize },
    #[error("{vars} variables exceed the cap of {cap}")]
    TooManyVars { vars: usize, cap: usize },
    #[error("{worlds}-world frame space for {agents} agents is too large to enumerate")]
    TooManyFrames { worlds: usize, agents: usize },
}

pub fn bounded_countermodel(cls: FrameClass, f: &Formula, max_worlds: usize) -> Result<SearchResult, SearchError> {
    bounded_countermodel_with(cls, f, max_worlds, Exec::default())
}

/// Exhaustive search over all frames of `cls` on `1..=max_worlds` worlds,
/// labeled by the agents of `f`, and all valuations of `f`'s variables.
/// The reported countermodel is the first in (worlds, frame index,
/// valuation index, world) order under either execution strategy.
pub fn bounded_countermodel_with(
    cls: FrameClass,
    f: &Formula,
    max_worlds: usize,
    exec: Exec,
) -> Result<SearchResult, SearchError> {
    if !(1..=MAX_SEARCH_WORLDS).contains(&max_worlds) {
        return Err(SearchError::Bound {
            bound: max_worlds,
            cap: MAX_SEARCH_WORLDS,
        });
    }
    let mut vars: Vec<Arc<str>> = f.vars();
    vars.sort();
    if vars.len() > MAX_SEARCH_VARS {
        return Err(SearchError::TooManyVars {
            vars: vars.len(),
            cap: MAX_SEARCH_VARS,
        });
    }
    let agents = f.agents();
    let compiled = Compiled::new(f, &vars, &agents);
    for n in 1..=max_worlds {
        let space = RelationSpace::new(n, cls);
        let total = (0..agents.len())
            .try_fold(1u64, |acc, _| acc.checked_mul(space.len()))
            .filter(|&t| t <= 1 << 40)
            .ok_or(SearchError::TooManyFrames {
                worlds: n,
                agents: agents.len(),
            })?;
        let hit = exec.find_map_first(0..total, |idx| {
            let rels: Vec<u32> = decode_frame_index(space.len(), agents.len(), idx)
                .into_iter()
                .map(|i| space.get(i))
                .collect();
            let succ = succ_table(n, &rels);
            let mut scratch = Vec::new();
            compiled
                .first_refutation(n, &succ, &mut scratch)
                .map(|(val, world)| (rels, val, world))
        });
        if let Some((rels, val, world)) = hit {
            let frame = frame_from_masks(n, &agents, &rels);
            return Ok(SearchResult::Countermodel(PointedModel {
                model: valuation_model(frame, &vars, val),
                world,
            }));
        }
    }
    Ok(SearchResult::NoneUpTo(max_worlds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{instantiate_schema, parse, Agent, SchemaName};
    use crate::kripke::tests::{chain_frame, fork_model};
    use crate::kripke::{eval, frame_in_class, Model};

    fn ax2() -> Formula {
        instantiate_schema(SchemaName::Ax2, Agent(1), &parse("p").unwrap(), None).unwrap()
    }

    #[test]
    fn fork_refutes_dot_two_on_preorders() {
        let r = bounded_countermodel(FrameClass::Preorder, &ax2(), 3).unwrap();
        assert_eq!(
            r,
            SearchResult::Countermodel(PointedModel {
                model: fork_model(),
                world: 0
            })
        );
    }

    #[test]
    fn dot_two_holds_on_small_wd_preorders() {
        assert_eq!(
            bounded_countermodel(FrameClass::WeaklyDirectedPreorder, &ax2(), 4).unwrap(),
            SearchResult::NoneUpTo(4)
        );
    }

    #[test]
    fn negative_introspection_fails_on_a_chain() {
        let r = bounded_countermodel(FrameClass::WeaklyDirectedPreorder, &parse("L1 p -> K1 L1 p").unwrap(), 2).unwrap();
        let expected = PointedModel {
            model: Model::new(chain_frame()).with_true("p", [0]),
            world: 0,
        };
        assert_eq!(r, SearchResult::Countermodel(expected));
    }

    #[test]
    fn strategies_agree_and_witnesses_refute() {
        for text in ["K1 p -> K2 p", "L1 K2 p -> K2 L1 p", "K1 (p | q) -> K1 p | K1 q", "p -> K1 L1 p"] {
            let g = parse(text).unwrap();
            for cls in [FrameClass::All, FrameClass::Preorder, FrameClass::Transitive] {
                let seq = bounded_countermodel_with(cls, &g, 3, Exec::Sequential).unwrap();
                let par = bounded_countermodel_with(cls, &g, 3, Exec::Parallel).unwrap();
                assert_eq!(seq, par, "{text} {cls}");
                if let SearchResult::Countermodel(pm) = seq {
                    assert!(!eval(&pm.model, pm.world, &g).unwrap());
                    assert!(frame_in_class(&pm.model.frame, cls));
                }
            }
        }
    }

    #[test]
    fn caps() {
        assert!(bounded_countermodel(FrameClass::All, &ax2(), 6).is_err());
        assert!(bounded_countermodel(FrameClass::All, &ax2(), 0).is_err());
        let g = parse("p & q & r & s").unwrap();
        assert_eq!(
            bounded_countermodel(FrameClass::All, &g, 1),
            Err(SearchError::TooManyVars { vars: 4, cap: 3 })
        );
    }
}
