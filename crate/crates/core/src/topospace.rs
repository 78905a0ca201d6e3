//! Finite topological models with the interior reading of the box.
//!
//! Only the mono-modal language is interpreted here: `□` is `K0`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use thiserror::Error;

use crate::formula::{Agent, Formula};
use crate::kripke::{Frame, Model};

/// The agent whose modality is read as the interior operator.
pub const BOX_AGENT: Agent = Agent(0);

pub type PointSet = BTreeSet<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopoModel {
    pub points: usize,
    pub opens: BTreeSet<PointSet>,
    pub valuation: BTreeMap<Arc<str>, PointSet>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyViolation {
    #[error("the empty set is not open")]
    MissingEmpty,
    #[error("the whole space is not open")]
    MissingWhole,
    #[error("open set mentions point {0} outside the space")]
    PointOutOfRange(usize),
    #[error("union of {} and {} is not open", show(.0), show(.1))]
    NotClosedUnderUnion(PointSet, PointSet),
    #[error("intersection of {} and {} is not open", show(.0), show(.1))]
    NotClosedUnderIntersection(PointSet, PointSet),
}

fn show(s: &PointSet) -> String {
    let items: Vec<String> = s.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopoError {
    #[error("not a topology: {0}")]
    NotTopology(#[from] TopologyViolation),
    #[error("formula uses agent {0}; topological models interpret only K0")]
    ForeignAgent(Agent),
    #[error("point {point} out of range (space has {points} points)")]
    PointOutOfRange { point: usize, points: usize },
}

/// Checks that `opens` contains ∅ and the whole space and is closed under
/// pairwise unions and intersections. Reports the first violation.
pub fn check_topology(points: usize, opens: &BTreeSet<PointSet>) -> Result<(), TopologyViolation> {
    if let Some(p) = opens.iter().flatten().find(|&&p| p >= points) {
        return Err(TopologyViolation::PointOutOfRange(*p));
    }
    if !opens.contains(&PointSet::new()) {
        return Err(TopologyViolation::MissingEmpty);
    }
    if !opens.contains(&(0..points).collect()) {
        return Err(TopologyViolation::MissingWhole);
    }
    for a in opens {
        for b in opens {
            if !opens.contains(&(a | b)) {
                return Err(TopologyViolation::NotClosedUnderUnion(a.clone(), b.clone()));
            }
            if !opens.contains(&(a & b)) {
                return Err(TopologyViolation::NotClosedUnderIntersection(a.clone(), b.clone()));
            }
        }
    }
    Ok(())
}

pub fn is_topology(points: usize, opens: &BTreeSet<PointSet>) -> bool {
    check_topology(points, opens).is_ok()
}

impl TopoModel {
    pub fn new(points: usize, opens: impl IntoIterator<Item = PointSet>) -> Result<TopoModel, TopologyViolation> {
        let opens: BTreeSet<PointSet> = opens.into_iter().collect();
        check_topology(points, &opens)?;
        Ok(TopoModel {
            points,
            opens,
            valuation: BTreeMap::new(),
        })
    }

    pub fn with_true(mut self, var: &str, points: impl IntoIterator<Item = usize>) -> TopoModel {
        let set = self.valuation.entry(Arc::from(var)).or_default();
        set.extend(points.into_iter().inspect(|&p| assert!(p < self.points)));
        self
    }

    /// Union of the opens contained in `set`.
    pub fn interior(&self, set: &PointSet) -> PointSet {
        self.opens
            .iter()
            .filter(|u| u.is_subset(set))
            .flatten()
            .copied()
            .collect()
    }

    /// Intersection of all opens containing `w`; open because the space is finite.
    pub fn min_open(&self, w: usize) -> PointSet {
        self.opens
            .iter()
            .filter(|u| u.contains(&w))
            .fold((0..self.points).collect(), |acc: PointSet, u| &acc & u)
    }

    fn truth_set(&self, f: &Formula) -> PointSet {
        let all = || (0..self.points).collect::<PointSet>();
        match f {
            Formula::Bottom => PointSet::new(),
            Formula::Var(v) => self.valuation.get(v).cloned().unwrap_or_default(),
            Formula::Or(a, b) => &self.truth_set(a) | &self.truth_set(b),
            Formula::And(a, b) => &self.truth_set(a) & &self.truth_set(b),
            Formula::Imp(a, b) => &(&all() - &self.truth_set(a)) | &self.truth_set(b),
            Formula::Know(_, a) => self.interior(&self.truth_set(a)),
        }
    }
}

/// `□φ` holds at `w` iff some open set around `w` lies inside `φ`'s extension.
pub fn topo_eval(t: &TopoModel, w: usize, f: &Formula) -> Result<bool, TopoError> {
    if let Some(&i) = f.agents().iter().find(|&&i| i != BOX_AGENT) {
        return Err(TopoError::ForeignAgent(i));
    }
    if w >= t.points {
        return Err(TopoError::PointOutOfRange {
            point: w,
            points: t.points,
        });
    }
    Ok(t.truth_set(f).contains(&w))
}

/// The Kripke model whose agent-0 relation sends each point to everything
/// in its minimal open neighbourhood.
pub fn specialization_frame(t: &TopoModel) -> Result<Model, TopoError> {
    check_topology(t.points, &t.opens)?;
    let mut frame = Frame::new(t.points);
    let rel = (0..t.points).flat_map(|w| t.min_open(w).into_iter().map(move |v| (w, v)));
    frame.rel.insert(BOX_AGENT, rel.collect());
    Ok(Model {
        frame,
        valuation: t.valuation.clone(),
    })
}

/// Every topology on `n ≤ 4` points, as families of open sets, in ascending
/// bit-mask order of the family.
pub fn enumerate_topologies(n: usize) -> Vec<BTreeSet<PointSet>> {
    assert!((1..=4).contains(&n), "topology enumeration supports 1..=4 points");
    let subsets = 1usize << n;
    let full = subsets - 1;
    // Candidate families always contain ∅ (subset 0) and the whole space.
    let middle: Vec<usize> = (1..full).collect();
    let mut out = Vec::new();
    for choice in 0u32..1 << middle.len() {
        let mut family = vec![0usize, full];
        family.extend(middle.iter().enumerate().filter(|(k, _)| choice >> k & 1 == 1).map(|(_, &s)| s));
        let contains = |s: usize| family.contains(&s);
        let closed = family
            .iter()
            .all(|&a| family.iter().all(|&b| contains(a | b) && contains(a & b)));
        if closed {
            out.push(
                family
                    .iter()
                    .map(|&s| (0..n).filter(|p| s >> p & 1 == 1).collect())
                    .collect(),
            );
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Topo files

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopoFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    NotTopology(#[from] TopologyViolation),
}

/// Parses `points N`, `open: a b ...` and `val p: a b ...` lines, then
/// checks the topology axioms.
pub fn parse_topo_model(text: &str) -> Result<TopoModel, TopoFileError> {
    let syntax = |line: usize, message: String| TopoFileError::Syntax { line, message };
    let mut points: Option<usize> = None;
    let mut opens = BTreeSet::new();
    let mut valuation = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let parse_set = |s: &str, n: usize| -> Result<PointSet, TopoFileError> {
            s.split_whitespace()
                .map(|tok| match tok.parse::<usize>() {
                    Ok(p) if p < n => Ok(p),
                    Ok(p) => Err(syntax(line, format!("point {p} out of range"))),
                    Err(_) => Err(syntax(line, format!("expected a point, found `{tok}`"))),
                })
                .collect()
        };
        if let Some(rest) = content.strip_prefix("points") {
            if points.is_some() {
                return Err(syntax(line, "duplicate `points` line".into()));
            }
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| syntax(line, format!("bad point count `{}`", rest.trim())))?;
            if n == 0 {
                return Err(syntax(line, "a space needs at least one point".into()));
            }
            points = Some(n);
            continue;
        }
        let n = points.ok_or_else(|| syntax(line, "`points N` must come first".into()))?;
        if let Some(rest) = content.strip_prefix("open:") {
            opens.insert(parse_set(rest, n)?);
        } else if let Some(rest) = content.strip_prefix("val") {
            let (name, set) = rest
                .split_once(':')
                .ok_or_else(|| syntax(line, "expected `val NAME: ...`".into()))?;
            valuation.insert(Arc::from(name.trim()), parse_set(set, n)?);
        } else {
            return Err(syntax(line, format!("unknown directive `{content}`")));
        }
    }
    let points = points.ok_or_else(|| syntax(1, "missing `points N` line".into()))?;
    check_topology(points, &opens)?;
    Ok(TopoModel {
        points,
        opens,
        valuation,
    })
}

pub fn print_topo_model(t: &TopoModel) -> String {
    let mut out = String::new();
    writeln!(out, "points {}", t.points).unwrap();
    for u in &t.opens {
        out.push_str("open:");
        for p in u {
            write!(out, " {p}").unwrap();
        }
        out.push('\n');
    }
    for (name, set) in &t.valuation {
        write!(out, "val {name}:").unwrap();
        for p in set {
            write!(out, " {p}").unwrap();
        }
        out.push('\n');
    }
    out
}

impl fmt::Display for TopoModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_topo_model(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::kripke::{class_check, eval, FrameClass};

    fn set(items: &[usize]) -> PointSet {
        items.iter().copied().collect()
    }

    fn sierpinski() -> TopoModel {
        TopoModel::new(2, [set(&[]), set(&[1]), set(&[0, 1])]).unwrap()
    }

    #[test]
    fn topology_examples() {
        assert!(is_topology(2, &[set(&[]), set(&[0, 1])].into()));
        assert_eq!(
            check_topology(2, &[set(&[]), set(&[0]), set(&[1])].into()),
            Err(TopologyViolation::MissingWhole)
        );
        assert_eq!(
            check_topology(2, &[set(&[]), set(&[0]), set(&[1]), set(&[0, 1])].into()),
            Ok(())
        );
        assert!(matches!(
            check_topology(3, &[set(&[]), set(&[0]), set(&[1]), set(&[0, 1, 2])].into()),
            Err(TopologyViolation::NotClosedUnderUnion(..))
        ));
        assert!(matches!(
            check_topology(3, &[set(&[]), set(&[0, 1]), set(&[1, 2]), set(&[0, 1, 2])].into()),
            Err(TopologyViolation::NotClosedUnderIntersection(..))
        ));
        assert!(is_topology(2, &sierpinski().opens));
    }

    #[test]
    fn interior_semantics() {
        let t = sierpinski().with_true("p", [1]);
        let bp = parse("K0 p").unwrap();
        assert!(topo_eval(&t, 1, &bp).unwrap());
        assert!(!topo_eval(&t, 0, &bp).unwrap());
        assert!(!topo_eval(&t, 0, &Formula::Bottom).unwrap());
        let all = sierpinski().with_true("p", [0, 1]);
        assert!((0..2).all(|w| topo_eval(&all, w, &bp).unwrap()));
        assert_eq!(
            topo_eval(&t, 0, &parse("K1 p").unwrap()),
            Err(TopoError::ForeignAgent(Agent(1)))
        );
        assert!(matches!(topo_eval(&t, 2, &bp), Err(TopoError::PointOutOfRange { .. })));
    }

    #[test]
    fn specialization_examples() {
        let m = specialization_frame(&sierpinski()).unwrap();
        assert_eq!(m.frame.relation(BOX_AGENT), [(0, 0), (0, 1), (1, 1)].into());
        let discrete = TopoModel::new(2, [set(&[]), set(&[0]), set(&[1]), set(&[0, 1])]).unwrap();
        assert_eq!(
            specialization_frame(&discrete).unwrap().frame.relation(BOX_AGENT),
            [(0, 0), (1, 1)].into()
        );
        let indiscrete = TopoModel::new(2, [set(&[]), set(&[0, 1])]).unwrap();
        assert_eq!(
            specialization_frame(&indiscrete).unwrap().frame.relation(BOX_AGENT),
            [(0, 0), (0, 1), (1, 0), (1, 1)].into()
        );
    }

    #[test]
    fn topology_counts() {
        // Labeled topologies on n points: 1, 4, 29, 355.
        let counts: Vec<usize> = (1..=4).map(|n| enumerate_topologies(n).len()).collect();
        assert_eq!(counts, [1, 4, 29, 355]);
    }

    #[test]
    fn specialization_is_preorder_and_agrees() {
        let f = parse("K0 (p -> K0 p) -> (~K0 ~p | K0 ~p)").unwrap();
        for opens in enumerate_topologies(3) {
            let t = TopoModel::new(3, opens).unwrap().with_true("p", [0, 2]);
            let m = specialization_frame(&t).unwrap();
            assert!(class_check(&m.frame, BOX_AGENT, FrameClass::Preorder));
            for w in 0..3 {
                assert_eq!(topo_eval(&t, w, &f).unwrap(), eval(&m, w, &f).unwrap());
            }
        }
    }

    #[test]
    fn file_round_trip_and_rejection() {
        let t = sierpinski().with_true("p", [1]);
        let text = print_topo_model(&t);
        assert_eq!(text, "points 2\nopen:\nopen: 0 1\nopen: 1\nval p: 1\n");
        assert_eq!(parse_topo_model(&text).unwrap(), t);
        let bad = "points 2\nopen:\nopen: 0\nopen: 1\n";
        assert_eq!(
            parse_topo_model(bad),
            Err(TopoFileError::NotTopology(TopologyViolation::MissingWhole))
        );
        assert!(matches!(
            parse_topo_model("points 2\nopen: 5\n"),
            Err(TopoFileError::Syntax { line: 2, .. })
        ));
    }
}
