//! Line-based model files.
//!
//! ```text
//! # comment
//! worlds 3
//! agent 1: (0,0) (1,1) (2,2) (0,1) (0,2)
//! val p: 1
//! world 0
//! ```
//!
//! `world N` is only meaningful for pointed models. Blank lines and text
//! after `#` are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Frame, Model, PointedModel, World};
use crate::formula::Agent;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ModelFileError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ModelFileError {
    ModelFileError {
        line,
        message: message.into(),
    }
}

fn parse_world(tok: &str, line: usize, worlds: usize) -> Result<World, ModelFileError> {
    let w: World = tok
        .trim()
        .parse()
        .map_err(|_| err(line, format!("expected a world number, found `{tok}`")))?;
    if w >= worlds {
        return Err(err(line, format!("world {w} out of range (worlds {worlds})")));
    }
    Ok(w)
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        && s != "true"
        && s != "false"
}

/// Parses a model file, returning the model and the optional designated world.
fn parse_any(text: &str) -> Result<(Model, Option<World>), ModelFileError> {
    let mut model: Option<Model> = None;
    let mut point = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        if keyword == "worlds" {
            if model.is_some() {
                return Err(err(line, "duplicate `worlds` line"));
            }
            let n: usize = rest
                .parse()
                .map_err(|_| err(line, format!("expected a world count, found `{rest}`")))?;
            if n == 0 {
                return Err(err(line, "a model needs at least one world"));
            }
            model = Some(Model::new(Frame::new(n)));
            continue;
        }
        let m = model
            .as_mut()
            .ok_or_else(|| err(line, "`worlds N` must come first"))?;
        let n = m.frame.worlds;
        match keyword {
            "agent" => {
                let (label, pairs) = rest
                    .split_once(':')
                    .ok_or_else(|| err(line, "expected `agent I: (a,b) ...`"))?;
                let agent = Agent(
                    label
                        .trim()
                        .parse()
                        .map_err(|_| err(line, format!("bad agent label `{}`", label.trim())))?,
                );
                if m.frame.rel.contains_key(&agent) {
                    return Err(err(line, format!("duplicate agent {agent}")));
                }
                let rel = m.frame.rel.entry(agent).or_default();
                let mut rest = pairs.trim();
                while !rest.is_empty() {
                    let body = rest
                        .strip_prefix('(')
                        .ok_or_else(|| err(line, format!("expected `(` at `{rest}`")))?;
                    let (inner, tail) = body
                        .split_once(')')
                        .ok_or_else(|| err(line, "unclosed pair"))?;
                    let (a, b) = inner
                        .split_once(',')
                        .ok_or_else(|| err(line, format!("expected `a,b` in `({inner})`")))?;
                    rel.insert((parse_world(a, line, n)?, parse_world(b, line, n)?));
                    rest = tail.trim_start();
                }
            }
            "val" => {
                let (name, worlds) = rest
                    .split_once(':')
                    .ok_or_else(|| err(line, "expected `val NAME: w1 w2 ...`"))?;
                let name = name.trim();
                if !is_ident(name) {
                    return Err(err(line, format!("bad variable name `{name}`")));
                }
                if m.valuation.contains_key(name) {
                    return Err(err(line, format!("duplicate variable `{name}`")));
                }
                let mut set = std::collections::BTreeSet::new();
                for tok in worlds.split_whitespace() {
                    set.insert(parse_world(tok, line, n)?);
                }
                m.valuation.insert(name.into(), set);
            }
            "world" => {
                if point.is_some() {
                    return Err(err(line, "duplicate `world` line"));
                }
                point = Some(parse_world(rest, line, n)?);
            }
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }
    let model = model.ok_or_else(|| err(text.lines().count().max(1), "missing `worlds N` line"))?;
    Ok((model, point))
}

/// Parses a model file; a `world` line, if present, is ignored.
pub fn parse_model(text: &str) -> Result<Model, ModelFileError> {
    parse_any(text).map(|(m, _)| m)
}

/// Parses a model file that must designate a world.
pub fn parse_pointed_model(text: &str) -> Result<PointedModel, ModelFileError> {
    let (model, world) = parse_any(text)?;
    let world = world.ok_or_else(|| err(text.lines().count().max(1), "missing `world N` line"))?;
    Ok(PointedModel { model, world })
}

pub fn print_model(m: &Model) -> String {
    let mut out = String::new();
    writeln!(out, "worlds {}", m.frame.worlds).unwrap();
    for (agent, rel) in &m.frame.rel {
        write!(out, "agent {agent}:").unwrap();
        for (a, b) in rel {
            write!(out, " ({a},{b})").unwrap();
        }
        out.push('\n');
    }
    for (name, set) in &m.valuation {
        write!(out, "val {name}:").unwrap();
        for w in set {
            write!(out, " {w}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn print_pointed_model(pm: &PointedModel) -> String {
    let mut out = print_model(&pm.model);
    writeln!(out, "world {}", pm.world).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::super::tests::fork_model;
    use super::*;

    #[test]
    fn round_trip() {
        let pm = PointedModel {
            model: fork_model(),
            world: 0,
        };
        let text = print_pointed_model(&pm);
        assert_eq!(
            text,
            "worlds 3\nagent 1: (0,0) (0,1) (0,2) (1,1) (2,2)\nval p: 1\nworld 0\n"
        );
        assert_eq!(parse_pointed_model(&text).unwrap(), pm);
        assert_eq!(parse_model(&text).unwrap(), pm.model);
    }

    #[test]
    fn comments_and_spacing() {
        let text = "# fork\n\nworlds 2   # two\nagent 3:(0,1)   ( 1 , 1 )\nval q:\n";
        let m = parse_model(text).unwrap();
        assert_eq!(m.frame.relation(Agent(3)), [(0, 1), (1, 1)].into());
        assert!(m.valuation["q"].is_empty());
    }

    #[test]
    fn errors_name_the_line() {
        let cases = [
            ("agent 1: (0,0)\n", 1),
            ("worlds 2\nagent 1: (0,2)\n", 2),
            ("worlds 2\nval P: 0\n", 2),
            ("worlds 2\nfoo\n", 2),
            ("worlds 2\nagent 1: (0,1\n", 2),
            ("worlds 2\nagent 1:\nagent 1:\n", 3),
        ];
        for (text, line) in cases {
            let e = parse_model(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
        }
        assert!(parse_pointed_model("worlds 1\n").is_err());
    }
}
