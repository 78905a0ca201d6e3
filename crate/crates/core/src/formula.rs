//! Formula syntax for the multi-agent knowledge language.
//!
//! The stored AST only has the primitive connectives `⊥`, variables, `∨`,
//! `∧`, `→` and `K_i`. Negation, `⊤`, the dual `L_i` and belief `B_i` are
//! constructed on the fly and never appear as nodes.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// An agent label. Labels are decimal naturals in the concrete syntax.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Agent(pub u32);

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Bottom,
    Var(Arc<str>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Know(Agent, Box<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(Arc::from(name))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn imp(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Imp(Box::new(lhs), Box::new(rhs))
    }

    pub fn know(agent: Agent, body: Formula) -> Formula {
        Formula::Know(agent, Box::new(body))
    }

    /// `¬φ`, i.e. `φ → ⊥`.
    pub fn neg(body: Formula) -> Formula {
        Formula::imp(body, Formula::Bottom)
    }

    /// `⊤`, i.e. `⊥ → ⊥`.
    pub fn top() -> Formula {
        Formula::imp(Formula::Bottom, Formula::Bottom)
    }

    /// `L_i φ`, i.e. `¬K_i¬φ`.
    pub fn poss(agent: Agent, body: Formula) -> Formula {
        Formula::neg(Formula::know(agent, Formula::neg(body)))
    }

    /// `B_i φ`, i.e. `¬K_i¬K_i φ`.
    pub fn bel(agent: Agent, body: Formula) -> Formula {
        Formula::poss(agent, Formula::know(agent, body))
    }

    /// Biconditional encoded as a conjunction of two implications.
    pub fn iff(lhs: Formula, rhs: Formula) -> Formula {
        Formula::and(
            Formula::imp(lhs.clone(), rhs.clone()),
            Formula::imp(rhs, lhs),
        )
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Formula::Bottom)
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::Imp(a, b) if a.is_bottom() && b.is_bottom())
    }

    /// The body `x` when this formula is `x → ⊥`.
    pub fn negated(&self) -> Option<&Formula> {
        match self {
            Formula::Imp(a, b) if b.is_bottom() => Some(a),
            _ => None,
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Bottom | Formula::Var(_) => 1,
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Know(_, a) => 1 + a.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Bottom | Formula::Var(_) => 0,
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Imp(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Know(_, a) => 1 + a.depth(),
        }
    }

    /// Variable names in order of first occurrence.
    pub fn vars(&self) -> Vec<Arc<str>> {
        fn go(f: &Formula, out: &mut Vec<Arc<str>>) {
            match f {
                Formula::Bottom => {}
                Formula::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                Formula::Or(a, b) | Formula::And(a, b) | Formula::Imp(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Formula::Know(_, a) => go(a, out),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Agents occurring in the formula, sorted ascending.
    pub fn agents(&self) -> Vec<Agent> {
        fn go(f: &Formula, out: &mut Vec<Agent>) {
            match f {
                Formula::Bottom | Formula::Var(_) => {}
                Formula::Or(a, b) | Formula::And(a, b) | Formula::Imp(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Formula::Know(i, a) => {
                    out.push(*i);
                    go(a, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

/// `ψ1 → (ψ2 → … (ψk → goal))`.
pub fn imply(premises: &[Formula], goal: Formula) -> Formula {
    premises
        .iter()
        .rev()
        .fold(goal, |acc, p| Formula::imp(p.clone(), acc))
}

/// `ψ1 ∧ (ψ2 ∧ … (ψk ∧ ⊤))`; the empty list gives `⊤`.
pub fn conjunct(formulas: &[Formula]) -> Formula {
    formulas
        .iter()
        .rev()
        .fold(Formula::top(), |acc, p| Formula::and(p.clone(), acc))
}

/// All subformulas in post-order, first occurrence wins.
pub fn subformula_closure(f: &Formula) -> Vec<Formula> {
    closure_of_set(std::slice::from_ref(f))
}

/// Subformula closure of a list of formulas, in post-order of each in turn.
pub fn closure_of_set(fs: &[Formula]) -> Vec<Formula> {
    fn go(f: &Formula, seen: &mut HashSet<Formula>, out: &mut Vec<Formula>) {
        if seen.contains(f) {
            return;
        }
        match f {
            Formula::Bottom | Formula::Var(_) => {}
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Imp(a, b) => {
                go(a, seen, out);
                go(b, seen, out);
            }
            Formula::Know(_, a) => go(a, seen, out),
        }
        if seen.insert(f.clone()) {
            out.push(f.clone());
        }
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for f in fs {
        go(f, &mut seen, &mut out);
    }
    out
}

// ---------------------------------------------------------------------------
// Axiom schemas

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemaName {
    /// `(K_i(φ → ψ) ∧ K_i φ) → K_i ψ`
    AxK,
    /// `K_i φ → φ`
    AxT,
    /// `K_i φ → K_i K_i φ`
    Ax4,
    /// `¬K_i¬K_i φ → K_i¬K_i¬φ`
    Ax2,
    /// `K_i ⊤`
    AxN,
    /// `K_i(φ ∧ ψ) ↔ (K_i φ ∧ K_i ψ)`
    AxR,
}

impl SchemaName {
    pub const ALL: [SchemaName; 6] = [
        SchemaName::AxK,
        SchemaName::AxT,
        SchemaName::Ax4,
        SchemaName::Ax2,
        SchemaName::AxN,
        SchemaName::AxR,
    ];

    /// Number of formula metavariables.
    pub fn arity(self) -> usize {
        match self {
            SchemaName::AxN => 0,
            SchemaName::AxT | SchemaName::Ax4 | SchemaName::Ax2 => 1,
            SchemaName::AxK | SchemaName::AxR => 2,
        }
    }

    /// Certificate keyword (`AXK`, `AX2`, ...).
    pub fn keyword(self) -> &'static str {
        match self {
            SchemaName::AxK => "AXK",
            SchemaName::AxT => "AXT",
            SchemaName::Ax4 => "AX4",
            SchemaName::Ax2 => "AX2",
            SchemaName::AxN => "AXN",
            SchemaName::AxR => "AXR",
        }
    }

    fn template(self) -> Pattern {
        use Pattern::*;
        let phi = || Meta(0);
        let psi = || Meta(1);
        let k = |p: Pattern| Know(Box::new(p));
        let imp = |a: Pattern, b: Pattern| Imp(Box::new(a), Box::new(b));
        let and = |a: Pattern, b: Pattern| And(Box::new(a), Box::new(b));
        let neg = |a: Pattern| imp(a, Bottom);
        match self {
            SchemaName::AxK => imp(and(k(imp(phi(), psi())), k(phi())), k(psi())),
            SchemaName::AxT => imp(k(phi()), phi()),
            SchemaName::Ax4 => imp(k(phi()), k(k(phi()))),
            SchemaName::Ax2 => imp(neg(k(neg(k(phi())))), k(neg(k(neg(phi()))))),
            SchemaName::AxN => k(imp(Bottom, Bottom)),
            SchemaName::AxR => {
                let lhs = k(and(phi(), psi()));
                let rhs = and(k(phi()), k(psi()));
                and(imp(lhs.clone(), rhs.clone()), imp(rhs, lhs))
            }
        }
    }

    /// Tries to read `f` as an instance of this schema, returning the agent
    /// and the metavariable assignment.
    pub fn matches(self, f: &Formula) -> Option<SchemaMatch> {
        let mut m = SchemaMatch {
            agent: None,
            args: [None, None],
        };
        if self.template().bind(f, &mut m) {
            Some(m)
        } else {
            None
        }
    }
}

impl fmt::Display for SchemaName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Bindings produced by [`SchemaName::matches`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaMatch {
    pub agent: Option<Agent>,
    pub args: [Option<Formula>; 2],
}

/// Schema templates: formulas with one agent metavariable and up to two
/// formula metavariables.
#[derive(Clone, Debug)]
enum Pattern {
    Bottom,
    Meta(usize),
    And(Box<Pattern>, Box<Pattern>),
    Imp(Box<Pattern>, Box<Pattern>),
    Know(Box<Pattern>),
}

impl Pattern {
    fn bind(&self, f: &Formula, m: &mut SchemaMatch) -> bool {
        match (self, f) {
            (Pattern::Bottom, Formula::Bottom) => true,
            (Pattern::Meta(k), _) => match &m.args[*k] {
                Some(bound) => bound == f,
                None => {
                    m.args[*k] = Some(f.clone());
                    true
                }
            },
            (Pattern::And(pa, pb), Formula::And(a, b)) | (Pattern::Imp(pa, pb), Formula::Imp(a, b)) => {
                pa.bind(a, m) && pb.bind(b, m)
            }
            (Pattern::Know(pa), Formula::Know(i, a)) => {
                match m.agent {
                    Some(j) if j != *i => return false,
                    _ => m.agent = Some(*i),
                }
                pa.bind(a, m)
            }
            _ => false,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("schema {schema} takes {expected} formula argument(s), got {got}")]
pub struct ArityError {
    pub schema: SchemaName,
    pub expected: usize,
    pub got: usize,
}

/// Instantiates a schema at agent `i`. `psi` must be present exactly for the
/// binary schemas; `AxN` ignores `phi`.
pub fn instantiate_schema(
    name: SchemaName,
    i: Agent,
    phi: &Formula,
    psi: Option<&Formula>,
) -> Result<Formula, ArityError> {
    let binary = name.arity() == 2;
    if binary != psi.is_some() {
        return Err(ArityError {
            schema: name,
            expected: name.arity(),
            got: 1 + psi.is_some() as usize,
        });
    }
    let k = |f: Formula| Formula::know(i, f);
    Ok(match name {
        SchemaName::AxK => {
            let psi = psi.unwrap().clone();
            Formula::imp(
                Formula::and(k(Formula::imp(phi.clone(), psi.clone())), k(phi.clone())),
                k(psi),
            )
        }
        SchemaName::AxT => Formula::imp(k(phi.clone()), phi.clone()),
        SchemaName::Ax4 => Formula::imp(k(phi.clone()), k(k(phi.clone()))),
        SchemaName::Ax2 => Formula::imp(
            Formula::neg(k(Formula::neg(k(phi.clone())))),
            k(Formula::neg(k(Formula::neg(phi.clone())))),
        ),
        SchemaName::AxN => k(Formula::top()),
        SchemaName::AxR => {
            let psi = psi.unwrap().clone();
            Formula::iff(
                k(Formula::and(phi.clone(), psi.clone())),
                Formula::and(k(phi.clone()), k(psi)),
            )
        }
    })
}

// ---------------------------------------------------------------------------
// Concrete syntax

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("expected {}", .0.join(" or "))]
    Expected(Vec<&'static str>),
    #[error("unknown keyword `{0}`")]
    UnknownKeyword(String),
    #[error("agent index missing after `{0}`")]
    MissingAgent(char),
    #[error("agent index out of range")]
    AgentOverflow,
    #[error("unexpected character `{0}`")]
    BadChar(char),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    Modal(char, Agent),
    True,
    False,
    Ident(String),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Returns the token and its starting offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let Some(&c) = bytes.get(start) else {
            return Ok((Tok::End, start));
        };
        let single = |t: Tok, lx: &mut Self| {
            lx.pos += 1;
            Ok((t, start))
        };
        match c {
            b'~' => single(Tok::Not, self),
            b'&' => single(Tok::And, self),
            b'|' => single(Tok::Or, self),
            b'(' => single(Tok::LParen, self),
            b')' => single(Tok::RParen, self),
            b'-' => {
                if bytes.get(start + 1) == Some(&b'>') {
                    self.pos += 2;
                    Ok((Tok::Arrow, start))
                } else {
                    Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::Expected(vec!["`->`"]),
                    })
                }
            }
            b'a'..=b'z' => {
                let end = self.word_end(start);
                let word = &self.src[start..end];
                self.pos = end;
                let tok = match word {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word.to_string()),
                };
                Ok((tok, start))
            }
            b'A'..=b'Z' => {
                let end = self.word_end(start);
                let word = &self.src[start..end];
                let op = word.as_bytes()[0] as char;
                let digits = &word[1..];
                if !matches!(op, 'K' | 'L' | 'B') {
                    return Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::UnknownKeyword(word.to_string()),
                    });
                }
                // Digits directly follow the modality letter; anything after
                // the digits starts a new token.
                let ndig = digits.bytes().take_while(u8::is_ascii_digit).count();
                if ndig == 0 {
                    if digits.is_empty() {
                        return Err(ParseError {
                            offset: start + 1,
                            kind: ParseErrorKind::MissingAgent(op),
                        });
                    }
                    return Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::UnknownKeyword(word.to_string()),
                    });
                }
                let n: u32 = digits[..ndig].parse().map_err(|_| ParseError {
                    offset: start + 1,
                    kind: ParseErrorKind::AgentOverflow,
                })?;
                self.pos = start + 1 + ndig;
                Ok((Tok::Modal(op, Agent(n)), start))
            }
            _ => {
                let ch = self.src[start..].chars().next().unwrap();
                Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::BadChar(ch),
                })
            }
        }
    }

    fn word_end(&self, start: usize) -> usize {
        let bytes = self.src.as_bytes();
        let mut end = start + 1;
        while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
            end += 1;
        }
        end
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), ParseError> {
        let (tok, at) = self.lexer.next()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn expected(&self, what: Vec<&'static str>) -> ParseError {
        ParseError {
            offset: self.at,
            kind: ParseErrorKind::Expected(what),
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.tok == Tok::Arrow {
            self.bump()?;
            let rhs = self.imp()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.tok == Tok::Or {
            self.bump()?;
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.tok == Tok::And {
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.tok.clone() {
            Tok::Not => {
                self.bump()?;
                Ok(Formula::neg(self.unary()?))
            }
            Tok::Modal(op, agent) => {
                self.bump()?;
                let body = self.unary()?;
                Ok(match op {
                    'K' => Formula::know(agent, body),
                    'L' => Formula::poss(agent, body),
                    _ => Formula::bel(agent, body),
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let f = match self.tok.clone() {
            Tok::False => Formula::Bottom,
            Tok::True => Formula::top(),
            Tok::Ident(name) => Formula::var(&name),
            Tok::LParen => {
                self.bump()?;
                let inner = self.imp()?;
                if self.tok != Tok::RParen {
                    return Err(self.expected(vec!["`)`", "`&`", "`|`", "`->`"]));
                }
                inner
            }
            _ => {
                return Err(self.expected(vec![
                    "`~`", "`K<n>`", "`L<n>`", "`B<n>`", "`false`", "`true`", "identifier", "`(`",
                ]))
            }
        };
        self.bump()?;
        Ok(f)
    }
}

/// Parses the ASCII concrete syntax.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        lexer: Lexer { src: text, pos: 0 },
        tok: Tok::End,
        at: 0,
    };
    p.bump()?;
    let f = p.imp()?;
    if p.tok != Tok::End {
        return Err(p.expected(vec!["end of input", "`&`", "`|`", "`->`"]));
    }
    Ok(f)
}

const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Imp(_, b) if b.is_bottom() => PREC_UNARY,
        Formula::Imp(..) => PREC_IMP,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        _ => PREC_UNARY,
    }
}

/// Prints a formula so that [`parse`] gives it back unchanged.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write_at(f, 0, &mut out);
    out
}

fn write_at(f: &Formula, min: u8, out: &mut String) {
    if prec(f) < min {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Bottom => out.push_str("false"),
        Formula::Var(v) => out.push_str(v),
        _ if f.is_top() => out.push_str("true"),
        Formula::Imp(a, b) if b.is_bottom() => {
            out.push('~');
            write_at(a, PREC_UNARY, out);
        }
        Formula::Imp(a, b) => {
            write_at(a, PREC_IMP + 1, out);
            out.push_str(" -> ");
            write_at(b, PREC_IMP, out);
        }
        Formula::Or(a, b) => {
            write_at(a, PREC_OR, out);
            out.push_str(" | ");
            write_at(b, PREC_OR + 1, out);
        }
        Formula::And(a, b) => {
            write_at(a, PREC_AND, out);
            out.push_str(" & ");
            write_at(b, PREC_AND + 1, out);
        }
        Formula::Know(i, a) => {
            out.push('K');
            out.push_str(&i.0.to_string());
            out.push(' ');
            write_at(a, PREC_UNARY, out);
        }
    }
}
