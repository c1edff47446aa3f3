//! Predicate-argument terms and their recursive-descent parser.
//!
//! ```text
//! term   := ident [ "(" term { "," term } ")" ] | number | vector
//! vector := "<" number "," number "," number ">"
//! ident  := [A-Za-z_][A-Za-z0-9_]*
//! ```

use std::cmp::Ordering;
use std::fmt;

use super::{fmt_real, ParseError};
use crate::spatial::Vec3;

#[derive(Debug, Clone)]
pub enum Atom {
    Symbol(String),
    Number(f64),
    Vector(Vec3),
}

#[derive(Debug, Clone)]
pub enum Term {
    Atom(Atom),
    Apply { pred: String, args: Vec<Term> },
}

impl Atom {
    fn rank(&self) -> u8 {
        match self {
            Atom::Symbol(_) => 0,
            Atom::Number(_) => 1,
            Atom::Vector(_) => 2,
        }
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Atom::Symbol(a), Atom::Symbol(b)) => a.cmp(b),
            (Atom::Number(a), Atom::Number(b)) => a.total_cmp(b),
            (Atom::Vector(a), Atom::Vector(b)) => {
                a.x.total_cmp(&b.x)
                    .then(a.y.total_cmp(&b.y))
                    .then(a.z.total_cmp(&b.z))
            }
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Atom {}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Term::Atom(a), Term::Atom(b)) => a.cmp(b),
            (Term::Atom(_), Term::Apply { .. }) => Ordering::Less,
            (Term::Apply { .. }, Term::Atom(_)) => Ordering::Greater,
            (Term::Apply { pred: p, args: a }, Term::Apply { pred: q, args: b }) => {
                p.cmp(q).then_with(|| a.cmp(b))
            }
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Term {}

impl Term {
    pub fn sym(s: impl Into<String>) -> Term {
        Term::Atom(Atom::Symbol(s.into()))
    }

    pub fn number(x: f64) -> Term {
        Term::Atom(Atom::Number(x))
    }

    pub fn vector(v: Vec3) -> Term {
        Term::Atom(Atom::Vector(v))
    }

    pub fn apply(pred: impl Into<String>, args: Vec<Term>) -> Term {
        Term::Apply {
            pred: pred.into(),
            args,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            Term::Atom(Atom::Symbol(s)) => Some(s),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<Vec3> {
        match self {
            Term::Atom(Atom::Vector(v)) => Some(*v),
            _ => None,
        }
    }

    /// The predicate of an application, or `None` for atoms.
    pub fn pred(&self) -> Option<&str> {
        match self {
            Term::Apply { pred, .. } => Some(pred),
            Term::Atom(_) => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Apply { args, .. } => args,
            Term::Atom(_) => &[],
        }
    }

    /// Symbol atoms at the leaves, left to right.
    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let Some(s) = t.as_symbol() {
                out.push(s);
            }
        });
        out.into_iter()
    }

    /// Predicates of every application, outermost first.
    pub fn preds(&self) -> impl Iterator<Item = &str> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let Some(p) = t.pred() {
                out.push(p);
            }
        });
        out.into_iter()
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        for a in self.args() {
            a.walk(f);
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.args().iter().map(Term::depth).max().unwrap_or(0)
    }

    /// Replaces symbol leaves through `f`; other leaves are kept.
    pub fn map_symbols(&self, f: &impl Fn(&str) -> Term) -> Term {
        match self {
            Term::Atom(Atom::Symbol(s)) => f(s),
            Term::Atom(_) => self.clone(),
            Term::Apply { pred, args } => Term::Apply {
                pred: pred.clone(),
                args: args.iter().map(|a| a.map_symbols(f)).collect(),
            },
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Symbol(s) => f.write_str(s),
            Atom::Number(x) => f.write_str(&fmt_real(*x)),
            Atom::Vector(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atom(a) => write!(f, "{a}"),
            Term::Apply { pred, args } => {
                write!(f, "{pred}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a logical form such as `put(apple, on(plate))`.
pub fn parse_logical_form(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty logical form"));
    }
    let term = p.term(0)?;
    p.skip_ws();
    match p.peek() {
        None => Ok(term),
        Some(')') => Err(p.error("unbalanced parenthesis: unexpected `)`")),
        Some(c) => Err(p.error(format!("trailing input starting at `{c}`"))),
    }
}

// Bounds recursion on adversarial input.
const MAX_DEPTH: usize = 256;

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::syntax(1, self.pos + 1, msg)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn term(&mut self, depth: usize) -> Result<Term, ParseError> {
        if depth > MAX_DEPTH {
            return Err(self.error("term nested too deeply"));
        }
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("unbalanced parenthesis: input ended inside a term")),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.application(depth),
            Some(c) if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                Ok(Term::number(self.number()?))
            }
            Some('<') => self.vector(),
            Some(',') | Some(')') => Err(self.error("empty argument")),
            Some(c) => Err(self.error(format!("unexpected character `{c}`"))),
        }
    }

    fn application(&mut self, depth: usize) -> Result<Term, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        if !self.eat('(') {
            return Ok(Term::sym(name));
        }
        let mut args = Vec::new();
        loop {
            args.push(self.term(depth + 1)?);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    return Ok(Term::apply(name, args));
                }
                None => {
                    return Err(self.error(format!(
                        "unbalanced parenthesis: `{name}(` opened at column {} is never closed",
                        start + 1
                    )))
                }
                Some(c) => return Err(self.error(format!("expected `,` or `)`, found `{c}`"))),
            }
        }
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('-' | '+')) {
            self.pos += 1;
        }
        while let Some(c) = self.peek() {
            let exp_sign =
                matches!(c, '-' | '+') && matches!(self.chars.get(self.pos - 1), Some('e' | 'E'));
            if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || exp_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        match text.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => {
                self.pos = start;
                Err(self.error(format!("malformed number `{text}`")))
            }
        }
    }

    fn vector(&mut self) -> Result<Term, ParseError> {
        self.pos += 1; // '<'
        let x = self.number()?;
        if !self.eat(',') {
            return Err(self.error("expected `,` in vector literal"));
        }
        let y = self.number()?;
        if !self.eat(',') {
            return Err(self.error("expected `,` in vector literal"));
        }
        let z = self.number()?;
        if !self.eat('>') {
            return Err(self.error("expected `>` closing vector literal"));
        }
        Ok(Term::vector(Vec3::new(x, y, z)))
    }
}
