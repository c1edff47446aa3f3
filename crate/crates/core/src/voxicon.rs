//! A library of voxemes keyed by predicate and kind, with cross-entry linting
//! and summary counts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::io::ParseError;
use crate::model::*;
use crate::spatial::Rcc8Value;

/// Actions and tests the interpreter executes without a voxicon entry.
pub const PRIMITIVES: &[&str] = &["move", "grasp", "ungrasp", "hold", "at", "not"];

/// Argument type tags the interpreter understands.
pub const TYPE_TAGS: &[&str] = &["physobj", "agent", "location", "region", "3D", "2D", "1D"];

pub fn is_primitive(pred: &str) -> bool {
    PRIMITIVES.contains(&pred) || pred.parse::<Rcc8Value>().is_ok()
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Voxicon {
    entries: IndexMap<(String, VoxemeKind), Voxeme>,
}

impl Voxicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces the entry for the voxeme's `(pred, kind)`, returning
    /// the previous one.
    pub fn insert(&mut self, v: Voxeme) -> Option<Voxeme> {
        self.entries.insert((v.pred().to_string(), v.kind()), v)
    }

    pub fn remove(&mut self, pred: &str, kind: VoxemeKind) -> Option<Voxeme> {
        self.entries.shift_remove(&(pred.to_string(), kind))
    }

    pub fn lookup(&self, pred: &str, kind: VoxemeKind) -> Option<&Voxeme> {
        self.entries.get(&(pred.to_string(), kind))
    }

    /// Entries for `pred` under any kind, in insertion order.
    pub fn lookup_any<'a>(&'a self, pred: &'a str) -> impl Iterator<Item = &'a Voxeme> {
        self.entries.values().filter(move |v| v.pred() == pred)
    }

    pub fn object(&self, pred: &str) -> Option<&ObjectVoxeme> {
        self.lookup(pred, VoxemeKind::Object)
            .and_then(Voxeme::as_object)
    }

    pub fn program(&self, pred: &str) -> Option<&ProgramVoxeme> {
        self.lookup(pred, VoxemeKind::Program)
            .and_then(Voxeme::as_program)
    }

    pub fn function(&self, pred: &str) -> Option<&FunctionVoxeme> {
        match self.lookup(pred, VoxemeKind::Function) {
            Some(Voxeme::Function(f)) => Some(f),
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Voxeme> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn validate(&self) -> Vec<ValidationReport> {
        self.iter().map(validate).collect()
    }
}

impl FromIterator<Voxeme> for Voxicon {
    fn from_iter<I: IntoIterator<Item = Voxeme>>(iter: I) -> Self {
        let mut v = Voxicon::new();
        for x in iter {
            v.insert(x);
        }
        v
    }
}

/// A failed entry in a voxicon file; `index` counts entries from 0.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("entry {index}: {error}")]
pub struct EntryError {
    pub index: usize,
    pub error: ParseError,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VoxiconError {
    #[error("{0}")]
    Syntax(ParseError),
    #[error("{}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))]
    Entries(Vec<EntryError>),
}

impl VoxiconError {
    pub fn errors(&self) -> Vec<&ParseError> {
        match self {
            VoxiconError::Syntax(e) => vec![e],
            VoxiconError::Entries(es) => es.iter().map(|e| &e.error).collect(),
        }
    }

    /// True when any failure is lexical rather than a schema violation.
    pub fn is_syntax(&self) -> bool {
        self.errors().iter().any(|e| e.kind.is_syntax())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub severity: Severity,
    pub pred: String,
    pub kind: VoxemeKind,
    pub path: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {}: {}: {}",
            self.severity, self.kind, self.pred, self.path, self.message
        )
    }
}

/// Cross-entry checks. Output is sorted, so entry order never matters.
pub fn lint(voxicon: &Voxicon) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let known = |pred: &str| is_primitive(pred) || voxicon.lookup_any(pred).next().is_some();
    for v in voxicon.iter() {
        let mut push = |severity: Severity, path: String, message: String| {
            out.push(Diagnostic {
                severity,
                pred: v.pred().to_string(),
                kind: v.kind(),
                path,
                message,
            })
        };
        let tag = |path: &str, tv: &TypedVar, push: &mut dyn FnMut(Severity, String, String)| {
            if !TYPE_TAGS.contains(&tv.tag.as_str()) {
                push(
                    Severity::Warning,
                    path.to_string(),
                    format!("unknown type tag `{}`", tv.tag),
                );
            }
        };
        match v {
            Voxeme::Object(o) => {
                for slot in &o.afford_str {
                    let Some(a) = &slot.value else { continue };
                    if let Some(p) = a.event.pred() {
                        let program = voxicon.lookup(p, VoxemeKind::Program).is_some();
                        if !program && !is_primitive(p) {
                            push(
                                Severity::Warning,
                                format!("AFFORD_STR.A{}.EVENT", slot.index),
                                format!("unknown event predicate `{p}`"),
                            );
                        }
                    }
                }
                for (name, list) in [
                    ("HABITAT.INTR", &o.habitat.intrinsic),
                    ("HABITAT.EXTR", &o.habitat.extrinsic),
                ] {
                    for g in list.groups() {
                        for (label, c) in g.constraints() {
                            let HabitatConstraint::Predicate(t) = c else {
                                continue;
                            };
                            for s in t.symbols() {
                                if o.component(s).is_none() {
                                    push(
                                        Severity::Error,
                                        format!("{name}.{label}"),
                                        format!("undeclared component `{s}`"),
                                    );
                                }
                            }
                        }
                    }
                }
            }
            Voxeme::Program(p) => {
                for tv in p.declared_args() {
                    tag("TYPE.ARGS", tv, &mut push);
                }
                for slot in &p.body {
                    let Some(stmt) = &slot.value else { continue };
                    let preds: BTreeSet<&str> =
                        stmt.terms().into_iter().flat_map(|t| t.preds()).collect();
                    for pred in preds {
                        if !known(pred) {
                            push(
                                Severity::Warning,
                                format!("TYPE.BODY.E{}", slot.index),
                                format!("unknown primitive `{pred}`"),
                            );
                        }
                    }
                }
            }
            Voxeme::Attribute(a) => tag("TYPE.ARG", &a.arg, &mut push),
            Voxeme::Relation(r) => {
                for tv in given(&r.args) {
                    tag("TYPE.ARGS", tv, &mut push);
                }
            }
            Voxeme::Function(f) => tag("TYPE.ARG", &f.arg, &mut push),
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stats {
    pub by_kind: BTreeMap<VoxemeKind, usize>,
    pub by_head: BTreeMap<HeadShape, usize>,
    pub by_program_head: BTreeMap<ProgramHead, usize>,
    pub by_scale: BTreeMap<ScaleKind, usize>,
}

impl Stats {
    pub fn count(&self, kind: VoxemeKind) -> usize {
        self.by_kind[&kind]
    }
}

/// Counts entries by kind (every kind listed, zero included), object head,
/// program head and attribute scale.
pub fn stats(voxicon: &Voxicon) -> Stats {
    let mut by_kind: BTreeMap<VoxemeKind, usize> =
        VoxemeKind::ALL.iter().map(|&k| (k, 0)).collect();
    for (k, n) in tally(voxicon.iter().map(Voxeme::kind)) {
        by_kind.insert(k, n);
    }
    Stats {
        by_kind,
        by_head: tally(
            voxicon
                .iter()
                .filter_map(Voxeme::as_object)
                .map(|o| o.ty.head.shape),
        ),
        by_program_head: tally(
            voxicon
                .iter()
                .filter_map(Voxeme::as_program)
                .map(|p| p.head),
        ),
        by_scale: tally(voxicon.iter().filter_map(|v| match v {
            Voxeme::Attribute(a) => Some(a.scale),
            _ => None,
        })),
    }
}

impl fmt::Display for Stats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "total: {}", self.by_kind.values().sum::<usize>())?;
        for (k, n) in &self.by_kind {
            writeln!(f, "kind {k}: {n}")?;
        }
        for (h, n) in &self.by_head {
            writeln!(f, "head {h}: {n}")?;
        }
        for (h, n) in &self.by_program_head {
            writeln!(f, "program head {h}: {n}")?;
        }
        for (s, n) in &self.by_scale {
            writeln!(f, "scale {s}: {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_logical_form;
    use crate::shipped;
    use proptest::prelude::*;

    #[test]
    fn lookups() {
        let vox = shipped::voxicon();
        assert!(vox.object("plate").is_some());
        assert!(Voxicon::new().lookup("plate", VoxemeKind::Object).is_none());
        let put = vox.program("put").unwrap();
        assert_eq!(put.head, ProgramHead::Transition);
        assert_eq!(put.declared_args().len(), 3);
        assert!(vox.lookup("plate", VoxemeKind::Program).is_none());
    }

    #[test]
    fn insert_then_remove() {
        let mut vox = Voxicon::new();
        let apple = shipped::voxicon()
            .lookup("apple", VoxemeKind::Object)
            .unwrap()
            .clone();
        assert!(vox.insert(apple.clone()).is_none());
        assert_eq!(vox.lookup("apple", VoxemeKind::Object), Some(&apple));
        assert_eq!(vox.remove("apple", VoxemeKind::Object), Some(apple));
        assert!(vox.lookup("apple", VoxemeKind::Object).is_none());
    }

    #[test]
    fn shipped_lint_has_no_errors() {
        let diags = lint(shipped::voxicon());
        assert!(
            diags.iter().all(|d| d.severity == Severity::Warning),
            "{diags:?}"
        );
    }

    #[test]
    fn unknown_event_predicate_warns() {
        let mut vox = shipped::voxicon().clone();
        let mut plate = vox.object("plate").unwrap().clone();
        plate.afford_str[0].value.as_mut().unwrap().event =
            parse_logical_form("frobnicate(x, y)").unwrap();
        plate.afford_str[0].value.as_mut().unwrap().result = None;
        vox.insert(Voxeme::Object(plate));
        let d = lint(&vox);
        assert!(d.iter().any(|d| d.pred == "plate"
            && d.severity == Severity::Warning
            && d.message == "unknown event predicate `frobnicate`"
            && d.path == "AFFORD_STR.A1.EVENT"));
    }

    #[test]
    fn dangling_component_is_an_error() {
        let mut vox = shipped::voxicon().clone();
        let mut chair = vox.object("chair").unwrap().clone();
        chair.ty.components.retain(|c| c.name != "seat");
        vox.insert(Voxeme::Object(chair));
        let d = lint(&vox);
        assert!(d.iter().any(|d| d.pred == "chair"
            && d.severity == Severity::Error
            && d.message == "undeclared component `seat`"));
    }

    #[test]
    fn shipped_stats() {
        let s = stats(shipped::voxicon());
        assert_eq!(s.count(VoxemeKind::Object), 5);
        assert_eq!(s.count(VoxemeKind::Program), 2);
        assert_eq!(s.count(VoxemeKind::Attribute), 2);
        assert_eq!(s.count(VoxemeKind::Relation), 1);
        assert_eq!(s.count(VoxemeKind::Function), 1);
        let empty = stats(&Voxicon::new());
        assert!(empty.by_kind.values().all(|&n| n == 0));
        assert_eq!(empty.by_kind.len(), 5);
    }

    #[test]
    fn counting_copies() {
        let apple = shipped::voxicon().object("apple").unwrap().clone();
        let vox: Voxicon = ["a", "b", "c"]
            .iter()
            .map(|p| {
                let mut v = apple.clone();
                v.lex.pred = p.to_string();
                Voxeme::Object(v)
            })
            .collect();
        let s = stats(&vox);
        assert_eq!(s.count(VoxemeKind::Object), 3);
        assert_eq!(s.by_head[&HeadShape::Ellipsoid], 3);
    }

    proptest! {
        #[test]
        fn lint_ignores_entry_order(perm in Just((0..11usize).collect::<Vec<_>>()).prop_shuffle()) {
            let entries: Vec<Voxeme> = shipped::voxicon().iter().cloned().collect();
            let shuffled: Voxicon = perm.iter().map(|&i| entries[i].clone()).collect();
            prop_assert_eq!(lint(&shuffled), lint(shipped::voxicon()));
        }
    }
}
