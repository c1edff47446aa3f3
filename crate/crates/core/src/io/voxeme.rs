//! Voxeme and voxicon files (`.vox`).
//!
//! Each voxeme is a top-level block named by its kind (`OBJECT`, `PROGRAM`,
//! `ATTRIBUTE`, `RELATION`, `FUNCTION`) whose fields mirror the VoxML
//! attribute-value matrices one-to-one. Elided values are written `...`.

use std::str::FromStr;

use super::avm::{self, Entry, Node, Writer};
use super::term::{is_identifier, parse_logical_form, Term};
use super::{ParseError, ParseErrorKind};
use crate::model::*;
use crate::spatial::Rcc8Value;
use crate::voxicon::{EntryError, Voxicon, VoxiconError};

const ELIDED: &str = "...";

/// A scalar value with the position of its first character.
#[derive(Clone, Copy)]
struct Val<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Val<'a> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError::new(self.line, self.column, kind)
    }

    fn invalid(&self, msg: impl Into<String>) -> ParseError {
        ParseError::invalid(self.line, self.column, msg)
    }

    fn token<T: FromStr<Err = UnknownValue>>(&self) -> Result<T, ParseError> {
        self.text
            .trim()
            .parse()
            .map_err(|e| self.err(ParseErrorKind::UnknownValue(e)))
    }

    fn term(&self) -> Result<Term, ParseError> {
        parse_logical_form(self.text).map_err(|e| e.shifted(self.line, self.column))
    }

    fn ident(&self, what: &str) -> Result<String, ParseError> {
        let s = self.text.trim();
        if is_identifier(s) {
            Ok(s.to_string())
        } else {
            Err(self.invalid(format!("malformed {what} `{s}`")))
        }
    }

    fn sub(&self, offset_chars: usize, text: &'a str) -> Val<'a> {
        Val {
            text,
            line: self.line,
            column: self.column + offset_chars,
        }
    }

    /// Splits on `sep` outside parentheses, keeping each piece's position.
    fn split_top(&self, sep: char) -> Vec<Val<'a>> {
        let mut out = Vec::new();
        let mut depth = 0i32;
        let mut start = 0usize;
        let mut start_chars = 0usize;
        for (nchars, (i, c)) in self.text.char_indices().enumerate() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                c if c == sep && depth == 0 => {
                    out.push(self.piece(start, i, start_chars));
                    start = i + c.len_utf8();
                    start_chars = nchars + 1;
                }
                _ => {}
            }
        }
        out.push(self.piece(start, self.text.len(), start_chars));
        out
    }

    fn piece(&self, from: usize, to: usize, from_chars: usize) -> Val<'a> {
        let raw = &self.text[from..to];
        let lead = raw.chars().count() - raw.trim_start().chars().count();
        self.sub(from_chars + lead, raw.trim())
    }
}

/// Field access over one block, tracking which keys were consumed.
struct Fields<'a> {
    entries: &'a [Entry],
    used: Vec<bool>,
}

impl<'a> Fields<'a> {
    fn of(entry: &'a Entry) -> Result<Self, ParseError> {
        match &entry.value {
            Node::Block(entries) => Ok(Fields {
                entries,
                used: vec![false; entries.len()],
            }),
            Node::Scalar(_) => Err(ParseError::invalid(
                entry.line,
                entry.value_column,
                format!("`{}` must be a `[` block", entry.full_key()),
            )),
        }
    }

    fn get(&mut self, key: &str) -> Result<Option<&'a Entry>, ParseError> {
        let mut found = None;
        for (i, e) in self.entries.iter().enumerate() {
            if e.key == key && e.index.is_none() {
                if found.is_some() {
                    return Err(ParseError::new(
                        e.line,
                        e.column,
                        ParseErrorKind::DuplicateField(key.to_string()),
                    ));
                }
                self.used[i] = true;
                found = Some(e);
            }
        }
        Ok(found)
    }

    fn require(&mut self, key: &str, owner: &Entry) -> Result<&'a Entry, ParseError> {
        self.get(key)?.ok_or_else(|| {
            ParseError::new(
                owner.line,
                owner.column,
                ParseErrorKind::MissingField(format!("{}.{key}", owner.full_key())),
            )
        })
    }

    fn scalar(&mut self, key: &str) -> Result<Option<Val<'a>>, ParseError> {
        self.get(key)?.map(scalar).transpose()
    }

    fn require_scalar(&mut self, key: &str, owner: &Entry) -> Result<Val<'a>, ParseError> {
        scalar(self.require(key, owner)?)
    }

    /// Every entry named `key`, indexed or not.
    fn all(&mut self, key: &str) -> Vec<&'a Entry> {
        let mut out = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            if e.key == key {
                self.used[i] = true;
                out.push(e);
            }
        }
        out
    }

    fn finish(self) -> Result<(), ParseError> {
        match self.used.iter().position(|u| !u) {
            Some(i) => {
                let e = &self.entries[i];
                Err(ParseError::new(
                    e.line,
                    e.column,
                    ParseErrorKind::UnknownField(e.full_key()),
                ))
            }
            None => Ok(()),
        }
    }
}

fn scalar(entry: &Entry) -> Result<Val<'_>, ParseError> {
    match &entry.value {
        Node::Scalar(s) => Ok(Val {
            text: s,
            line: entry.line,
            column: entry.value_column,
        }),
        Node::Block(_) => Err(ParseError::invalid(
            entry.line,
            entry.value_column,
            format!("`{}` must be a scalar value", entry.full_key()),
        )),
    }
}

fn is_elided(entry: &Entry) -> bool {
    matches!(&entry.value, Node::Scalar(s) if s == ELIDED)
}

/// Parses one voxeme document.
pub fn parse_voxeme(text: &str) -> Result<Voxeme, ParseError> {
    let doc = avm::parse(text)?;
    match doc.as_slice() {
        [] => Err(ParseError::syntax(
            1,
            1,
            "empty document: expected a voxeme",
        )),
        [entry] => voxeme_from_entry(entry),
        [_, extra, ..] => Err(ParseError::syntax(
            extra.line,
            extra.column,
            "expected a single voxeme; use a voxicon for several",
        )),
    }
}

/// Parses zero or more voxemes into a voxicon keyed by `(pred, kind)`.
pub fn parse_voxicon(text: &str) -> Result<Voxicon, VoxiconError> {
    let doc = avm::parse(text).map_err(VoxiconError::Syntax)?;
    let mut voxicon = Voxicon::new();
    let mut errors = Vec::new();
    let mut first_seen = std::collections::HashMap::new();
    for (index, entry) in doc.iter().enumerate() {
        match voxeme_from_entry(entry) {
            Ok(v) => {
                let key = (v.pred().to_string(), v.kind());
                if let Some(first) = first_seen.get(&key) {
                    errors.push(EntryError {
                        index,
                        error: ParseError::new(
                            entry.line,
                            entry.column,
                            ParseErrorKind::DuplicateEntry {
                                pred: key.0.clone(),
                                kind: key.1.to_string(),
                                first: *first,
                            },
                        ),
                    });
                } else {
                    first_seen.insert(key, index);
                    voxicon.insert(v);
                }
            }
            Err(error) => errors.push(EntryError { index, error }),
        }
    }
    if errors.is_empty() {
        Ok(voxicon)
    } else {
        Err(VoxiconError::Entries(errors))
    }
}

fn voxeme_from_entry(entry: &Entry) -> Result<Voxeme, ParseError> {
    let kind = match (entry.key.as_str(), entry.index) {
        ("OBJECT", None) => VoxemeKind::Object,
        ("PROGRAM", None) => VoxemeKind::Program,
        ("ATTRIBUTE", None) => VoxemeKind::Attribute,
        ("RELATION", None) => VoxemeKind::Relation,
        ("FUNCTION", None) => VoxemeKind::Function,
        _ => {
            return Err(ParseError::new(
                entry.line,
                entry.column,
                ParseErrorKind::UnknownValue(UnknownValue {
                    kind: "voxeme kind",
                    found: entry.full_key(),
                }),
            ))
        }
    };
    let mut f = Fields::of(entry)?;
    let lex_entry = f.require("LEX", entry)?;
    let lex = parse_lex(lex_entry)?;
    let ty_entry = f.require("TYPE", entry)?;
    let v = match kind {
        VoxemeKind::Object => {
            let ty = parse_object_type(ty_entry)?;
            let habitat = parse_habitat(f.require("HABITAT", entry)?)?;
            let afford_str = parse_slots(f.require("AFFORD_STR", entry)?, "A", parse_affordance)?;
            let embodiment = parse_embodiment(f.require("EMBODIMENT", entry)?)?;
            Voxeme::Object(ObjectVoxeme {
                lex,
                ty,
                habitat,
                afford_str,
                embodiment,
            })
        }
        VoxemeKind::Program => {
            let mut t = Fields::of(ty_entry)?;
            let head = t.require_scalar("HEAD", ty_entry)?.token()?;
            let args = parse_slots(t.require("ARGS", ty_entry)?, "A", |e| typed_var(scalar(e)?))?;
            let body = parse_slots(t.require("BODY", ty_entry)?, "E", |e| statement(scalar(e)?))?;
            t.finish()?;
            Voxeme::Program(ProgramVoxeme {
                lex,
                head,
                args,
                body,
            })
        }
        VoxemeKind::Attribute => {
            let mut t = Fields::of(ty_entry)?;
            let scale = t.require_scalar("SCALE", ty_entry)?.token()?;
            let arity = t.require_scalar("ARITY", ty_entry)?.token()?;
            let arg = typed_var(t.require_scalar("ARG", ty_entry)?)?;
            t.finish()?;
            Voxeme::Attribute(AttributeVoxeme {
                lex,
                scale,
                arity,
                arg,
            })
        }
        VoxemeKind::Relation => {
            let mut t = Fields::of(ty_entry)?;
            let class: RelationClass = t.require_scalar("CLASS", ty_entry)?.token()?;
            let value_val = t.require_scalar("VALUE", ty_entry)?;
            let value = match class {
                RelationClass::Config => RelationValue::Config(value_val.token::<Rcc8Value>()?),
                RelationClass::ForceDynamic => {
                    RelationValue::ForceDynamic(value_val.ident("force-dynamic value")?)
                }
            };
            let args = parse_slots(t.require("ARGS", ty_entry)?, "A", |e| typed_var(scalar(e)?))?;
            t.finish()?;
            Voxeme::Relation(RelationVoxeme { lex, value, args })
        }
        VoxemeKind::Function => {
            let mut t = Fields::of(ty_entry)?;
            let arg = typed_var(t.require_scalar("ARG", ty_entry)?)?;
            let referent = match t.scalar("REFERENT")? {
                Some(v) => {
                    let (var, path) = arrow_path(v)?;
                    Referent { var, path }
                }
                None => Referent {
                    var: arg.var.clone(),
                    path: Vec::new(),
                },
            };
            let mapping = parse_mapping(t.require_scalar("MAPPING", ty_entry)?)?;
            let o_entry = t.require("ORIENTATION", ty_entry)?;
            let mut o = Fields::of(o_entry)?;
            let space = o.require_scalar("SPACE", o_entry)?.token()?;
            let axis = o.require_scalar("AXIS", o_entry)?.token()?;
            let arity = o.scalar("ARITY")?.map(parse_arity_rule).transpose()?;
            o.finish()?;
            t.finish()?;
            Voxeme::Function(FunctionVoxeme {
                lex,
                arg,
                referent,
                mapping,
                orientation: Orientation { space, axis, arity },
            })
        }
    };
    f.finish()?;
    Ok(v)
}

fn parse_lex(entry: &Entry) -> Result<Lex, ParseError> {
    let mut f = Fields::of(entry)?;
    let pred = f.require_scalar("PRED", entry)?.ident("predicate")?;
    let gl_types = match f.scalar("TYPE")? {
        Some(v) => v
            .split_top(',')
            .iter()
            .map(|p| p.ident("GL type"))
            .collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    f.finish()?;
    Ok(Lex { pred, gl_types })
}

fn parse_object_type(entry: &Entry) -> Result<ObjectTypeStructure, ParseError> {
    let mut f = Fields::of(entry)?;
    let head_val = f.require_scalar("HEAD", entry)?;
    let (head_name, coindex, plural) = coindexed(head_val)?;
    if plural {
        return Err(head_val.invalid("head cannot be plural"));
    }
    let shape = head_val.sub(0, head_name).token::<HeadShape>()?;
    let comp_val = f.require_scalar("COMPONENTS", entry)?;
    let components = if comp_val.text == "nil" {
        Vec::new()
    } else {
        comp_val
            .split_top(',')
            .into_iter()
            .map(|p| {
                let (name, coindex, plural) = coindexed(p)?;
                Ok(Component {
                    name: name.to_string(),
                    coindex,
                    plural,
                })
            })
            .collect::<Result<_, ParseError>>()?
    };
    let concavity = f.require_scalar("CONCAVITY", entry)?.token()?;
    let rotat_sym = token_set(f.require_scalar("ROTATSYM", entry)?)?;
    let reflect_sym = token_set(f.require_scalar("REFLECTSYM", entry)?)?;
    f.finish()?;
    Ok(ObjectTypeStructure {
        head: HeadRef { shape, coindex },
        components,
        concavity,
        rotat_sym,
        reflect_sym,
    })
}

/// `name`, `name[1]`, `name+` or `name[1]+`.
fn coindexed(v: Val<'_>) -> Result<(&str, Option<u32>, bool), ParseError> {
    let mut s = v.text;
    let plural = s.ends_with('+');
    if plural {
        s = &s[..s.len() - 1];
    }
    let (name, coindex) = match s.strip_suffix(']') {
        Some(rest) => {
            let open = rest
                .find('[')
                .ok_or_else(|| v.invalid(format!("malformed coindex in `{}`", v.text)))?;
            let idx = rest[open + 1..]
                .parse::<u32>()
                .map_err(|_| v.invalid(format!("malformed coindex in `{}`", v.text)))?;
            (&rest[..open], Some(idx))
        }
        None => (s, None),
    };
    if !is_identifier(name) {
        return Err(v.invalid(format!("malformed name `{}`", v.text)));
    }
    Ok((name, coindex, plural))
}

fn token_set<T: FromStr<Err = UnknownValue>>(v: Val<'_>) -> Result<Vec<T>, ParseError> {
    let inner = v
        .text
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| v.invalid(format!("expected a `{{...}}` set, found `{}`", v.text)))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.sub(1, inner)
        .split_top(',')
        .iter()
        .map(|p| p.token())
        .collect()
}

fn parse_habitat(entry: &Entry) -> Result<HabitatSpec, ParseError> {
    let mut f = Fields::of(entry)?;
    let intrinsic = habitat_list(f.all("INTR"))?;
    let extrinsic = habitat_list(f.all("EXTR"))?;
    f.finish()?;
    Ok(HabitatSpec {
        intrinsic,
        extrinsic,
    })
}

fn habitat_list(entries: Vec<&Entry>) -> Result<HabitatList, ParseError> {
    if entries.is_empty() {
        return Ok(HabitatList::Elided);
    }
    if let [single] = entries.as_slice() {
        if let Node::Scalar(s) = &single.value {
            return match s.as_str() {
                ELIDED if single.index.is_none() => Ok(HabitatList::Elided),
                "{}" if single.index.is_none() => Ok(HabitatList::Given(Vec::new())),
                _ => Err(ParseError::invalid(
                    single.line,
                    single.value_column,
                    format!("`{}` must be `...`, `{{}}` or a block", single.full_key()),
                )),
            };
        }
    }
    entries
        .into_iter()
        .map(|e| {
            let Node::Block(lines) = &e.value else {
                return Err(ParseError::invalid(
                    e.line,
                    e.value_column,
                    format!("`{}` mixes elided and given habitats", e.full_key()),
                ));
            };
            let mut seen = std::collections::HashSet::new();
            let mut out = Vec::new();
            for line in lines {
                if line.index.is_some() || !seen.insert(line.key.as_str()) {
                    return Err(ParseError::new(
                        line.line,
                        line.column,
                        ParseErrorKind::DuplicateField(line.full_key()),
                    ));
                }
                let v = scalar(line)?;
                let constraints = v
                    .split_top(',')
                    .into_iter()
                    .map(habitat_constraint)
                    .collect::<Result<_, _>>()?;
                out.push(LabeledConstraints {
                    label: line.key.clone(),
                    constraints,
                });
            }
            Ok(HabitatGroup {
                index: e.index,
                entries: out,
            })
        })
        .collect::<Result<_, _>>()
        .map(HabitatList::Given)
}

fn habitat_constraint(v: Val<'_>) -> Result<HabitatConstraint, ParseError> {
    if let Some(at) = v.text.find("<<") {
        let lesser = v.sub(0, v.text[..at].trim()).token()?;
        let rest = &v.text[at + 2..];
        let lead = rest.chars().count() - rest.trim_start().chars().count();
        let greater = v
            .sub(v.text[..at + 2].chars().count() + lead, rest.trim())
            .token()?;
        return Ok(HabitatConstraint::RelativeDim { lesser, greater });
    }
    // `label(+A)` has no term reading because of the sign
    if let Some(open) = v.text.find('(') {
        let label = &v.text[..open];
        if let Some(inner) = v.text[open + 1..].strip_suffix(')') {
            if is_identifier(label) && inner.starts_with(['+', '-']) {
                let direction = v.sub(open + 1, inner).token()?;
                return Ok(HabitatConstraint::FaceLabel {
                    label: label.to_string(),
                    direction,
                });
            }
        }
    }
    let term = v.term()?;
    if term.pred() == Some("align") {
        let args = term.args();
        let axis = |t: &Term, embedding: bool| -> Option<Axis> {
            let s = t.as_symbol()?;
            let s = if embedding { s.strip_prefix("E_")? } else { s };
            s.parse().ok()
        };
        return match args {
            [a, b] => match (axis(a, false), axis(b, true)) {
                (Some(object_axis), Some(embedding_axis)) => Ok(HabitatConstraint::Align {
                    object_axis,
                    embedding_axis,
                }),
                _ => Err(v.invalid(format!("malformed alignment `{}`", v.text))),
            },
            _ => Err(v.invalid("align takes an object axis and an embedding axis E_<axis>")),
        };
    }
    Ok(HabitatConstraint::Predicate(term))
}

fn parse_slots<T>(
    entry: &Entry,
    prefix: &str,
    mut item: impl FnMut(&Entry) -> Result<T, ParseError>,
) -> Result<Vec<Slot<T>>, ParseError> {
    let Node::Block(children) = &entry.value else {
        return Err(ParseError::invalid(
            entry.line,
            entry.value_column,
            format!("`{}` must be a `[` block", entry.full_key()),
        ));
    };
    let mut seen = std::collections::HashSet::new();
    children
        .iter()
        .map(|c| {
            let index = c
                .key
                .strip_prefix(prefix)
                .and_then(|n| n.parse::<u32>().ok())
                .filter(|_| c.index.is_none())
                .ok_or_else(|| {
                    ParseError::new(c.line, c.column, ParseErrorKind::UnknownField(c.full_key()))
                })?;
            if !seen.insert(index) {
                return Err(ParseError::new(
                    c.line,
                    c.column,
                    ParseErrorKind::DuplicateField(c.full_key()),
                ));
            }
            if is_elided(c) {
                Ok(Slot::elided(index))
            } else {
                Ok(Slot::given(index, item(c)?))
            }
        })
        .collect()
}

fn parse_affordance(entry: &Entry) -> Result<Affordance, ParseError> {
    let mut f = Fields::of(entry)?;
    let kind = f.require_scalar("KIND", entry)?.token()?;
    let condition = match f.scalar("CONDITION")? {
        Some(v) => v
            .split_top('&')
            .into_iter()
            .map(|h| {
                h.text
                    .strip_prefix("H[")
                    .and_then(|s| s.strip_suffix(']'))
                    .and_then(|s| s.parse::<u32>().ok())
                    .ok_or_else(|| {
                        h.invalid(format!(
                            "expected a habitat reference H[i], found `{}`",
                            h.text
                        ))
                    })
            })
            .collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    let event = f.require_scalar("EVENT", entry)?.term()?;
    let result = f.scalar("RESULT")?.map(|v| v.term()).transpose()?;
    f.finish()?;
    Ok(Affordance {
        kind,
        condition,
        event,
        result,
    })
}

fn parse_embodiment(entry: &Entry) -> Result<Embodiment, ParseError> {
    let mut f = Fields::of(entry)?;
    let scale = f.require_scalar("SCALE", entry)?.token()?;
    let movable_val = f.require_scalar("MOVABLE", entry)?;
    let movable = match movable_val.text {
        "true" => true,
        "false" => false,
        other => {
            return Err(movable_val.err(ParseErrorKind::UnknownValue(UnknownValue {
                kind: "boolean",
                found: other.to_string(),
            })))
        }
    };
    f.finish()?;
    Ok(Embodiment { scale, movable })
}

fn typed_var(v: Val<'_>) -> Result<TypedVar, ParseError> {
    let (var, tag) = v
        .text
        .split_once(':')
        .ok_or_else(|| v.invalid(format!("expected `var:type`, found `{}`", v.text)))?;
    let var = var.trim();
    let tag = tag.trim();
    let tag_ok = !tag.is_empty() && tag.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !is_identifier(var) || !tag_ok {
        return Err(v.invalid(format!("expected `var:type`, found `{}`", v.text)));
    }
    Ok(TypedVar {
        var: var.to_string(),
        tag: tag.to_string(),
    })
}

fn statement(v: Val<'_>) -> Result<Statement, ParseError> {
    if let Some(at) = find_top_level(v.text, "->") {
        let test = v.sub(0, v.text[..at].trim_end()).term()?;
        let rest = &v.text[at + 2..];
        let lead = rest.chars().count() - rest.trim_start().chars().count();
        let then = statement(v.sub(v.text[..at + 2].chars().count() + lead, rest.trim()))?;
        return Ok(Statement::Cond {
            test,
            then: Box::new(then),
        });
    }
    Ok(statement_from_term(v.term()?))
}

fn statement_from_term(t: Term) -> Statement {
    match t {
        Term::Apply { pred, mut args } if pred == "while" && args.len() == 2 => {
            let body = args.pop().expect("two args");
            let test = args.pop().expect("two args");
            Statement::While {
                test,
                body: Box::new(statement_from_term(body)),
            }
        }
        other => Statement::Primitive(other),
    }
}

fn find_top_level(s: &str, pat: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ if depth == 0 && s[i..].starts_with(pat) => return Some(i),
            _ => {}
        }
    }
    None
}

fn arrow_path(v: Val<'_>) -> Result<(String, Vec<String>), ParseError> {
    let mut parts = v.text.split("->").map(str::trim);
    let var = parts.next().unwrap_or_default();
    if !is_identifier(var) {
        return Err(v.invalid(format!("malformed path `{}`", v.text)));
    }
    let path: Vec<String> = parts.map(str::to_string).collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(v.invalid(format!("empty path segment in `{}`", v.text)));
    }
    Ok((var.to_string(), path))
}

fn parse_mapping(v: Val<'_>) -> Result<Mapping, ParseError> {
    let bad = || v.invalid(format!("expected `dimension(n):n-k`, found `{}`", v.text));
    let rest = v.text.strip_prefix("dimension(").ok_or_else(bad)?;
    let (var, rest) = rest.split_once(')').ok_or_else(bad)?;
    let rest = rest.strip_prefix(':').ok_or_else(bad)?;
    let rest = rest
        .strip_prefix(var)
        .filter(|_| is_identifier(var))
        .ok_or_else(bad)?;
    let k = rest.strip_prefix('-').ok_or_else(bad)?;
    let reduce_by = k.parse::<u32>().map_err(|_| bad())?;
    Ok(Mapping { reduce_by })
}

fn parse_arity_rule(v: Val<'_>) -> Result<ArityRule, ParseError> {
    let (path_text, arity_text) = v
        .text
        .rsplit_once(':')
        .ok_or_else(|| v.invalid("expected `path: arity`"))?;
    let lead = arity_text.chars().count() - arity_text.trim_start().chars().count();
    let arity = v
        .sub(path_text.chars().count() + 1 + lead, arity_text.trim())
        .token()?;
    let (var, path) = arrow_path(v.sub(0, path_text.trim_end()))?;
    Ok(ArityRule { var, path, arity })
}

fn comma_join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn set_text<T: std::fmt::Display>(items: &[T]) -> String {
    format!("{{{}}}", comma_join(items))
}

fn coindexed_text(name: &str, coindex: Option<u32>, plural: bool) -> String {
    let mut s = name.to_string();
    if let Some(i) = coindex {
        s.push_str(&format!("[{i}]"));
    }
    if plural {
        s.push('+');
    }
    s
}

pub fn constraint_text(c: &HabitatConstraint) -> String {
    match c {
        HabitatConstraint::Align {
            object_axis,
            embedding_axis,
        } => format!("align({object_axis}, E_{embedding_axis})"),
        HabitatConstraint::FaceLabel { label, direction } => format!("{label}({direction})"),
        HabitatConstraint::RelativeDim { lesser, greater } => format!("{lesser} << {greater}"),
        HabitatConstraint::Predicate(t) => t.to_string(),
    }
}

fn write_lex(w: &mut Writer, lex: &Lex) {
    w.open("LEX");
    w.scalar("PRED", &lex.pred);
    if !lex.gl_types.is_empty() {
        w.scalar("TYPE", lex.gl_types.join(", "));
    }
    w.close();
}

fn write_slots<T>(
    w: &mut Writer,
    key: &str,
    prefix: &str,
    slots: &[Slot<T>],
    mut item: impl FnMut(&mut Writer, &str, &T),
) {
    w.open(key);
    for s in slots {
        let k = format!("{prefix}{}", s.index);
        match &s.value {
            Some(v) => item(w, &k, v),
            None => w.scalar(&k, ELIDED),
        }
    }
    w.close();
}

fn write_habitat_list(w: &mut Writer, key: &str, list: &HabitatList) {
    match list {
        HabitatList::Elided => w.scalar(key, ELIDED),
        HabitatList::Given(groups) if groups.is_empty() => w.scalar(key, "{}"),
        HabitatList::Given(groups) => {
            for g in groups {
                let k = match g.index {
                    Some(i) => format!("{key}[{i}]"),
                    None => key.to_string(),
                };
                w.open(&k);
                for e in &g.entries {
                    w.scalar(
                        &e.label,
                        comma_join(e.constraints.iter().map(constraint_text)),
                    );
                }
                w.close();
            }
        }
    }
}

fn write_voxeme(w: &mut Writer, v: &Voxeme) {
    match v {
        Voxeme::Object(o) => {
            w.open("OBJECT");
            write_lex(w, &o.lex);
            w.open("TYPE");
            w.scalar(
                "HEAD",
                coindexed_text(o.ty.head.shape.as_str(), o.ty.head.coindex, false),
            );
            if o.ty.components.is_empty() {
                w.scalar("COMPONENTS", "nil");
            } else {
                w.scalar(
                    "COMPONENTS",
                    comma_join(
                        o.ty.components
                            .iter()
                            .map(|c| coindexed_text(&c.name, c.coindex, c.plural)),
                    ),
                );
            }
            w.scalar("CONCAVITY", o.ty.concavity.as_str());
            w.scalar("ROTATSYM", set_text(&o.ty.rotat_sym));
            w.scalar("REFLECTSYM", set_text(&o.ty.reflect_sym));
            w.close();
            w.open("HABITAT");
            write_habitat_list(w, "INTR", &o.habitat.intrinsic);
            write_habitat_list(w, "EXTR", &o.habitat.extrinsic);
            w.close();
            write_slots(w, "AFFORD_STR", "A", &o.afford_str, |w, k, a| {
                w.open(k);
                w.scalar("KIND", a.kind.as_str());
                if !a.condition.is_empty() {
                    w.scalar(
                        "CONDITION",
                        a.condition
                            .iter()
                            .map(|h| format!("H[{h}]"))
                            .collect::<Vec<_>>()
                            .join(" & "),
                    );
                }
                w.scalar("EVENT", a.event.to_string());
                if let Some(r) = &a.result {
                    w.scalar("RESULT", r.to_string());
                }
                w.close();
            });
            w.open("EMBODIMENT");
            w.scalar("SCALE", o.embodiment.scale.as_str());
            w.scalar(
                "MOVABLE",
                if o.embodiment.movable {
                    "true"
                } else {
                    "false"
                },
            );
            w.close();
            w.close();
        }
        Voxeme::Program(p) => {
            w.open("PROGRAM");
            write_lex(w, &p.lex);
            w.open("TYPE");
            w.scalar("HEAD", p.head.as_str());
            write_slots(w, "ARGS", "A", &p.args, |w, k, a| {
                w.scalar(k, a.to_string())
            });
            write_slots(w, "BODY", "E", &p.body, |w, k, s| {
                w.scalar(k, s.to_string())
            });
            w.close();
            w.close();
        }
        Voxeme::Attribute(a) => {
            w.open("ATTRIBUTE");
            write_lex(w, &a.lex);
            w.open("TYPE");
            w.scalar("SCALE", a.scale.as_str());
            w.scalar("ARITY", a.arity.as_str());
            w.scalar("ARG", a.arg.to_string());
            w.close();
            w.close();
        }
        Voxeme::Relation(r) => {
            w.open("RELATION");
            write_lex(w, &r.lex);
            w.open("TYPE");
            w.scalar("CLASS", r.value.class().as_str());
            match &r.value {
                RelationValue::Config(v) => w.scalar("VALUE", v.as_str()),
                RelationValue::ForceDynamic(tag) => w.scalar("VALUE", tag),
            }
            write_slots(w, "ARGS", "A", &r.args, |w, k, a| {
                w.scalar(k, a.to_string())
            });
            w.close();
            w.close();
        }
        Voxeme::Function(f) => {
            w.open("FUNCTION");
            write_lex(w, &f.lex);
            w.open("TYPE");
            w.scalar("ARG", f.arg.to_string());
            let mut referent = f.referent.var.clone();
            for p in &f.referent.path {
                referent.push_str(" -> ");
                referent.push_str(p);
            }
            w.scalar("REFERENT", referent);
            w.scalar("MAPPING", format!("dimension(n):n-{}", f.mapping.reduce_by));
            w.open("ORIENTATION");
            w.scalar("SPACE", f.orientation.space.as_str());
            w.scalar("AXIS", f.orientation.axis.to_string());
            if let Some(rule) = &f.orientation.arity {
                let mut s = rule.var.clone();
                for p in &rule.path {
                    s.push_str(" -> ");
                    s.push_str(p);
                }
                s.push_str(": ");
                s.push_str(rule.arity.as_str());
                w.scalar("ARITY", s);
            }
            w.close();
            w.close();
            w.close();
        }
    }
}

/// Canonical text for one voxeme; stable field order.
pub fn serialize_voxeme(v: &Voxeme) -> String {
    let mut w = Writer::new();
    write_voxeme(&mut w, v);
    w.finish()
}

/// Canonical text for a voxicon: entries in insertion order, blank-line separated.
pub fn serialize_voxicon(voxicon: &Voxicon) -> String {
    voxicon
        .iter()
        .map(serialize_voxeme)
        .collect::<Vec<_>>()
        .join("\n")
}

/// Source position of the field at dotted `path` inside the `(pred, kind)`
/// entry of voxicon `text`. When the path runs past the written fields, the
/// deepest field found is used; `None` when no such entry exists.
pub fn locate(text: &str, pred: &str, kind: VoxemeKind, path: &str) -> Option<(usize, usize)> {
    let doc = avm::parse(text).ok()?;
    let key = kind.as_str().to_uppercase();
    let names_pred = |e: &Entry| {
        match &e.value {
        Node::Block(fields) => fields.iter().any(|f| {
            f.key == "LEX"
                && matches!(&f.value, Node::Block(lex)
                    if lex.iter().any(|p| p.key == "PRED" && matches!(&p.value, Node::Scalar(s) if s == pred)))
        }),
        Node::Scalar(_) => false,
    }
    };
    let mut at = doc
        .iter()
        .find(|e| e.key == key && e.index.is_none() && names_pred(e))?;
    for segment in path.split('.').filter(|s| !s.is_empty()) {
        let Node::Block(fields) = &at.value else {
            break;
        };
        match fields.iter().find(|f| f.full_key() == segment) {
            Some(f) => at = f,
            None => break,
        }
    }
    Some((at.line, at.column))
}
