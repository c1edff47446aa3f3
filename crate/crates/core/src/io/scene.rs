//! Scene files (`.scene`).
//!
//! ```text
//! INSTANCE = [
//!   ID = plate1
//!   PRED = plate
//!   POSITION = <0.5, 0.82, 0.2>
//!   ROTATION = <0, 0, 0>
//!   EXTENTS = <0.3, 0.04, 0.3>
//! ]
//! FACT = occupied(seat(chair1))
//! ```
//!
//! `ROTATION` defaults to zero. `AGENT = true` marks the designated agent and
//! `ATTACHED_TO = id` makes an instance move rigidly with another.

use std::collections::BTreeMap;

use super::avm::{self, Entry, Node, Writer};
use super::term::{is_identifier, parse_logical_form};
use super::{ParseError, ParseErrorKind};
use crate::spatial::{SceneObject, SceneState, Vec3};

fn scalar(e: &Entry) -> Result<&str, ParseError> {
    match &e.value {
        Node::Scalar(s) => Ok(s),
        Node::Block(_) => Err(ParseError::invalid(
            e.line,
            e.value_column,
            format!("`{}` must be a scalar value", e.full_key()),
        )),
    }
}

fn vector(e: &Entry) -> Result<Vec3, ParseError> {
    let text = scalar(e)?;
    let t = parse_logical_form(text).map_err(|err| err.shifted(e.line, e.value_column))?;
    t.as_vector().ok_or_else(|| {
        ParseError::invalid(
            e.line,
            e.value_column,
            format!("expected a vector `<x, y, z>`, found `{text}`"),
        )
    })
}

fn instance(e: &Entry) -> Result<SceneObject, ParseError> {
    let Node::Block(fields) = &e.value else {
        return Err(ParseError::invalid(
            e.line,
            e.value_column,
            "`INSTANCE` must be a `[` block",
        ));
    };
    let mut seen: BTreeMap<&str, &Entry> = BTreeMap::new();
    for f in fields {
        if f.index.is_some()
            || ![
                "ID",
                "PRED",
                "POSITION",
                "ROTATION",
                "EXTENTS",
                "AGENT",
                "ATTACHED_TO",
            ]
            .contains(&f.key.as_str())
        {
            return Err(ParseError::new(
                f.line,
                f.column,
                ParseErrorKind::UnknownField(f.full_key()),
            ));
        }
        if seen.insert(&f.key, f).is_some() {
            return Err(ParseError::new(
                f.line,
                f.column,
                ParseErrorKind::DuplicateField(f.key.clone()),
            ));
        }
    }
    let need = |k: &str| {
        seen.get(k).copied().ok_or_else(|| {
            ParseError::new(
                e.line,
                e.column,
                ParseErrorKind::MissingField(format!("INSTANCE.{k}")),
            )
        })
    };
    let ident = |f: &Entry| -> Result<String, ParseError> {
        let s = scalar(f)?;
        if is_identifier(s) {
            Ok(s.to_string())
        } else {
            Err(ParseError::invalid(
                f.line,
                f.value_column,
                format!("malformed identifier `{s}`"),
            ))
        }
    };
    let id = ident(need("ID")?)?;
    let pred = ident(need("PRED")?)?;
    let position = vector(need("POSITION")?)?;
    let rotation = seen
        .get("ROTATION")
        .map(|f| vector(f))
        .transpose()?
        .unwrap_or(Vec3::ZERO);
    let ext_entry = need("EXTENTS")?;
    let extents = vector(ext_entry)?;
    if !(extents.x > 0.0 && extents.y > 0.0 && extents.z > 0.0) {
        return Err(ParseError::invalid(
            ext_entry.line,
            ext_entry.value_column,
            format!("extents must be positive, found {extents}"),
        ));
    }
    let agent = match seen.get("AGENT") {
        None => false,
        Some(f) => match scalar(f)? {
            "true" => true,
            "false" => false,
            other => {
                return Err(ParseError::invalid(
                    f.line,
                    f.value_column,
                    format!("expected true or false, found `{other}`"),
                ))
            }
        },
    };
    let attached_to = seen.get("ATTACHED_TO").map(|f| ident(f)).transpose()?;
    Ok(SceneObject {
        id,
        pred,
        position,
        rotation,
        extents,
        attached_to,
        agent,
    })
}

/// Parses and checks a scene: unique ids, attachments to existing instances
/// without cycles, and facts that mention only instance ids.
pub fn parse_scene(text: &str) -> Result<SceneState, ParseError> {
    let doc = avm::parse(text)?;
    let mut scene = SceneState::new();
    let mut facts = Vec::new();
    let mut positions: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for e in &doc {
        match (e.key.as_str(), e.index) {
            ("INSTANCE", None) => {
                let obj = instance(e)?;
                if scene.get(&obj.id).is_some() {
                    return Err(ParseError::invalid(
                        e.line,
                        e.column,
                        format!("duplicate instance id `{}`", obj.id),
                    ));
                }
                positions.insert(obj.id.clone(), (e.line, e.column));
                scene.insert(obj);
            }
            ("FACT", None) => {
                let text = scalar(e)?;
                let t =
                    parse_logical_form(text).map_err(|err| err.shifted(e.line, e.value_column))?;
                if t.pred().is_none() {
                    return Err(ParseError::invalid(
                        e.line,
                        e.value_column,
                        "a fact must be a relation term",
                    ));
                }
                facts.push((t, e.line, e.value_column));
            }
            _ => {
                return Err(ParseError::new(
                    e.line,
                    e.column,
                    ParseErrorKind::UnknownField(e.full_key()),
                ))
            }
        }
    }
    for obj in scene.objects.values() {
        if let Some(holder) = &obj.attached_to {
            if scene.get(holder).is_none() {
                let (l, c) = positions[&obj.id];
                return Err(ParseError::invalid(
                    l,
                    c,
                    format!("`{}` is attached to unknown instance `{holder}`", obj.id),
                ));
            }
        }
    }
    if scene.has_attachment_cycle() {
        let (l, c) = positions.values().next().copied().unwrap_or((1, 1));
        return Err(ParseError::invalid(l, c, "attachments form a cycle"));
    }
    for (t, l, c) in facts {
        if let Some(s) = t.symbols().find(|s| scene.get(s).is_none()) {
            return Err(ParseError::invalid(
                l,
                c,
                format!("fact mentions unknown instance `{s}`"),
            ));
        }
        scene.facts.insert(t);
    }
    Ok(scene)
}

fn vec_text(v: Vec3) -> String {
    v.to_string()
}

/// Canonical scene text: instances by id, then facts in order.
pub fn serialize_scene(scene: &SceneState) -> String {
    let mut w = Writer::new();
    for o in scene.objects.values() {
        w.open("INSTANCE");
        w.scalar("ID", &o.id);
        w.scalar("PRED", &o.pred);
        w.scalar("POSITION", vec_text(o.position));
        w.scalar("ROTATION", vec_text(o.rotation));
        w.scalar("EXTENTS", vec_text(o.extents));
        if o.agent {
            w.scalar("AGENT", "true");
        }
        if let Some(h) = &o.attached_to {
            w.scalar("ATTACHED_TO", h);
        }
        w.close();
    }
    for f in &scene.facts {
        w.scalar("FACT", f.to_string());
    }
    w.finish()
}

/// Renders a pose the way scene files and traces write it.
pub fn pose_text(o: &SceneObject) -> String {
    format!("{} {}", vec_text(o.position), vec_text(o.rotation))
}
