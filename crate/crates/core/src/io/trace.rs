//! Trace records: one tab-separated line per transition.
//!
//! Fields are `tick=N`, `action=TERM`, `objects=...` and `facts=...`; the
//! example shows the tabs as spaces:
//!
//! ```text
//! tick=1 action=grasp(agent1, apple1) objects=agent1 <-1.5, 0.9, 0> <0, 0, 0>; ... facts=hold(agent1, apple1)
//! ```
//!
//! Objects are listed by id with position then rotation. Facts are the
//! asserted facts together with the non-disconnected RCC-8 relations of the
//! post-state, sorted as text.

use super::scene::pose_text;
use crate::interpreter::{Trace, Transition};

fn record(t: &Transition, eps: f64) -> String {
    let objects: Vec<String> = t
        .post
        .objects
        .values()
        .map(|o| format!("{} {}", o.id, pose_text(o)))
        .collect();
    let mut facts: Vec<String> = t.post.facts.iter().map(ToString::to_string).collect();
    facts.extend(t.post.relation_facts(eps).iter().map(ToString::to_string));
    facts.sort();
    facts.dedup();
    format!(
        "tick={}\taction={}\tobjects={}\tfacts={}",
        t.post.tick,
        t.action,
        objects.join("; "),
        facts.join("; ")
    )
}

/// Serializes every transition of `trace`, each line newline-terminated.
pub fn serialize_trace(trace: &Trace) -> String {
    trace
        .transitions
        .iter()
        .map(|t| record(t, trace.contact_eps) + "\n")
        .collect()
}
