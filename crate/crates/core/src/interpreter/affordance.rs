//! Affordance firing: `H[i] -> [event] result`.

use std::collections::BTreeMap;

use crate::io::term::Term;
use crate::model::given;
use crate::spatial::{check_group, SceneState, SpatialParams};
use crate::voxicon::Voxicon;

/// Matches `pattern` against a ground `event`, extending `env`. Pattern
/// symbols are variables; everything else must agree exactly.
pub fn unify(pattern: &Term, event: &Term, env: &mut BTreeMap<String, Term>) -> bool {
    match (pattern, event) {
        (Term::Apply { pred: p, args: pa }, Term::Apply { pred: e, args: ea }) => {
            p == e && pa.len() == ea.len() && pa.iter().zip(ea).all(|(a, b)| unify(a, b, env))
        }
        (p, e) => match p.as_symbol() {
            Some(var) => match env.get(var) {
                Some(bound) => bound == e,
                None => {
                    env.insert(var.to_string(), e.clone());
                    true
                }
            },
            None => p == e,
        },
    }
}

/// Results of the affordances whose event matches `event` and whose habitat
/// conditions hold for their owner in `scene`, in instance then slot order.
pub fn fired_results(
    scene: &SceneState,
    event: &Term,
    voxicon: &Voxicon,
    params: &SpatialParams,
) -> Vec<Term> {
    let mut owners: Vec<&str> = event.symbols().filter(|s| scene.get(s).is_some()).collect();
    owners.sort();
    owners.dedup();
    let mut out = Vec::new();
    for id in owners {
        let obj = scene.get(id).expect("instance in scene");
        let Some(voxeme) = voxicon.object(&obj.pred) else {
            continue;
        };
        for a in given(&voxeme.afford_str) {
            let Some(result) = &a.result else { continue };
            let mut env = BTreeMap::new();
            if !unify(&a.event, event, &mut env) {
                continue;
            }
            // the affordance belongs to this instance only if the event names it
            if !env.values().any(|t| t.as_symbol() == Some(id)) {
                continue;
            }
            let habitats_hold = a.condition.iter().all(|h| {
                voxeme
                    .habitat
                    .group(*h)
                    .is_some_and(|g| check_group(g, obj, scene, params))
            });
            if !habitats_hold {
                continue;
            }
            let r = result.map_symbols(&|s| env.get(s).cloned().unwrap_or_else(|| Term::sym(s)));
            if !out.contains(&r) {
                out.push(r);
            }
        }
    }
    out
}

/// Adds the results of every affordance `event` activates to the facts.
pub fn fire_affordances(
    scene: &SceneState,
    event: &Term,
    voxicon: &Voxicon,
    params: &SpatialParams,
) -> SceneState {
    let mut next = scene.clone();
    next.facts
        .extend(fired_results(scene, event, voxicon, params));
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_logical_form;
    use crate::shipped;
    use crate::spatial::Vec3;

    fn lf(s: &str) -> Term {
        parse_logical_form(s).unwrap()
    }

    #[test]
    fn unification() {
        let mut env = BTreeMap::new();
        assert!(unify(
            &lf("put(x, y)"),
            &lf("put(apple1, plate1)"),
            &mut env
        ));
        assert_eq!(env["y"], Term::sym("plate1"));
        assert!(!unify(
            &lf("put(x, x)"),
            &lf("put(apple1, plate1)"),
            &mut BTreeMap::new()
        ));
        assert!(!unify(
            &lf("put(x, y)"),
            &lf("slide(apple1, plate1)"),
            &mut BTreeMap::new()
        ));
    }

    #[test]
    fn plate_holds_what_is_put_on_it() {
        let scene = shipped::kitchen();
        let p = SpatialParams::default();
        let after = fire_affordances(&scene, &lf("put(apple1, plate1)"), shipped::voxicon(), &p);
        assert!(after.facts.contains(&lf("hold(plate1, apple1)")));
        assert_eq!(after.facts.len(), scene.facts.len() + 1);
    }

    #[test]
    fn upside_down_plate_does_not_fire() {
        let mut scene = shipped::kitchen();
        scene.objects.get_mut("plate1").unwrap().rotation = Vec3::new(180.0, 0.0, 0.0);
        let p = SpatialParams::default();
        let after = fire_affordances(&scene, &lf("put(apple1, plate1)"), shipped::voxicon(), &p);
        assert_eq!(after, scene);
    }

    #[test]
    fn unmatched_event_changes_nothing() {
        let scene = shipped::kitchen();
        let p = SpatialParams::default();
        let after = fire_affordances(&scene, &lf("slide(apple1, plate1)"), shipped::voxicon(), &p);
        assert_eq!(after, scene);
    }
}
