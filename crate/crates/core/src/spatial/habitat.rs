use super::geometry::Vec3;
use super::scene::{SceneObject, SceneState};
use super::SpatialParams;
use crate::io::term::Term;
use crate::model::{Axis, HabitatConstraint, HabitatGroup, SignedAxis};

/// Angle in degrees between two unit vectors.
fn angle_deg(a: Vec3, b: Vec3) -> f64 {
    a.dot(b).clamp(-1.0, 1.0).acos().to_degrees()
}

fn signed(axis: SignedAxis) -> Vec3 {
    Vec3::unit(axis.axis) * axis.sign()
}

/// Instantiates a component predicate for one object: every symbol `s`
/// becomes `s(id)`, so `clear(seat)` on `chair1` reads `clear(seat(chair1))`.
pub fn instantiate_predicate(term: &Term, obj_id: &str) -> Term {
    match term {
        Term::Apply { pred, args } => Term::apply(
            pred.clone(),
            args.iter()
                .map(|a| instantiate_predicate(a, obj_id))
                .collect(),
        ),
        t => match t.as_symbol() {
            Some(s) => Term::apply(s, vec![Term::sym(obj_id)]),
            None => t.clone(),
        },
    }
}

/// Evaluates one habitat constraint for `obj` as placed in `scene`.
pub fn check_habitat(
    c: &HabitatConstraint,
    obj: &SceneObject,
    scene: &SceneState,
    params: &SpatialParams,
) -> bool {
    let r = obj.rotation_matrix();
    match c {
        HabitatConstraint::Align {
            object_axis,
            embedding_axis,
        } => {
            let local = r.apply(Vec3::unit(*object_axis));
            angle_deg(local, Vec3::unit(*embedding_axis)) <= params.align_tol_deg
        }
        HabitatConstraint::FaceLabel { direction, .. } => {
            angle_deg(r.apply(signed(*direction)), signed(*direction)) <= params.align_tol_deg
        }
        HabitatConstraint::RelativeDim { lesser, greater } => {
            extent(obj, *lesser) <= params.ratio * extent(obj, *greater)
        }
        HabitatConstraint::Predicate(t) => {
            let inst = instantiate_predicate(t, &obj.id);
            match (inst.pred(), inst.args()) {
                (Some("clear"), [part]) => !scene
                    .facts
                    .contains(&Term::apply("occupied", vec![part.clone()])),
                _ => scene.facts.contains(&inst),
            }
        }
    }
}

fn extent(obj: &SceneObject, axis: Axis) -> f64 {
    obj.extents.get(axis)
}

/// A habitat holds when every one of its constraints does.
pub fn check_group(
    group: &HabitatGroup,
    obj: &SceneObject,
    scene: &SceneState,
    params: &SpatialParams,
) -> bool {
    group
        .constraints()
        .all(|(_, c)| check_habitat(c, obj, scene, params))
}
