use super::habitat::check_habitat;
use super::region::Region;
use super::scene::{world_box, SceneObject, SceneState};
use super::{SpatialError, SpatialParams};
use crate::model::{Axis, Concavity, ObjectVoxeme};

/// Habitat label naming the upright-support constraints.
pub const SUPPORT_LABEL: &str = "UP";

/// The horizontal patch on which a figure comes to rest for `relation`
/// applied to `ground`. Only `on` is defined.
///
/// When the ground has a voxeme, its `UP` constraints must hold; a concave
/// ground supports from the bottom of its hollow rather than from its rim.
pub fn placement_region(
    relation: &str,
    ground: &SceneObject,
    voxeme: Option<&ObjectVoxeme>,
    scene: &SceneState,
    params: &SpatialParams,
) -> Result<Region, SpatialError> {
    if relation != "on" {
        return Err(SpatialError::UnsupportedRelation(relation.to_string()));
    }
    if let Some(v) = voxeme {
        let upright = v
            .habitat
            .labeled(SUPPORT_LABEL)
            .all(|c| check_habitat(c, ground, scene, params));
        if !upright {
            return Err(SpatialError::SupportUnsatisfied(ground.id.clone()));
        }
    }
    let b = world_box(ground);
    let mut patch = b.face(Axis::Y, true);
    if voxeme.map(|v| v.ty.concavity) == Some(Concavity::Concave) {
        let depth = params.depth_fraction * b.extents().y;
        patch.min.y -= depth;
        patch.max.y -= depth;
        for axis in [Axis::X, Axis::Z] {
            let inset = params.inset_fraction * b.extents().get(axis);
            patch.min.set(axis, b.min.get(axis) + inset);
            patch.max.set(axis, b.max.get(axis) - inset);
        }
    }
    Ok(Region::from_box(patch))
}
