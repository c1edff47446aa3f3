use std::collections::{BTreeMap, BTreeSet};

use super::geometry::{Aabb, Mat3, Vec3};
use super::rcc8::{rcc8, Rcc8Value};
use super::SpatialError;
use crate::io::term::Term;
use crate::model::EmbodimentScale;

/// Reference height of the in-world agent, in world units.
pub const AGENT_HEIGHT: f64 = 1.8;

#[derive(Debug, Clone, PartialEq)]
pub struct SceneObject {
    pub id: String,
    pub pred: String,
    /// Box center.
    pub position: Vec3,
    /// Extrinsic Euler angles in degrees, applied Z, X, Y.
    pub rotation: Vec3,
    /// Full box dimensions before rotation.
    pub extents: Vec3,
    pub attached_to: Option<String>,
    /// The scene's designated agent.
    pub agent: bool,
}

impl SceneObject {
    pub fn new(id: &str, pred: &str, position: Vec3, extents: Vec3) -> Self {
        SceneObject {
            id: id.to_string(),
            pred: pred.to_string(),
            position,
            rotation: Vec3::ZERO,
            extents,
            attached_to: None,
            agent: false,
        }
    }

    pub fn with_rotation(mut self, rotation: Vec3) -> Self {
        self.rotation = rotation;
        self
    }

    pub fn rotation_matrix(&self) -> Mat3 {
        Mat3::from_euler_deg(self.rotation)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SceneState {
    pub objects: BTreeMap<String, SceneObject>,
    /// Asserted ground facts such as `hold(agent1, apple1)`.
    pub facts: BTreeSet<Term>,
    pub tick: u64,
}

impl SceneState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, obj: SceneObject) {
        self.objects.insert(obj.id.clone(), obj);
    }

    pub fn get(&self, id: &str) -> Option<&SceneObject> {
        self.objects.get(id)
    }

    pub fn agents(&self) -> impl Iterator<Item = &SceneObject> {
        self.objects.values().filter(|o| o.agent)
    }

    /// Instances whose voxeme predicate is `pred`.
    pub fn instances_of<'a>(&'a self, pred: &'a str) -> impl Iterator<Item = &'a SceneObject> {
        self.objects.values().filter(move |o| o.pred == pred)
    }

    /// Objects rigidly carried by `id`, transitively, excluding `id`.
    pub fn carried_by(&self, id: &str) -> Vec<String> {
        let mut out = Vec::new();
        let mut frontier = vec![id.to_string()];
        while let Some(holder) = frontier.pop() {
            for o in self.objects.values() {
                if o.attached_to.as_deref() == Some(holder.as_str())
                    && !out.contains(&o.id)
                    && o.id != id
                {
                    out.push(o.id.clone());
                    frontier.push(o.id.clone());
                }
            }
        }
        out.sort();
        out
    }

    /// Whether following `attached_to` links from any object revisits it.
    pub fn has_attachment_cycle(&self) -> bool {
        self.objects.values().any(|start| {
            let mut cur = start.attached_to.as_deref();
            let mut steps = 0;
            while let Some(id) = cur {
                if id == start.id || steps > self.objects.len() {
                    return true;
                }
                steps += 1;
                cur = self.objects.get(id).and_then(|o| o.attached_to.as_deref());
            }
            false
        })
    }

    /// Pairwise RCC-8 facts other than DC, for ids in lexicographic order.
    pub fn relation_facts(&self, eps: f64) -> Vec<Term> {
        let boxes: Vec<(&str, Aabb)> = self
            .objects
            .values()
            .map(|o| (o.id.as_str(), world_box(o)))
            .collect();
        let mut out = Vec::new();
        for (i, (a, ba)) in boxes.iter().enumerate() {
            for (b, bb) in &boxes[i + 1..] {
                let r = rcc8(ba, bb, eps);
                if r != Rcc8Value::DC {
                    out.push(Term::apply(r.as_str(), vec![Term::sym(*a), Term::sym(*b)]));
                }
            }
        }
        out
    }
}

/// Axis-aligned box enclosing the object's rotated extents.
pub fn world_box(obj: &SceneObject) -> Aabb {
    let Mat3(r) = obj.rotation_matrix();
    let h = obj.extents * 0.5;
    let reach = |row: [f64; 3]| row[0].abs() * h.x + row[1].abs() * h.y + row[2].abs() * h.z;
    let half = Vec3::new(reach(r[0]), reach(r[1]), reach(r[2]));
    Aabb::new(obj.position - half, obj.position + half)
}

/// Union of the objects' world boxes, grown by `margin` on every side.
pub fn minimal_embedding_space(objects: &[SceneObject], margin: f64) -> Result<Aabb, SpatialError> {
    if margin < 0.0 || !margin.is_finite() {
        return Err(SpatialError::BadParameter(format!(
            "margin must be >= 0, got {margin}"
        )));
    }
    objects
        .iter()
        .map(world_box)
        .reduce(|a, b| a.union(&b))
        .map(|b| b.inflate(margin))
        .ok_or(SpatialError::EmptyScene)
}

/// Qualitative size of an object against the reference agent: below half the
/// agent's height is smaller, above one and a half times it is larger.
pub fn embodiment_scale(extents: Vec3, agent_height: f64) -> EmbodimentScale {
    let size = extents.x.max(extents.y).max(extents.z);
    if size < 0.5 * agent_height {
        EmbodimentScale::SmallerThanAgent
    } else if size > 1.5 * agent_height {
        EmbodimentScale::LargerThanAgent
    } else {
        EmbodimentScale::AgentSized
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_object_box() {
        let o = SceneObject::new("c", "cube", Vec3::ZERO, Vec3::splat(1.0));
        assert_eq!(
            world_box(&o),
            Aabb::new(Vec3::splat(-0.5), Vec3::splat(0.5))
        );
    }

    #[test]
    fn wall_box_spans() {
        let o = SceneObject::new("w", "wall", Vec3::ZERO, Vec3::new(4.0, 3.0, 0.2));
        let b = world_box(&o);
        assert_eq!(b.extents().y, 3.0);
        assert_eq!(b.extents().x, 4.0);
    }

    #[test]
    fn quarter_turn_is_exact() {
        let o = SceneObject::new("w", "wall", Vec3::ZERO, Vec3::new(4.0, 3.0, 0.2))
            .with_rotation(Vec3::new(0.0, 90.0, 0.0));
        let b = world_box(&o);
        assert_eq!(b.extents(), Vec3::new(0.2, 3.0, 4.0));
        assert_eq!(b.center(), Vec3::ZERO);
    }

    #[test]
    fn eighth_turn_encloses_corners() {
        // oracle: corners of the unit cube rotated 45 degrees about Y land at
        // x, z in {+-sqrt(2)/2}
        let o = SceneObject::new("c", "cube", Vec3::ZERO, Vec3::splat(1.0))
            .with_rotation(Vec3::new(0.0, 45.0, 0.0));
        let e = world_box(&o).extents();
        assert!((e.x - 2f64.sqrt()).abs() < 1e-12);
        assert!((e.z - 2f64.sqrt()).abs() < 1e-12);
        assert!((e.y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mes_examples() {
        let a = SceneObject::new("a", "cube", Vec3::ZERO, Vec3::splat(1.0));
        assert_eq!(
            minimal_embedding_space(std::slice::from_ref(&a), 0.0).unwrap(),
            Aabb::new(Vec3::splat(-0.5), Vec3::splat(0.5))
        );
        let b = SceneObject::new("b", "cube", Vec3::new(3.0, 0.0, 0.0), Vec3::splat(1.0));
        let mes = minimal_embedding_space(&[a, b], 0.0).unwrap();
        assert_eq!((mes.min.x, mes.max.x), (-0.5, 3.5));
        assert_eq!(
            minimal_embedding_space(&[], 0.0),
            Err(SpatialError::EmptyScene)
        );
    }

    #[test]
    fn embodiment_against_agent() {
        assert_eq!(
            embodiment_scale(Vec3::new(4.0, 3.0, 0.2), AGENT_HEIGHT),
            EmbodimentScale::LargerThanAgent
        );
        assert_eq!(
            embodiment_scale(Vec3::new(2.0, 0.8, 1.2), AGENT_HEIGHT),
            EmbodimentScale::AgentSized
        );
        assert_eq!(
            embodiment_scale(Vec3::new(0.3, 0.04, 0.3), AGENT_HEIGHT),
            EmbodimentScale::SmallerThanAgent
        );
    }

    fn arb_object(id: usize) -> impl Strategy<Value = SceneObject> {
        (
            (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64),
            (0.01..3.0f64, 0.01..3.0f64, 0.01..3.0f64),
            (-180.0..180.0f64, -180.0..180.0f64, -180.0..180.0f64),
        )
            .prop_map(move |(p, e, r)| {
                SceneObject::new(
                    &format!("o{id}"),
                    "thing",
                    Vec3::new(p.0, p.1, p.2),
                    Vec3::new(e.0, e.1, e.2),
                )
                .with_rotation(Vec3::new(r.0, r.1, r.2))
            })
    }

    fn arb_objects() -> impl Strategy<Value = Vec<SceneObject>> {
        prop::collection::vec(arb_object(0), 1..6).prop_map(|mut v| {
            for (i, o) in v.iter_mut().enumerate() {
                o.id = format!("o{i}");
            }
            v
        })
    }

    proptest! {
        #[test]
        fn mes_with_margin_strictly_contains_every_box(objs in arb_objects()) {
            let mes = minimal_embedding_space(&objs, 1.0).unwrap();
            for o in &objs {
                prop_assert!(mes.strictly_contains(&world_box(o)));
            }
        }

        #[test]
        fn mes_is_monotone(objs in arb_objects(), extra in arb_object(99), margin in 0.0..2.0f64) {
            let before = minimal_embedding_space(&objs, margin).unwrap();
            let mut more = objs.clone();
            more.push(extra);
            let after = minimal_embedding_space(&more, margin).unwrap();
            prop_assert!(after.contains(&before));
        }
    }
}
