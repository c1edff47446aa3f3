//! Confirms declared symmetry against a coarse box proxy of the head shape.
//!
//! A proxy is a set of labeled boxes in the object's local frame, centered on
//! the origin. Box-like heads are a single box. Heads that taper toward +Y are
//! a full-width lower half under a narrowed upper half, and a sheet carries a
//! distinguished top layer. A symmetry holds when the transform maps every
//! labeled part onto a part with the same label.

use super::geometry::{Aabb, Mat3, Vec3};
use crate::model::{canonicalize_head, Axis, HeadShape, ObjectVoxeme, Plane, Symmetry};

#[derive(Debug, Clone, PartialEq)]
pub struct ProxyPart {
    pub label: &'static str,
    pub bounds: Aabb,
}

/// Box proxy of `head` with overall dimensions `extents`.
pub fn head_proxy(head: HeadShape, extents: Vec3) -> Vec<ProxyPart> {
    use HeadShape::*;
    let h = extents * 0.5;
    let part = |label, min: Vec3, max: Vec3| ProxyPart {
        label,
        bounds: Aabb::new(min, max),
    };
    match head {
        Prismatoid | Parallelepiped | Cylindroid | Ellipsoid | Bipyramid | RectangularPrism
        | Toroid => vec![part("body", -h, h)],
        Pyramid | Cupola | Frustum | Hemiellipsoid | Wedge => {
            let narrow_x = if head == Wedge { h.x } else { h.x * 0.5 };
            let narrow_z = h.z * 0.5;
            vec![
                part("base", -h, Vec3::new(h.x, 0.0, h.z)),
                part(
                    "cap",
                    Vec3::new(-narrow_x, 0.0, -narrow_z),
                    Vec3::new(narrow_x, h.y, narrow_z),
                ),
            ]
        }
        Sheet => {
            let split = h.y - 0.1 * extents.y;
            vec![
                part("body", -h, Vec3::new(h.x, split, h.z)),
                part("top", Vec3::new(-h.x, split, -h.z), h),
            ]
        }
    }
}

fn reflection(plane: Plane) -> Mat3 {
    let mut m = Mat3::IDENTITY;
    let i = plane.normal().index();
    m.0[i][i] = -1.0;
    m
}

fn transform(b: &Aabb, m: &Mat3) -> Aabb {
    let corners = [b.min.x, b.max.x].into_iter().flat_map(|x| {
        [b.min.y, b.max.y].into_iter().flat_map(move |y| {
            [b.min.z, b.max.z]
                .into_iter()
                .map(move |z| Vec3::new(x, y, z))
        })
    });
    Aabb::enclosing(corners.map(|c| m.apply(c))).expect("eight corners")
}

fn invariant(parts: &[ProxyPart], m: &Mat3, tol: f64) -> bool {
    parts.iter().all(|p| {
        let moved = transform(&p.bounds, m);
        parts
            .iter()
            .any(|q| q.label == p.label && q.bounds.approx_eq(&moved, tol))
    })
}

/// Outcome of checking a voxeme's declared symmetry against its proxy.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SymmetryReport {
    pub confirmed_axes: Vec<Axis>,
    pub unsupported_axes: Vec<Axis>,
    /// Confirmed axes that also admit a quarter turn.
    pub quarter_turn_axes: Vec<Axis>,
    pub confirmed_planes: Vec<Plane>,
    pub unsupported_planes: Vec<Plane>,
}

impl SymmetryReport {
    pub fn all_confirmed(&self) -> bool {
        self.unsupported_axes.is_empty() && self.unsupported_planes.is_empty()
    }
}

/// The symmetry a proxy exhibits: half turns about each axis and mirror
/// images across each plane.
pub fn proxy_symmetry(parts: &[ProxyPart], tol: f64) -> Symmetry {
    Symmetry {
        rotational: Axis::ALL
            .iter()
            .copied()
            .filter(|&a| invariant(parts, &Mat3::about(a, 180.0), tol))
            .collect(),
        reflection: Plane::ALL
            .iter()
            .copied()
            .filter(|&p| invariant(parts, &reflection(p), tol))
            .collect(),
    }
}

/// Checks each declared rotational axis by a half turn and each reflection
/// plane by mirroring, on the proxy of the canonical head at `extents`.
/// A quarter turn is also tried when the two extents orthogonal to an axis
/// agree within `tol`.
pub fn check_symmetry_claims(v: &ObjectVoxeme, extents: Vec3, tol: f64) -> SymmetryReport {
    let head = canonicalize_head(v.ty.head.shape, &v.ty.reflect_sym);
    let parts = head_proxy(head, extents);
    let mut report = SymmetryReport::default();
    for &a in &v.ty.rotat_sym {
        if invariant(&parts, &Mat3::about(a, 180.0), tol) {
            report.confirmed_axes.push(a);
            let others: Vec<f64> = Axis::ALL
                .iter()
                .filter(|&&o| o != a)
                .map(|&o| extents.get(o))
                .collect();
            if (others[0] - others[1]).abs() <= tol && invariant(&parts, &Mat3::about(a, 90.0), tol)
            {
                report.quarter_turn_axes.push(a);
            }
        } else {
            report.unsupported_axes.push(a);
        }
    }
    for &p in &v.ty.reflect_sym {
        if invariant(&parts, &reflection(p), tol) {
            report.confirmed_planes.push(p);
        } else {
            report.unsupported_planes.push(p);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{primitive_symmetry, Voxeme, VoxemeKind};
    use crate::shipped;

    fn object(pred: &str) -> ObjectVoxeme {
        shipped::voxicon()
            .lookup(pred, VoxemeKind::Object)
            .and_then(Voxeme::as_object)
            .cloned()
            .unwrap()
    }

    #[test]
    fn table_claims_hold() {
        let r = check_symmetry_claims(&object("table"), Vec3::new(2.0, 1.0, 1.2), 1e-9);
        assert!(r.all_confirmed(), "{r:?}");
        assert_eq!(r.confirmed_axes, vec![Axis::Y]);
        assert!(r.quarter_turn_axes.is_empty());
    }

    #[test]
    fn sphere_turns_freely() {
        let mut apple = object("apple");
        apple.ty.rotat_sym = vec![Axis::X, Axis::Y, Axis::Z];
        let r = check_symmetry_claims(&apple, Vec3::splat(1.0), 1e-9);
        assert!(r.all_confirmed());
        assert_eq!(r.quarter_turn_axes, vec![Axis::X, Axis::Y, Axis::Z]);
    }

    #[test]
    fn frustum_is_not_mirrored_top_to_bottom() {
        let mut v = object("table");
        v.ty.head.shape = HeadShape::Frustum;
        v.ty.head.coindex = None;
        v.ty.reflect_sym = vec![Plane::XZ, Plane::YZ];
        let r = check_symmetry_claims(&v, Vec3::new(1.0, 1.0, 1.0), 1e-9);
        assert_eq!(r.unsupported_planes, vec![Plane::XZ]);
        assert_eq!(r.confirmed_planes, vec![Plane::YZ]);
    }

    #[test]
    fn wall_half_turns_hold_quarter_turns_do_not() {
        let r = check_symmetry_claims(&object("wall"), Vec3::new(4.0, 3.0, 0.2), 1e-9);
        assert!(r.all_confirmed());
        assert!(r.quarter_turn_axes.is_empty());
    }

    #[test]
    fn proxies_reproduce_the_primitive_table() {
        // generic proportions, no accidental equalities
        let e = Vec3::new(1.3, 0.7, 1.9);
        for &h in HeadShape::ALL {
            assert_eq!(
                proxy_symmetry(&head_proxy(h, e), 1e-9),
                primitive_symmetry(h),
                "{h}"
            );
        }
    }
}
