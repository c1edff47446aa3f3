use super::geometry::Aabb;
use crate::model::Axis;

token_enum! {
    /// The eight jointly exhaustive, pairwise disjoint region relations.
    Rcc8Value, "RCC-8 value" {
        DC => "DC",
        EC => "EC",
        PO => "PO",
        TPP => "TPP",
        NTPP => "NTPP",
        TPPi => "TPPi",
        NTPPi => "NTPPi",
        EQ => "EQ",
    }
}

impl Rcc8Value {
    /// The relation seen from the other region.
    pub fn converse(self) -> Rcc8Value {
        match self {
            Rcc8Value::TPP => Rcc8Value::TPPi,
            Rcc8Value::TPPi => Rcc8Value::TPP,
            Rcc8Value::NTPP => Rcc8Value::NTPPi,
            Rcc8Value::NTPPi => Rcc8Value::NTPP,
            other => other,
        }
    }
}

/// Classifies two boxes. Coordinates within `eps` of each other count as
/// coincident, so faces that nearly meet are touching.
pub fn rcc8(a: &Aabb, b: &Aabb, eps: f64) -> Rcc8Value {
    let mut connected = true;
    let mut interiors_meet = true;
    for &axis in Axis::ALL {
        let overlap = a.max.get(axis).min(b.max.get(axis)) - a.min.get(axis).max(b.min.get(axis));
        if overlap < -eps {
            connected = false;
        }
        if overlap <= eps {
            interiors_meet = false;
        }
    }
    if !connected {
        return Rcc8Value::DC;
    }
    if !interiors_meet {
        return Rcc8Value::EC;
    }
    let within = |inner: &Aabb, outer: &Aabb| {
        Axis::ALL.iter().all(|&x| {
            inner.min.get(x) >= outer.min.get(x) - eps && inner.max.get(x) <= outer.max.get(x) + eps
        })
    };
    let touches_face = Axis::ALL.iter().any(|&x| {
        (a.min.get(x) - b.min.get(x)).abs() <= eps || (a.max.get(x) - b.max.get(x)).abs() <= eps
    });
    match (within(a, b), within(b, a)) {
        (true, true) => Rcc8Value::EQ,
        (true, false) if touches_face => Rcc8Value::TPP,
        (true, false) => Rcc8Value::NTPP,
        (false, true) if touches_face => Rcc8Value::TPPi,
        (false, true) => Rcc8Value::NTPPi,
        (false, false) => Rcc8Value::PO,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spatial::Vec3;

    fn cube(c: Vec3) -> Aabb {
        Aabb::from_center_extents(c, Vec3::splat(1.0))
    }

    #[test]
    fn adjacent_unit_cubes_touch() {
        assert_eq!(
            rcc8(&cube(Vec3::ZERO), &cube(Vec3::new(1.0, 0.0, 0.0)), 1e-6),
            Rcc8Value::EC
        );
    }

    #[test]
    fn identical_boxes_are_equal() {
        let b = cube(Vec3::new(0.3, -1.0, 2.0));
        assert_eq!(rcc8(&b, &b, 1e-6), Rcc8Value::EQ);
    }

    #[test]
    fn proper_containment_off_boundary() {
        let outer = Aabb::new(Vec3::splat(-1.0), Vec3::splat(1.0));
        let inner = Aabb::new(Vec3::splat(-0.4), Vec3::splat(0.4));
        assert_eq!(rcc8(&outer, &inner, 1e-6), Rcc8Value::NTPPi);
        assert_eq!(rcc8(&inner, &outer, 1e-6), Rcc8Value::NTPP);
    }

    #[test]
    fn near_contact_within_tolerance() {
        let a = cube(Vec3::ZERO);
        let b = cube(Vec3::new(1.0 + 5e-7, 0.0, 0.0));
        assert_eq!(rcc8(&a, &b, 1e-6), Rcc8Value::EC);
        assert_eq!(rcc8(&a, &b, 1e-7), Rcc8Value::DC);
        let c = cube(Vec3::new(1.0 - 5e-7, 0.0, 0.0));
        assert_eq!(rcc8(&a, &c, 1e-6), Rcc8Value::EC);
        assert_eq!(rcc8(&a, &c, 1e-7), Rcc8Value::PO);
    }

    #[test]
    fn converse_is_an_involution() {
        for &v in Rcc8Value::ALL {
            assert_eq!(v.converse().converse(), v);
        }
    }
}
