use std::fmt;

use super::geometry::{Aabb, Mat3, Vec3};
use super::SpatialError;
use crate::model::{Axis, FunctionVoxeme, SignedAxis, Space};

/// A region of 0 to 3 dimensions. Every carrier is a closed axis-aligned box
/// that is degenerate along the missing dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Point(Vec3),
    Segment(Aabb),
    Patch(Aabb),
    Box(Aabb),
}

impl Region {
    /// Classifies a box by how many of its axes have positive extent.
    pub fn from_box(b: Aabb) -> Region {
        let spans = Axis::ALL
            .iter()
            .filter(|&&a| b.extents().get(a) > 0.0)
            .count();
        match spans {
            0 => Region::Point(b.min),
            1 => Region::Segment(b),
            2 => Region::Patch(b),
            _ => Region::Box(b),
        }
    }

    pub fn dimension(&self) -> u8 {
        match self {
            Region::Point(_) => 0,
            Region::Segment(_) => 1,
            Region::Patch(_) => 2,
            Region::Box(_) => 3,
        }
    }

    pub fn bounds(&self) -> Aabb {
        match *self {
            Region::Point(p) => Aabb::new(p, p),
            Region::Segment(b) | Region::Patch(b) | Region::Box(b) => b,
        }
    }

    pub fn center(&self) -> Vec3 {
        self.bounds().center()
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Point(p) => write!(f, "point {p}"),
            Region::Segment(b) => write!(f, "segment {b}"),
            Region::Patch(b) => write!(f, "patch {b}"),
            Region::Box(b) => write!(f, "box {b}"),
        }
    }
}

/// Applies a dimension-reducing function in world space.
pub fn eval_spatial_function(f: &FunctionVoxeme, target: &Region) -> Result<Region, SpatialError> {
    eval_spatial_function_in(f, target, &Mat3::IDENTITY)
}

/// Applies a dimension-reducing function; for object-space functions the
/// signed axis is first carried through `rotation`.
pub fn eval_spatial_function_in(
    f: &FunctionVoxeme,
    target: &Region,
    rotation: &Mat3,
) -> Result<Region, SpatialError> {
    if f.mapping.reduce_by != 1 {
        return Err(SpatialError::UnsupportedMapping(format!(
            "dimension(n):n-{}",
            f.mapping.reduce_by
        )));
    }
    let axis = match f.orientation.space {
        Space::World => f.orientation.axis,
        Space::Object => rotate_signed_axis(f.orientation.axis, rotation)?,
    };
    extremal_element(target, axis)
}

/// The boundary element of `target` extremal along `axis`.
pub fn extremal_element(target: &Region, axis: SignedAxis) -> Result<Region, SpatialError> {
    let n = target.dimension();
    let b = target.bounds();
    if n == 0 || b.extents().get(axis.axis) <= 0.0 {
        return Err(SpatialError::DegenerateAxis(axis.to_string(), n));
    }
    Ok(Region::from_box(b.face(axis.axis, axis.positive)))
}

fn rotate_signed_axis(axis: SignedAxis, rotation: &Mat3) -> Result<SignedAxis, SpatialError> {
    let v = rotation.apply(Vec3::unit(axis.axis) * axis.sign());
    Axis::ALL
        .iter()
        .find_map(|&a| {
            let c = v.get(a);
            ((c.abs() - 1.0).abs() < 1e-9).then(|| SignedAxis::new(a, c > 0.0))
        })
        .ok_or_else(|| {
            SpatialError::BadParameter(format!(
                "object axis {axis} is not aligned with any world axis"
            ))
        })
}
