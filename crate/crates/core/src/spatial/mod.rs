//! Scene geometry and qualitative spatial reasoning over world-axis-aligned
//! boxes.

pub mod geometry;
pub mod habitat;
pub mod placement;
pub mod rcc8;
pub mod region;
pub mod scene;
pub mod symmetry;

use thiserror::Error;

pub use geometry::{distance, Aabb, Mat3, Vec3};
pub use habitat::{check_group, check_habitat};
pub use placement::placement_region;
pub use rcc8::{rcc8, Rcc8Value};
pub use region::{eval_spatial_function, Region};
pub use scene::{
    embodiment_scale, minimal_embedding_space, world_box, SceneObject, SceneState, AGENT_HEIGHT,
};
pub use symmetry::{check_symmetry_claims, head_proxy, SymmetryReport};

/// Tolerances and thresholds shared by the spatial checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialParams {
    /// Contact tolerance for RCC-8, in world units.
    pub eps: f64,
    /// Alignment tolerance, in degrees.
    pub align_tol_deg: f64,
    /// `a << b` holds when `extent(a) <= ratio * extent(b)`.
    pub ratio: f64,
    /// How far below its rim a concave support sits, as a fraction of the Y extent.
    pub depth_fraction: f64,
    /// Per-side shrink of a concave support patch, as a fraction of its span.
    pub inset_fraction: f64,
}

impl Default for SpatialParams {
    fn default() -> Self {
        SpatialParams {
            eps: 1e-6,
            align_tol_deg: 5.0,
            ratio: 0.25,
            depth_fraction: 0.5,
            inset_fraction: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpatialError {
    #[error("empty scene: no objects to embed")]
    EmptyScene,
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("unsupported mapping: {0}")]
    UnsupportedMapping(String),
    #[error("axis {0} is degenerate for a {1}-dimensional region")]
    DegenerateAxis(String, u8),
    #[error("support habitat unsatisfied for `{0}`")]
    SupportUnsatisfied(String),
    #[error("no placement rule for relation `{0}`")]
    UnsupportedRelation(String),
}
