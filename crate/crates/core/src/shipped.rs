//! The bundled voxicon and example scenes.

use std::sync::OnceLock;

use crate::io::{parse_scene, parse_voxicon};
use crate::spatial::SceneState;
use crate::voxicon::Voxicon;

/// Canonical text of the bundled voxicon.
pub const VOXICON: &str = include_str!("../data/voxicon.vox");

/// A table holding a plate, an apple and a block, with one agent beside it.
pub const KITCHEN_SCENE: &str = include_str!("../data/kitchen.scene");

/// A block resting on the floor, clear of the table.
pub const APART_SCENE: &str = include_str!("../data/apart.scene");

/// The bundled voxicon, parsed once.
pub fn voxicon() -> &'static Voxicon {
    static V: OnceLock<Voxicon> = OnceLock::new();
    V.get_or_init(|| parse_voxicon(VOXICON).expect("bundled voxicon parses"))
}

pub fn kitchen() -> SceneState {
    parse_scene(KITCHEN_SCENE).expect("bundled scene parses")
}

pub fn apart() -> SceneState {
    parse_scene(APART_SCENE).expect("bundled scene parses")
}
