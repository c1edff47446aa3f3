//! Visual object concept modeling: voxemes and voxicons, qualitative spatial
//! reasoning over scenes, and an interpreter that simulates program voxemes.

#[macro_use]
mod macros;

pub mod interpreter;
pub mod io;
pub mod model;
pub mod shipped;
pub mod spatial;
pub mod voxicon;
