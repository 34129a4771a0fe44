//! Desk-scale synthetic scenes and correspondence sets.

mod corr;
mod render;

pub use corr::{synth_correspondences, ConfidenceModel, CorrSpec};
pub use render::{render_scene, Placement, RenderedScene, SceneSpec};
