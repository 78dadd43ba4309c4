//! Visual domain randomization: config types with the pinned parameter
//! ranges, per-factor samplers (light, object color, camera), procedural
//! texture families, texture libraries, whole-scene randomization, the 2D
//! image-augmentation baseline, and the world-to-scene bridge.

#![forbid(unsafe_code)]

mod augment;
mod config;
mod error;
mod library;
mod randomize;
mod samplers;
mod scenegen;
mod texture_gen;

pub use augment::{augment_color, augment_image, translate_replicate, ImgAugConfig};
pub use config::{
    DRConfig, TextureMode, NOMINAL_LIGHT_AZIMUTH, NOMINAL_LIGHT_COEFF, NOMINAL_LIGHT_DISTANCE,
    NOMINAL_LIGHT_POLAR,
};
pub use error::DomainRandError;
pub use library::{TextureLibrary, BUNDLED_TEXTURE_COUNT, HELD_OUT_TEXTURE_COUNT};
pub use randomize::randomize_scene;
pub use samplers::{sample_camera, sample_light, sample_object_color};
pub use scenegen::{
    default_cameras, finger_gap, tabletop_scene, transfer_appearance, SceneSetup,
    FINGER_GAP_CLOSED, FINGER_GAP_OPEN, GRIPPER_GROUP, PARTICLE_COLOR, PARTICLE_GROUP, SET_GROUP,
};
pub use texture_gen::{procedural_texture, TextureKind, TEXTURE_SIZE};
