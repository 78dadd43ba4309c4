//! Core primitives shared by every layer of the stack: 3D vectors and yaw-only
//! poses, RGB/HSV color, camera and light descriptions, the tabletop workspace
//! volume, and a counter-based splittable RNG that makes every pipeline stage
//! independently reproducible.

#![forbid(unsafe_code)]

mod camera;
mod color;
mod light;
mod math;
mod rng;
mod workspace;

pub use camera::CameraSpec;
pub use color::{hsv_to_rgb, rgb_to_hsv, ColorHSV, ColorRGB};
pub use light::LightSpec;
pub use math::{normalize_yaw, Pose, Vec3};
pub use rng::{fnv1a64, RngStream};
pub use workspace::Workspace;
