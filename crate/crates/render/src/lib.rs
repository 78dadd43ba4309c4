//! Software rasterizer for the tabletop scenes: pinhole projection, near-plane
//! clipping, z-buffered triangle fill with perspective-correct attributes,
//! per-pixel Phong shading, bilinear tiled textures, and 8-bit output with
//! round-half-up quantization. Everything is pure `f64` arithmetic in a fixed
//! traversal order, so identical scenes produce identical bytes.

#![forbid(unsafe_code)]

mod image;
mod mesh;
mod primitive;
mod raster;
mod scene;
mod texture;

pub use image::{quantize_channel, Image, ImageError};
pub use mesh::{Mesh, Vertex};
pub use primitive::{make_primitive, PrimitiveError, PrimitiveKind};
pub use raster::{project, render, render_linear, NEAR_PLANE, SPECULAR_EXPONENT};
pub use scene::{BaseColor, Instance, Material, Scene, SurfaceTag};
pub use texture::Texture;
