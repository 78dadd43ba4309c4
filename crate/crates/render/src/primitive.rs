use crate::mesh::{Mesh, Vertex};
use drforge_scene::Vec3;

#[derive(Debug, thiserror::Error)]
pub enum PrimitiveError {
    #[error("invalid dims for {kind}: {msg}")]
    InvalidDims { kind: &'static str, msg: String },
}

/// Mesh primitives used by the tabletop scenes. Dimensions are full extents
/// in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrimitiveKind {
    /// Cube with side `dims.x` (y/z ignored).
    Cube,
    /// Box with extents `dims`.
    Box,
    /// Flat rectangle `dims.x` x `dims.y` facing +z at z = `dims.z`.
    Plane,
    /// Same geometry as `Plane`; markers are drawn slightly above the table.
    Marker,
    /// Square post, cross-section `dims.x` x `dims.x`, height `dims.z`,
    /// sitting on its base (local z in `[0, dims.z]`).
    Peg,
    /// Square plate `dims.x` outer side, `dims.y` hole side, `dims.z` thick,
    /// centered on its local origin; built from four bars.
    Nut,
    /// Broom: blade `dims.x` wide, `dims.y` thick, `dims.z` tall (blade
    /// centered at the local origin) with a 2x2 cm handle on top.
    Broom,
    /// Gripper finger: a thin box with extents `dims`.
    Finger,
}

/// Append a planar quad (two triangles) with a constant normal. Texture
/// coordinates are derived from the vertex positions so tiling stays in
/// meters like the box/plane primitives.
fn push_quad(mesh: &mut Mesh, corners: [Vec3; 4], normal: Vec3) {
    let u_axis = (corners[1] - corners[0]).normalized();
    let v_axis = normal.cross(u_axis);
    let vert = |p: Vec3| Vertex { position: p, normal, uv: [p.dot(u_axis), p.dot(v_axis)] };
    mesh.triangles.push([vert(corners[0]), vert(corners[1]), vert(corners[2])]);
    mesh.triangles.push([vert(corners[0]), vert(corners[2]), vert(corners[3])]);
}

fn positive(kind: &'static str, vals: &[(f64, &str)]) -> Result<(), PrimitiveError> {
    for (v, name) in vals {
        if !(*v > 0.0) {
            return Err(PrimitiveError::InvalidDims { kind, msg: format!("{name} = {v}") });
        }
    }
    Ok(())
}

/// Build a primitive mesh. See `PrimitiveKind` for how `dims` is read.
pub fn make_primitive(kind: PrimitiveKind, dims: Vec3) -> Result<Mesh, PrimitiveError> {
    match kind {
        PrimitiveKind::Cube => {
            positive("cube", &[(dims.x, "side")])?;
            Ok(Mesh::box_mesh(Vec3::new(dims.x, dims.x, dims.x), Vec3::ZERO))
        }
        PrimitiveKind::Box | PrimitiveKind::Finger => {
            positive("box", &[(dims.x, "x"), (dims.y, "y"), (dims.z, "z")])?;
            Ok(Mesh::box_mesh(dims, Vec3::ZERO))
        }
        PrimitiveKind::Plane | PrimitiveKind::Marker => {
            positive("plane", &[(dims.x, "x"), (dims.y, "y")])?;
            Ok(Mesh::quad_mesh(dims.x, dims.y, dims.z))
        }
        PrimitiveKind::Peg => {
            positive("peg", &[(dims.x, "side"), (dims.z, "height")])?;
            Ok(Mesh::box_mesh(
                Vec3::new(dims.x, dims.x, dims.z),
                Vec3::new(0.0, 0.0, dims.z / 2.0),
            ))
        }
        PrimitiveKind::Nut => {
            let (outer, hole, thick) = (dims.x, dims.y, dims.z);
            positive("nut", &[(outer, "outer"), (hole, "hole"), (thick, "thick")])?;
            if hole >= outer {
                return Err(PrimitiveError::InvalidDims {
                    kind: "nut",
                    msg: format!("hole {hole} must be smaller than outer {outer}"),
                });
            }
            let (o, i, t) = (outer / 2.0, hole / 2.0, thick / 2.0);
            let mut mesh = Mesh::default();
            // Top and bottom rings: four rectangles each (north/south bands
            // full-width, east/west bands between them).
            for (z, nz) in [(t, 1.0), (-t, -1.0)] {
                let n = Vec3::new(0.0, 0.0, nz);
                for (x0, x1, y0, y1) in [
                    (-o, o, i, o),   // north
                    (-o, o, -o, -i), // south
                    (-o, -i, -i, i), // west
                    (i, o, -i, i),   // east
                ] {
                    push_quad(
                        &mut mesh,
                        [
                            Vec3::new(x0, y0, z),
                            Vec3::new(x1, y0, z),
                            Vec3::new(x1, y1, z),
                            Vec3::new(x0, y1, z),
                        ],
                        n,
                    );
                }
            }
            // Outer walls (normals outward) and hole walls (normals toward
            // the hole axis).
            for (r, flip) in [(o, 1.0), (i, -1.0)] {
                for (n, u) in [
                    (Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)),
                    (Vec3::new(-1.0, 0.0, 0.0), Vec3::new(0.0, -1.0, 0.0)),
                    (Vec3::new(0.0, 1.0, 0.0), Vec3::new(-1.0, 0.0, 0.0)),
                    (Vec3::new(0.0, -1.0, 0.0), Vec3::new(1.0, 0.0, 0.0)),
                ] {
                    let c = n * r;
                    push_quad(
                        &mut mesh,
                        [
                            c + u * -r + Vec3::new(0.0, 0.0, -t),
                            c + u * r + Vec3::new(0.0, 0.0, -t),
                            c + u * r + Vec3::new(0.0, 0.0, t),
                            c + u * -r + Vec3::new(0.0, 0.0, t),
                        ],
                        n * flip,
                    );
                }
            }
            Ok(mesh)
        }
        PrimitiveKind::Broom => {
            let (width, thick, height) = (dims.x, dims.y, dims.z);
            positive("broom", &[(width, "width"), (thick, "thick"), (height, "height")])?;
            let mut mesh = Mesh::box_mesh(Vec3::new(width, thick, height), Vec3::ZERO);
            let handle_h = 0.10;
            mesh.triangles.extend(
                Mesh::box_mesh(
                    Vec3::new(0.02, 0.02, handle_h),
                    Vec3::new(0.0, 0.0, height / 2.0 + handle_h / 2.0),
                )
                .triangles,
            );
            Ok(mesh)
        }
    }
}
