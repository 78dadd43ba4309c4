use crate::image::{quantize_channel, Image};
use crate::scene::{BaseColor, Instance, Scene};
use drforge_scene::{CameraSpec, Vec3};

/// Geometry closer than this camera-space depth (meters) is clipped.
pub const NEAR_PLANE: f64 = 0.01;

/// Specular exponent of the Phong highlight.
pub const SPECULAR_EXPONENT: i32 = 16;

/// Project a world point through the camera. Returns `(px, py, depth)` in
/// pixel coordinates (origin top-left, x right, y down) or `None` when the
/// point is not strictly in front of the camera. The vertical field of view
/// maps to the image height: `f = (height/2) / tan(fov_y/2)`.
pub fn project(
    camera: &CameraSpec,
    width: usize,
    height: usize,
    world: Vec3,
) -> Option<(f64, f64, f64)> {
    let (right, up, forward) = camera.basis();
    let rel = world - camera.position;
    let z = rel.dot(forward);
    if z <= 0.0 {
        return None;
    }
    let x = rel.dot(right);
    let y = rel.dot(up);
    let f = (height as f64 / 2.0) / (camera.fov_y_rad / 2.0).tan();
    let px = width as f64 / 2.0 + f * x / z;
    let py = height as f64 / 2.0 - f * y / z;
    Some((px, py, z))
}

/// One vertex mid-pipeline: camera-space position plus the attributes that
/// get perspective-correct interpolation.
#[derive(Debug, Clone, Copy)]
struct ClipVertex {
    cam: Vec3,
    world: Vec3,
    normal: Vec3,
    uv: [f64; 2],
}

fn lerp_vertex(a: &ClipVertex, b: &ClipVertex, t: f64) -> ClipVertex {
    ClipVertex {
        cam: a.cam + (b.cam - a.cam) * t,
        world: a.world + (b.world - a.world) * t,
        normal: a.normal + (b.normal - a.normal) * t,
        uv: [a.uv[0] + (b.uv[0] - a.uv[0]) * t, a.uv[1] + (b.uv[1] - a.uv[1]) * t],
    }
}

/// Clip a polygon against the near plane `cam.z >= NEAR_PLANE`
/// (Sutherland-Hodgman).
fn clip_near(poly: &[ClipVertex]) -> Vec<ClipVertex> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let a = &poly[i];
        let b = &poly[(i + 1) % poly.len()];
        let da = a.cam.z - NEAR_PLANE;
        let db = b.cam.z - NEAR_PLANE;
        if da >= 0.0 {
            out.push(*a);
            if db < 0.0 {
                out.push(lerp_vertex(a, b, da / (da - db)));
            }
        } else if db >= 0.0 {
            out.push(lerp_vertex(a, b, da / (da - db)));
        }
    }
    out
}

struct Framebuffer {
    width: usize,
    height: usize,
    color: Vec<[f64; 3]>,
    depth: Vec<f64>,
}

fn shade(
    scene: &Scene,
    instance: &Instance,
    camera_pos: Vec3,
    world: Vec3,
    normal: Vec3,
    uv: [f64; 2],
) -> [f64; 3] {
    let base = match &instance.material.base {
        BaseColor::Solid(c) => *c,
        BaseColor::Textured(t) => {
            t.sample(uv[0] * instance.material.uv_scale, uv[1] * instance.material.uv_scale)
        }
    };
    let view = (camera_pos - world).normalized();
    let mut n = normal.normalized();
    // Two-sided shading: light the face that is visible.
    if n.dot(view) < 0.0 {
        n = -n;
    }
    let mut r = scene.ambient * base.r;
    let mut g = scene.ambient * base.g;
    let mut b = scene.ambient * base.b;
    for light in &scene.lights {
        let l = (light.position - world).normalized();
        let ndotl = n.dot(l).max(0.0);
        if ndotl > 0.0 {
            r += light.diffuse * ndotl * base.r;
            g += light.diffuse * ndotl * base.g;
            b += light.diffuse * ndotl * base.b;
        }
        // Phong highlight, white (not tinted by the surface).
        let refl = n * (2.0 * n.dot(l)) - l;
        let rdotv = refl.dot(view).max(0.0);
        if rdotv > 0.0 && ndotl > 0.0 {
            let s = light.specular * rdotv.powi(SPECULAR_EXPONENT);
            r += s;
            g += s;
            b += s;
        }
    }
    [r, g, b]
}

fn raster_triangle(
    fb: &mut Framebuffer,
    scene: &Scene,
    instance: &Instance,
    camera_pos: Vec3,
    f: f64,
    tri: &[ClipVertex; 3],
) {
    let (w, h) = (fb.width as f64, fb.height as f64);
    // Screen positions.
    let sp: Vec<(f64, f64, f64)> = tri
        .iter()
        .map(|v| {
            let inv_z = 1.0 / v.cam.z;
            (w / 2.0 + f * v.cam.x * inv_z, h / 2.0 - f * v.cam.y * inv_z, inv_z)
        })
        .collect();
    let (x0, y0, iz0) = sp[0];
    let (x1, y1, iz1) = sp[1];
    let (x2, y2, iz2) = sp[2];
    let area = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0);
    if area.abs() < 1e-12 {
        return;
    }
    // Normalize to a positive area by swapping two vertices' roles via sign.
    let inv_area = 1.0 / area;

    let min_x = x0.min(x1).min(x2).floor().max(0.0) as usize;
    let max_x = (x0.max(x1).max(x2).ceil() as isize).min(fb.width as isize - 1);
    let min_y = y0.min(y1).min(y2).floor().max(0.0) as usize;
    let max_y = (y0.max(y1).max(y2).ceil() as isize).min(fb.height as isize - 1);
    if max_x < min_x as isize || max_y < min_y as isize {
        return;
    }
    let (max_x, max_y) = (max_x as usize, max_y as usize);

    for py in min_y..=max_y {
        let sy = py as f64 + 0.5;
        for px in min_x..=max_x {
            let sx = px as f64 + 0.5;
            // Barycentric weights (signed, normalized by the signed area so
            // inside means all weights in [0, 1] regardless of winding).
            let w0 = ((x1 - sx) * (y2 - sy) - (y1 - sy) * (x2 - sx)) * inv_area;
            let w1 = ((x2 - sx) * (y0 - sy) - (y2 - sy) * (x0 - sx)) * inv_area;
            let w2 = 1.0 - w0 - w1;
            if w0 < 0.0 || w1 < 0.0 || w2 < 0.0 {
                continue;
            }
            let inv_z = w0 * iz0 + w1 * iz1 + w2 * iz2;
            let z = 1.0 / inv_z;
            let di = py * fb.width + px;
            // Strict test: on equal depth the first-submitted fragment wins.
            if z >= fb.depth[di] {
                continue;
            }
            // Perspective-correct attributes.
            let p = (tri[0].world * (w0 * iz0) + tri[1].world * (w1 * iz1)
                + tri[2].world * (w2 * iz2))
                * z;
            let n = (tri[0].normal * (w0 * iz0) + tri[1].normal * (w1 * iz1)
                + tri[2].normal * (w2 * iz2))
                * z;
            let uv = [
                (tri[0].uv[0] * w0 * iz0 + tri[1].uv[0] * w1 * iz1 + tri[2].uv[0] * w2 * iz2) * z,
                (tri[0].uv[1] * w0 * iz0 + tri[1].uv[1] * w1 * iz1 + tri[2].uv[1] * w2 * iz2) * z,
            ];
            fb.depth[di] = z;
            fb.color[di] = shade(scene, instance, camera_pos, p, n, uv);
        }
    }
}

/// Render into a float framebuffer (linear color, unclamped); `render` wraps
/// this with 8-bit quantization. Exposed for tests that need
/// pre-quantization values.
pub fn render_linear(
    scene: &Scene,
    camera: &CameraSpec,
    width: usize,
    height: usize,
) -> Vec<[f64; 3]> {
    let (right, up, forward) = camera.basis();
    let f = (height as f64 / 2.0) / (camera.fov_y_rad / 2.0).tan();
    let bg = scene.background;
    let mut fb = Framebuffer {
        width,
        height,
        color: vec![[bg.r, bg.g, bg.b]; width * height],
        depth: vec![f64::INFINITY; width * height],
    };
    for instance in &scene.instances {
        for tri in &instance.mesh.triangles {
            let cv: Vec<ClipVertex> = tri
                .iter()
                .map(|v| {
                    let world = instance.pose.to_world(v.position);
                    let rel = world - camera.position;
                    ClipVertex {
                        cam: Vec3::new(rel.dot(right), rel.dot(up), rel.dot(forward)),
                        world,
                        normal: v.normal.rotated_z(instance.pose.yaw),
                        uv: v.uv,
                    }
                })
                .collect();
            let clipped = clip_near(&cv);
            if clipped.len() < 3 {
                continue;
            }
            // Fan-triangulate the clipped polygon (at most a quad here).
            for k in 1..clipped.len() - 1 {
                let t = [clipped[0], clipped[k], clipped[k + 1]];
                raster_triangle(&mut fb, scene, instance, camera.position, f, &t);
            }
        }
    }
    fb.color
}

/// Render the scene through `camera` into an 8-bit image.
pub fn render(scene: &Scene, camera: &CameraSpec, width: usize, height: usize) -> Image {
    let colors = render_linear(scene, camera, width, height);
    let mut img = Image::new(width, height);
    for (i, c) in colors.iter().enumerate() {
        let x = i % width;
        let y = i / width;
        img.set_pixel(
            x,
            y,
            [quantize_channel(c[0]), quantize_channel(c[1]), quantize_channel(c[2])],
        );
    }
    img
}
