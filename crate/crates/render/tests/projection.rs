//! Projection verified against an independently built 4x4 homogeneous
//! matrix pipeline (look-at view matrix x perspective matrix x viewport
//! transform), the textbook formulation the rasterizer does not use
//! internally.

use drforge_render::project;
use drforge_scene::{CameraSpec, RngStream, Vec3};

/// Multiply a 4x4 (row-major) by a homogeneous point.
fn mat_mul_point(m: &[[f64; 4]; 4], p: [f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (r, row) in m.iter().enumerate() {
        out[r] = row[0] * p[0] + row[1] * p[1] + row[2] * p[2] + row[3] * p[3];
    }
    out
}

fn mat_mul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for (k, bk) in b.iter().enumerate() {
                out[i][j] += a[i][k] * bk[j];
            }
        }
    }
    out
}

/// Screen coordinates via the homogeneous pipeline.
fn project_homogeneous(
    cam: &CameraSpec,
    width: usize,
    height: usize,
    world: Vec3,
) -> Option<(f64, f64)> {
    let (right, up, forward) = cam.basis();
    // View matrix: world -> camera frame (x right, y up, z forward).
    let view = [
        [right.x, right.y, right.z, -right.dot(cam.position)],
        [up.x, up.y, up.z, -up.dot(cam.position)],
        [forward.x, forward.y, forward.z, -forward.dot(cam.position)],
        [0.0, 0.0, 0.0, 1.0],
    ];
    // Perspective: maps camera coords to clip space, w' = z.
    let fy = 1.0 / (cam.fov_y_rad / 2.0).tan();
    let aspect = width as f64 / height as f64;
    let proj = [
        [fy / aspect, 0.0, 0.0, 0.0],
        [0.0, fy, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
    ];
    let m = mat_mul(&proj, &view);
    let clip = mat_mul_point(&m, [world.x, world.y, world.z, 1.0]);
    if clip[3] <= 0.0 {
        return None;
    }
    let ndc_x = clip[0] / clip[3];
    let ndc_y = clip[1] / clip[3];
    // Viewport: NDC [-1,1] to pixels, y flipped.
    let px = (ndc_x + 1.0) * 0.5 * width as f64;
    let py = (1.0 - ndc_y) * 0.5 * height as f64;
    Some((px, py))
}

#[test]
fn matches_homogeneous_pipeline_within_1e4_pixels() {
    let mut rng = RngStream::new(2024);
    let mut checked = 0;
    for trial in 0..500 {
        let cam = CameraSpec::orbit(
            Vec3::new(rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1), rng.uniform(0.0, 0.1)),
            rng.uniform(0.0, std::f64::consts::TAU),
            rng.uniform(0.1, 1.4),
            rng.uniform(0.4, 2.0),
            rng.uniform(0.4, 1.8),
        );
        let (w, h) = if trial % 2 == 0 { (120, 90) } else { (240, 180) };
        for _ in 0..20 {
            let p = Vec3::new(
                rng.uniform(-0.5, 0.5),
                rng.uniform(-0.5, 0.5),
                rng.uniform(-0.1, 0.5),
            );
            let ours = project(&cam, w, h, p);
            let reference = project_homogeneous(&cam, w, h, p);
            match (ours, reference) {
                (Some((px, py, z)), Some((rx, ry))) => {
                    assert!(z > 0.0);
                    assert!(
                        (px - rx).abs() <= 1e-4 && (py - ry).abs() <= 1e-4,
                        "({px:.6},{py:.6}) vs ({rx:.6},{ry:.6})"
                    );
                    checked += 1;
                }
                (None, None) => {}
                (a, b) => panic!("visibility disagreement: {a:?} vs {b:?}"),
            }
        }
    }
    assert!(checked > 2000, "too few visible samples: {checked}");
}

#[test]
fn known_point_lands_at_three_quarters_width() {
    // Camera at origin looking down +y (forward), 90-degree vertical fov,
    // square image: a point 1m ahead and 0.5m to the right must project to
    // x = 3/4 of the width, y = centerline.
    let cam = CameraSpec::new(Vec3::ZERO, Vec3::new(0.0, 1.0, 0.0), std::f64::consts::FRAC_PI_2);
    let (px, py, z) = project(&cam, 128, 128, Vec3::new(0.5, 1.0, 0.0)).unwrap();
    assert!((px - 96.0).abs() < 1e-9, "px {px}");
    assert!((py - 64.0).abs() < 1e-9, "py {py}");
    assert!((z - 1.0).abs() < 1e-12);
}

#[test]
fn points_behind_the_camera_are_rejected() {
    let cam = CameraSpec::new(Vec3::new(0.0, -1.0, 0.5), Vec3::ZERO, 1.0);
    assert!(project(&cam, 64, 64, Vec3::new(0.0, -3.0, 0.5)).is_none());
    assert!(project(&cam, 64, 64, Vec3::new(0.0, 0.0, 0.4)).is_some());
}
