//! Behavior of the rasterizer: occlusion, depth ties, clipping, shading
//! terms, and determinism.

use drforge_render::{
    render, render_linear, Image, Instance, Material, Mesh, Scene, SurfaceTag, Texture,
};
use drforge_scene::{CameraSpec, ColorRGB, LightSpec, Pose, Vec3};
use std::sync::Arc;

fn quad_instance(size: f64, z: f64, color: ColorRGB) -> Instance {
    Instance {
        mesh: Arc::new(Mesh::quad_mesh(size, size, z)),
        pose: Pose::IDENTITY,
        material: Material::solid(color),
        tag: SurfaceTag::Object,
        group: 0,
    }
}

/// Camera looking straight down at the origin from 1m up.
fn top_down_camera() -> CameraSpec {
    CameraSpec::new(Vec3::new(0.0, 1e-4, 1.0), Vec3::ZERO, std::f64::consts::FRAC_PI_2)
}

fn flat_scene(instances: Vec<Instance>) -> Scene {
    Scene {
        instances,
        lights: vec![],
        ambient: 1.0, // pure albedo, no lights: output equals base color
        background: ColorRGB::BLACK,
    }
}

#[test]
fn closer_geometry_occludes_farther_geometry() {
    // Big green quad at z=0, small red quad at z=0.1 (closer to the camera).
    let scene = flat_scene(vec![
        quad_instance(0.4, 0.0, ColorRGB::new(0.0, 1.0, 0.0)),
        quad_instance(0.1, 0.1, ColorRGB::new(1.0, 0.0, 0.0)),
    ]);
    let img = render(&scene, &top_down_camera(), 64, 64);
    let center = img.pixel(32, 32);
    assert_eq!(center, [255, 0, 0], "red quad must win at the center");
    // Green quad spans ±6.4 px at this range; red only ±1.6 px.
    let edge = img.pixel(27, 32);
    assert_eq!(edge, [0, 255, 0], "green quad visible off-center");
}

#[test]
fn equal_depth_keeps_the_first_submitted_surface() {
    let scene = flat_scene(vec![
        quad_instance(0.2, 0.05, ColorRGB::new(0.0, 0.0, 1.0)),
        quad_instance(0.2, 0.05, ColorRGB::new(1.0, 1.0, 0.0)),
    ]);
    let img = render(&scene, &top_down_camera(), 48, 48);
    assert_eq!(img.pixel(24, 24), [0, 0, 255], "first surface at equal depth wins");
    // Swapped order keeps the (new) first one instead.
    let scene2 = flat_scene(vec![
        quad_instance(0.2, 0.05, ColorRGB::new(1.0, 1.0, 0.0)),
        quad_instance(0.2, 0.05, ColorRGB::new(0.0, 0.0, 1.0)),
    ]);
    let img2 = render(&scene2, &top_down_camera(), 48, 48);
    assert_eq!(img2.pixel(24, 24), [255, 255, 0]);
}

#[test]
fn geometry_straddling_the_near_plane_is_clipped_not_dropped() {
    // A tall box that extends from in front of the camera to behind it.
    let mesh = Arc::new(Mesh::box_mesh(Vec3::new(0.2, 3.0, 0.2), Vec3::ZERO));
    let scene = flat_scene(vec![Instance {
        mesh,
        pose: Pose::new(Vec3::new(0.0, 1.0, 0.0), 0.0),
        material: Material::solid(ColorRGB::new(1.0, 0.0, 1.0)),
        tag: SurfaceTag::Object,
        group: 0,
    }]);
    // Camera inside the box's y-extent, looking along +y.
    let cam = CameraSpec::new(Vec3::new(0.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0), 1.2);
    let img = render(&scene, &cam, 64, 64);
    // The interior of the box fills the view (two-sided shading).
    let mut magenta = 0;
    for y in 0..64 {
        for x in 0..64 {
            if img.pixel(x, y) == [255, 0, 255] {
                magenta += 1;
            }
        }
    }
    assert!(magenta > 64 * 64 / 2, "clipped geometry should still fill the view: {magenta}");
}

#[test]
fn diffuse_follows_cosine_and_specular_is_white() {
    // Single quad facing up, one light directly overhead: diffuse term is
    // maximal; with the light at a grazing angle it shrinks.
    let mut scene = flat_scene(vec![quad_instance(0.4, 0.0, ColorRGB::new(0.8, 0.2, 0.1))]);
    scene.ambient = 0.0;
    scene.lights = vec![LightSpec::new(Vec3::new(0.0, 0.0, 2.0), 0.5, 0.0)];
    let overhead = render_linear(&scene, &top_down_camera(), 33, 33);
    let c_overhead = overhead[16 * 33 + 16];
    // n.l = 1 -> 0.5 * base.
    assert!((c_overhead[0] - 0.4).abs() < 1e-9, "{c_overhead:?}");
    assert!((c_overhead[1] - 0.1).abs() < 1e-9);

    scene.lights = vec![LightSpec::new(Vec3::new(2.0, 0.0, 0.02), 0.5, 0.0)];
    let grazing = render_linear(&scene, &top_down_camera(), 33, 33);
    let c_grazing = grazing[16 * 33 + 16];
    assert!(c_grazing[0] < 0.01, "grazing light should contribute little: {c_grazing:?}");

    // Specular-only light adds the same amount to all three channels.
    scene.lights = vec![LightSpec::new(Vec3::new(0.0, 0.0, 2.0), 0.0, 0.7)];
    let spec = render_linear(&scene, &top_down_camera(), 33, 33);
    let c_spec = spec[16 * 33 + 16];
    assert!(c_spec[0] > 0.1, "mirror geometry should show a highlight: {c_spec:?}");
    assert!((c_spec[0] - c_spec[1]).abs() < 1e-9 && (c_spec[1] - c_spec[2]).abs() < 1e-9);
}

#[test]
fn textures_tile_across_a_surface() {
    let checker = Arc::new(Texture::new(
        2,
        2,
        vec![[1.0, 1.0, 1.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [1.0, 1.0, 1.0]],
    ));
    let mut inst = quad_instance(0.4, 0.0, ColorRGB::WHITE);
    inst.material = Material::textured(checker, 10.0); // 10 tiles per meter
    let scene = flat_scene(vec![inst]);
    let img = render(&scene, &top_down_camera(), 80, 80);
    // Across the face there must be many black<->white transitions.
    let mut transitions = 0;
    let mut prev = img.pixel(10, 40)[0];
    for x in 11..70 {
        let cur = img.pixel(x, 40)[0];
        if (cur > 128) != (prev > 128) {
            transitions += 1;
        }
        prev = cur;
    }
    assert!(transitions >= 6, "expected several checker transitions, got {transitions}");
}

#[test]
fn rendering_is_deterministic() {
    let scene = flat_scene(vec![
        quad_instance(0.4, 0.0, ColorRGB::new(0.3, 0.5, 0.7)),
        quad_instance(0.15, 0.08, ColorRGB::new(0.9, 0.4, 0.2)),
    ]);
    let cam = CameraSpec::orbit(Vec3::ZERO, 0.3, 0.5, 0.9, 1.0);
    let a: Image = render(&scene, &cam, 120, 90);
    let b: Image = render(&scene, &cam, 120, 90);
    assert_eq!(a, b);
}

#[test]
fn perspective_correct_interpolation_beats_affine_on_a_deep_quad() {
    // A quad stretching away from the camera, textured with one tile along
    // its length: white on the far half, black on the near half. With
    // perspective-correct interpolation the white->black transition sits at
    // the quad's world midpoint, which projects much closer to the far end
    // than the screen-space middle; affine interpolation would put it near
    // the middle of the on-screen span.
    let stripe_rows: Vec<[f32; 3]> = (0..8)
        .map(|r| if r < 4 { [1.0, 1.0, 1.0] } else { [0.0, 0.0, 0.0] })
        .collect();
    let stripes = Arc::new(Texture::new(1, 8, stripe_rows));
    let mesh = Arc::new(Mesh::quad_mesh(0.4, 2.0, 0.0));
    let inst = Instance {
        mesh,
        pose: Pose::new(Vec3::new(0.0, 1.0, 0.0), 0.0),
        material: Material::textured(stripes, 0.5), // one tile over the 2m length
        tag: SurfaceTag::Object,
        group: 0,
    };
    let mut scene = flat_scene(vec![inst]);
    scene.background = ColorRGB::new(0.5, 0.5, 0.5);
    // Low camera looking along +y so the quad recedes into the distance;
    // smaller row indices are farther away.
    let cam = CameraSpec::new(Vec3::new(0.0, -0.2, 0.25), Vec3::new(0.0, 1.0, 0.05), 1.0);
    let img = render(&scene, &cam, 64, 96);
    let mut first_white = None;
    let mut first_black = None;
    let mut last_black = None;
    for y in 0..96 {
        let p = img.pixel(32, y);
        if p[0] >= 200 && p[1] >= 200 && p[2] >= 200 {
            if first_white.is_none() {
                first_white = Some(y);
            }
        } else if p[0] <= 55 && p[1] <= 55 && p[2] <= 55 {
            if first_black.is_none() {
                first_black = Some(y);
            }
            last_black = Some(y);
        }
    }
    let (first, flip, last) = (
        first_white.expect("far white half visible"),
        first_black.expect("near black half visible"),
        last_black.expect("near black half visible"),
    );
    assert!(first < flip && flip < last, "stripe order wrong: {first} {flip} {last}");
    let white_frac = (flip - first) as f64 / (last - first) as f64;
    assert!(
        white_frac < 0.4,
        "far half occupies {white_frac:.2} of rows; perspective correction missing?"
    );
}
