//! World-state to renderable-scene conversion: builds the tabletop set
//! (table, walls, floor), the gripper body, and every task object, plus the
//! two default cameras.

use drforge_render::{make_primitive, Instance, Material, Mesh, PrimitiveKind, Scene, SurfaceTag};
use drforge_scene::{CameraSpec, ColorRGB, Pose, Vec3};
use drforge_world::{ObjKind, ObjectState, WorldState};
use std::sync::Arc;

/// A scene plus the camera pair that observes it.
#[derive(Debug, Clone)]
pub struct SceneSetup {
    pub scene: Scene,
    pub cameras: [CameraSpec; 2],
}

/// Instance groups for parts that are not task objects (object instances use
/// their object id as the group).
pub const GRIPPER_GROUP: u32 = 10_000;
pub const PARTICLE_GROUP: u32 = 10_001;
pub const SET_GROUP: u32 = 10_002;

/// Finger pair separation at openness 0 / 1.
pub const FINGER_GAP_CLOSED: f64 = 0.02;
pub const FINGER_GAP_OPEN: f64 = 0.08;

pub const PARTICLE_COLOR: ColorRGB = ColorRGB { r: 0.92, g: 0.91, b: 0.86 };
const TABLE_COLOR: ColorRGB = ColorRGB { r: 0.55, g: 0.42, b: 0.32 };
const WALL_COLOR: ColorRGB = ColorRGB { r: 0.82, g: 0.80, b: 0.75 };
const FLOOR_COLOR: ColorRGB = ColorRGB { r: 0.35, g: 0.35, b: 0.38 };
const GRIPPER_COLOR: ColorRGB = ColorRGB { r: 0.25, g: 0.25, b: 0.28 };

/// The two nominal viewpoints: a front camera and a left camera, both
/// orbiting the table center at 30 degrees elevation, 0.9 m range, 60
/// degree vertical field of view.
pub fn default_cameras() -> [CameraSpec; 2] {
    let target = Vec3::new(0.0, 0.0, 0.05);
    let elevation = std::f64::consts::PI / 6.0;
    let fov = std::f64::consts::PI / 3.0;
    [
        CameraSpec::orbit(target, 0.0, elevation, 0.9, fov),
        CameraSpec::orbit(target, std::f64::consts::FRAC_PI_2, elevation, 0.9, fov),
    ]
}

fn solid(mesh: Mesh, pose: Pose, color: ColorRGB, tag: SurfaceTag, group: u32) -> Instance {
    Instance { mesh: Arc::new(mesh), pose, material: Material::solid(color), tag, group }
}

fn primitive(kind: PrimitiveKind, dims: Vec3) -> Mesh {
    make_primitive(kind, dims).expect("scenegen primitive dims are valid")
}

/// Gripper finger separation: openness drives the gap, but a held object
/// props the fingers open to its grasp width.
pub fn finger_gap(state: &WorldState) -> f64 {
    let base = FINGER_GAP_CLOSED + state.openness * (FINGER_GAP_OPEN - FINGER_GAP_CLOSED);
    let floor = state
        .attachment
        .as_ref()
        .map(|att| grasp_width(state.object(att.object_id)) + 0.004)
        .unwrap_or(0.0);
    base.max(floor)
}

fn grasp_width(obj: &ObjectState) -> f64 {
    match obj.kind {
        ObjKind::Nut => (obj.dims.x - obj.dims.y) / 2.0,
        ObjKind::Broom => 0.02,
        _ => obj.dims.x,
    }
}

fn push_set(instances: &mut Vec<Instance>) {
    // Table top.
    instances.push(solid(
        primitive(PrimitiveKind::Plane, Vec3::new(0.9, 0.9, 0.0)),
        Pose::IDENTITY,
        TABLE_COLOR,
        SurfaceTag::Table,
        SET_GROUP,
    ));
    // Floor well below the table plane.
    instances.push(solid(
        primitive(PrimitiveKind::Plane, Vec3::new(3.0, 3.0, 0.0)),
        Pose::new(Vec3::new(0.0, 0.0, -0.4), 0.0),
        FLOOR_COLOR,
        SurfaceTag::Floor,
        SET_GROUP,
    ));
    // Four room walls, far enough out to fill both cameras' backgrounds.
    let wall_z = 0.35;
    for (pos, dims) in [
        (Vec3::new(1.0, 0.0, wall_z), Vec3::new(0.04, 3.0, 1.5)),
        (Vec3::new(-1.0, 0.0, wall_z), Vec3::new(0.04, 3.0, 1.5)),
        (Vec3::new(0.0, 1.0, wall_z), Vec3::new(3.0, 0.04, 1.5)),
        (Vec3::new(0.0, -1.0, wall_z), Vec3::new(3.0, 0.04, 1.5)),
    ] {
        instances.push(solid(
            primitive(PrimitiveKind::Box, dims),
            Pose::new(pos, 0.0),
            WALL_COLOR,
            SurfaceTag::Wall,
            SET_GROUP,
        ));
    }
}

fn push_gripper(instances: &mut Vec<Instance>, state: &WorldState) {
    let gap = finger_gap(state);
    let tip = state.gripper.position;
    let yaw = state.gripper.yaw;
    let finger_dims = Vec3::new(0.012, 0.012, 0.06);
    // Fingers flank the tip point; the tip sits between the fingertips.
    for side in [-1.0, 1.0] {
        let local = Vec3::new(0.0, side * (gap + finger_dims.y) / 2.0, finger_dims.z / 2.0);
        let world = Pose::new(tip, yaw).to_world(local);
        instances.push(solid(
            primitive(PrimitiveKind::Finger, finger_dims),
            Pose::new(world, yaw),
            GRIPPER_COLOR,
            SurfaceTag::Gripper,
            GRIPPER_GROUP,
        ));
    }
    // Wrist bar joining the fingers, plus a stub of arm above.
    let bar_dims = Vec3::new(0.024, gap + 2.0 * finger_dims.y + 0.01, 0.024);
    let bar_center = Pose::new(tip, yaw).to_world(Vec3::new(0.0, 0.0, finger_dims.z + 0.012));
    instances.push(solid(
        primitive(PrimitiveKind::Box, bar_dims),
        Pose::new(bar_center, yaw),
        GRIPPER_COLOR,
        SurfaceTag::Gripper,
        GRIPPER_GROUP,
    ));
    let arm_center = Pose::new(tip, yaw).to_world(Vec3::new(0.0, 0.0, finger_dims.z + 0.024 + 0.05));
    instances.push(solid(
        primitive(PrimitiveKind::Box, Vec3::new(0.03, 0.03, 0.1)),
        Pose::new(arm_center, yaw),
        GRIPPER_COLOR,
        SurfaceTag::Gripper,
        GRIPPER_GROUP,
    ));
}

fn object_instance(o: &ObjectState) -> Instance {
    let (kind, dims, pose, tag) = match o.kind {
        ObjKind::CubeRed | ObjKind::CubeGreen | ObjKind::CubeYellow | ObjKind::CubeObstacle => {
            (PrimitiveKind::Cube, Vec3::new(o.dims.x, 0.0, 0.0), o.pose, SurfaceTag::Object)
        }
        ObjKind::MarkerSquare => {
            // Lift markers a hair above the table so they win the depth test.
            let pose = Pose::new(o.pose.position + Vec3::new(0.0, 0.0, 8e-4), o.pose.yaw);
            (
                PrimitiveKind::Marker,
                Vec3::new(o.dims.x, o.dims.y, 0.0),
                pose,
                SurfaceTag::Marker,
            )
        }
        ObjKind::Broom => (PrimitiveKind::Broom, o.dims, o.pose, SurfaceTag::Object),
        ObjKind::Nut => (PrimitiveKind::Nut, o.dims, o.pose, SurfaceTag::Object),
        ObjKind::Peg => (PrimitiveKind::Peg, o.dims, o.pose, SurfaceTag::Object),
    };
    solid(primitive(kind, dims), pose, o.color, tag, o.id)
}

/// Build the full renderable scene for a world state, with nominal
/// materials, nominal light, and the default camera pair.
pub fn tabletop_scene(state: &WorldState) -> SceneSetup {
    let mut scene = Scene::new();
    push_set(&mut scene.instances);
    for o in &state.objects {
        scene.instances.push(object_instance(o));
    }
    let particle_mesh = Arc::new(primitive(PrimitiveKind::Cube, Vec3::new(0.015, 0.0, 0.0)));
    for p in &state.particles {
        scene.instances.push(Instance {
            mesh: Arc::clone(&particle_mesh),
            pose: Pose::new(*p, 0.0),
            material: Material::solid(PARTICLE_COLOR),
            tag: SurfaceTag::Object,
            group: PARTICLE_GROUP,
        });
    }
    push_gripper(&mut scene.instances, state);
    SceneSetup { scene, cameras: default_cameras() }
}

/// Copy the appearance of one scene setup onto another built from a later
/// state of the same episode: per-instance materials, lights, ambient,
/// background, and cameras. Geometry (poses, meshes, finger gap) stays with
/// the target. Within an episode the instance list has a fixed order and
/// length, which this relies on.
pub fn transfer_appearance(from: &SceneSetup, to: &mut SceneSetup) {
    assert_eq!(
        from.scene.instances.len(),
        to.scene.instances.len(),
        "appearance transfer requires scenes built from the same episode"
    );
    for (dst, src) in to.scene.instances.iter_mut().zip(&from.scene.instances) {
        dst.material = src.material.clone();
    }
    to.scene.lights = from.scene.lights.clone();
    to.scene.ambient = from.scene.ambient;
    to.scene.background = from.scene.background;
    to.cameras = from.cameras.clone();
}
