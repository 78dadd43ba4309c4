use drforge_scene::{ColorRGB, Pose, Vec3};

/// Object categories. The kind fixes how `dims` is interpreted and where the
/// local origin sits (see the per-kind helpers below).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjKind {
    /// dims = (side, side, side); origin at the cube center.
    CubeRed,
    CubeGreen,
    CubeYellow,
    /// Distractor cube with a per-object random color.
    CubeObstacle,
    /// Flat goal zone; dims = (side, side, 0); origin on the table plane.
    MarkerSquare,
    /// Blade of the sweeping broom; dims = (width, thickness, height);
    /// origin at the blade center. A 10 cm handle rises from the blade top.
    Broom,
    /// Square plate with a square hole; dims = (outer, hole, thickness);
    /// origin at the plate center.
    Nut,
    /// Fixed square post; dims = (side, side, height); origin at the base
    /// center on the table. Pegs never move.
    Peg,
}

pub const BROOM_HANDLE_HEIGHT: f64 = 0.10;

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectState {
    pub id: u32,
    pub kind: ObjKind,
    pub pose: Pose,
    pub dims: Vec3,
    pub color: ColorRGB,
    pub graspable: bool,
}

impl ObjectState {
    /// Half extents of the footprint in the object's local x/y axes.
    pub fn half_footprint(&self) -> (f64, f64) {
        match self.kind {
            ObjKind::CubeRed | ObjKind::CubeGreen | ObjKind::CubeYellow | ObjKind::CubeObstacle => {
                (self.dims.x / 2.0, self.dims.x / 2.0)
            }
            ObjKind::MarkerSquare => (self.dims.x / 2.0, self.dims.y / 2.0),
            ObjKind::Broom => (self.dims.x / 2.0, self.dims.y / 2.0),
            ObjKind::Nut => (self.dims.x / 2.0, self.dims.x / 2.0),
            ObjKind::Peg => (self.dims.x / 2.0, self.dims.y / 2.0),
        }
    }

    /// Radius of the smallest vertical cylinder containing the footprint.
    pub fn circumradius(&self) -> f64 {
        let (hx, hy) = self.half_footprint();
        (hx * hx + hy * hy).sqrt()
    }

    /// Lowest solid point.
    pub fn bottom_z(&self) -> f64 {
        match self.kind {
            ObjKind::CubeRed | ObjKind::CubeGreen | ObjKind::CubeYellow | ObjKind::CubeObstacle => {
                self.pose.position.z - self.dims.x / 2.0
            }
            ObjKind::MarkerSquare => self.pose.position.z,
            ObjKind::Broom => self.pose.position.z - self.dims.z / 2.0,
            ObjKind::Nut => self.pose.position.z - self.dims.z / 2.0,
            ObjKind::Peg => self.pose.position.z,
        }
    }

    /// Highest surface another object could rest on.
    pub fn top_z(&self) -> f64 {
        match self.kind {
            ObjKind::CubeRed | ObjKind::CubeGreen | ObjKind::CubeYellow | ObjKind::CubeObstacle => {
                self.pose.position.z + self.dims.x / 2.0
            }
            ObjKind::MarkerSquare => self.pose.position.z,
            ObjKind::Broom => self.pose.position.z + self.dims.z / 2.0,
            ObjKind::Nut => self.pose.position.z + self.dims.z / 2.0,
            ObjKind::Peg => self.pose.position.z + self.dims.z,
        }
    }

    /// Where a pinch grasp holds this object, in its local frame.
    pub fn grasp_local(&self) -> Vec3 {
        match self.kind {
            ObjKind::Nut => {
                // Middle of the near bar of the plate.
                Vec3::new(0.0, -(self.dims.x + self.dims.y) / 4.0, 0.0)
            }
            ObjKind::Broom => {
                // Middle of the handle above the blade.
                Vec3::new(0.0, 0.0, self.dims.z / 2.0 + BROOM_HANDLE_HEIGHT / 2.0)
            }
            _ => Vec3::ZERO,
        }
    }

    pub fn grasp_point_world(&self) -> Vec3 {
        self.pose.to_world(self.grasp_local())
    }

    /// Is the point inside this object's footprint (2D, local frame)?
    pub fn footprint_contains(&self, world_xy: Vec3) -> bool {
        let local = self.pose.to_local(Vec3::new(world_xy.x, world_xy.y, self.pose.position.z));
        let (hx, hy) = self.half_footprint();
        local.x.abs() <= hx && local.y.abs() <= hy
    }

    pub fn is_cube(&self) -> bool {
        matches!(
            self.kind,
            ObjKind::CubeRed | ObjKind::CubeGreen | ObjKind::CubeYellow | ObjKind::CubeObstacle
        )
    }

    /// Can the closed gripper tip (or a drop) move this object at all?
    pub fn movable(&self) -> bool {
        !matches!(self.kind, ObjKind::MarkerSquare | ObjKind::Peg)
    }
}

/// A rigid grasp: while active, the object's pose equals the gripper pose
/// composed with this constant offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Attachment {
    pub object_id: u32,
    /// Object origin in the gripper frame at the moment of the grasp.
    pub local_offset: Vec3,
    /// Object yaw minus gripper yaw at the moment of the grasp.
    pub yaw_offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldState {
    /// Gripper tip pose. `position` is the point between the fingertips.
    pub gripper: Pose,
    /// 0 = fully closed, 1 = fully open.
    pub openness: f64,
    pub attachment: Option<Attachment>,
    pub objects: Vec<ObjectState>,
    /// Sweeping particles (centers of 1.5 cm foam cubes).
    pub particles: Vec<Vec3>,
    pub time_step: u32,
}

impl WorldState {
    pub fn attached_object_id(&self) -> Option<u32> {
        self.attachment.as_ref().map(|a| a.object_id)
    }

    pub fn object(&self, id: u32) -> &ObjectState {
        self.objects.iter().find(|o| o.id == id).expect("object id present")
    }

    pub fn find_kind(&self, kind: ObjKind) -> Option<&ObjectState> {
        self.objects.iter().find(|o| o.kind == kind)
    }
}
