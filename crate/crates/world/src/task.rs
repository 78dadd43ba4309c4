#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaskId {
    Stacking,
    Pushing,
    PushingToPick,
    Sweeping,
    Assembling,
}

impl TaskId {
    pub const ALL: [TaskId; 5] = [
        TaskId::Stacking,
        TaskId::Pushing,
        TaskId::PushingToPick,
        TaskId::Sweeping,
        TaskId::Assembling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TaskId::Stacking => "stacking",
            TaskId::Pushing => "pushing",
            TaskId::PushingToPick => "pushing_to_pick",
            TaskId::Sweeping => "sweeping",
            TaskId::Assembling => "assembling",
        }
    }

    pub fn parse(name: &str) -> Option<TaskId> {
        TaskId::ALL.iter().copied().find(|t| t.name() == name)
    }
}

/// Task geometry and success tolerances. All lengths are meters. The
/// dimensions of the manipulated objects are fixed by the task definitions;
/// the tolerances and episode length are configurable defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskSpec {
    pub task_id: TaskId,
    pub max_steps: u32,

    /// Red and green stacking cubes: 5 cm side.
    pub stack_cube_side: f64,
    /// Pushed cube: 4 cm side; its goal marker: 6x6 cm.
    pub push_cube_side: f64,
    pub push_marker_side: f64,
    /// Pick target and the three obstacle cubes: 5 cm side.
    pub pick_cube_side: f64,
    /// Sweeping: 14 particles of 1.5 cm onto a 16x16 cm marker with a
    /// 7x7 cm broom face.
    pub sweep_particle_side: f64,
    pub sweep_particle_count: usize,
    pub sweep_marker_side: f64,
    pub broom_face_width: f64,
    pub broom_face_height: f64,
    pub broom_thickness: f64,
    /// Assembling: square nut dropped onto a 3.5x3.5x10.5 cm peg.
    pub nut_outer: f64,
    pub nut_hole: f64,
    pub nut_thickness: f64,
    pub peg_side: f64,
    pub peg_height: f64,

    /// Stacking: horizontal center offset and vertical-gap tolerance.
    pub stack_horizontal_tol: f64,
    pub stack_gap_tol: f64,
    /// Pushing: cube-to-marker center distance.
    pub push_tol: f64,
    /// Pushing-to-pick: required cube-center height above the table.
    pub pick_height: f64,
    /// Sweeping: particles required inside the marker.
    pub sweep_required: usize,
    /// Assembling: axis distance and yaw alignment (mod 90 deg).
    pub assemble_axis_tol: f64,
    pub assemble_yaw_tol: f64,
}

impl TaskSpec {
    pub fn for_task(task_id: TaskId) -> TaskSpec {
        TaskSpec {
            task_id,
            max_steps: 300,
            stack_cube_side: 0.05,
            push_cube_side: 0.04,
            push_marker_side: 0.06,
            pick_cube_side: 0.05,
            sweep_particle_side: 0.015,
            sweep_particle_count: 14,
            sweep_marker_side: 0.16,
            broom_face_width: 0.07,
            broom_face_height: 0.07,
            broom_thickness: 0.03,
            nut_outer: 0.09,
            nut_hole: 0.045,
            nut_thickness: 0.015,
            peg_side: 0.035,
            peg_height: 0.105,
            stack_horizontal_tol: 0.025,
            stack_gap_tol: 0.01,
            push_tol: 0.03,
            pick_height: 0.08,
            sweep_required: 12,
            assemble_axis_tol: 0.01,
            assemble_yaw_tol: 0.15,
        }
    }

    pub fn validate(&self) -> bool {
        let dims = [
            self.stack_cube_side,
            self.push_cube_side,
            self.push_marker_side,
            self.pick_cube_side,
            self.sweep_particle_side,
            self.sweep_marker_side,
            self.broom_face_width,
            self.broom_face_height,
            self.broom_thickness,
            self.nut_outer,
            self.nut_hole,
            self.nut_thickness,
            self.peg_side,
            self.peg_height,
        ];
        let tols = [
            self.stack_horizontal_tol,
            self.stack_gap_tol,
            self.push_tol,
            self.pick_height,
            self.assemble_axis_tol,
            self.assemble_yaw_tol,
        ];
        dims.iter().all(|d| *d > 0.0)
            && tols.iter().all(|t| *t > 0.0)
            && self.max_steps > 0
            && self.sweep_required <= self.sweep_particle_count
            && self.nut_hole < self.nut_outer
            && self.peg_side < self.nut_hole
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_for_every_task() {
        for t in TaskId::ALL {
            assert!(TaskSpec::for_task(t).validate(), "{}", t.name());
            assert_eq!(TaskId::parse(t.name()), Some(t));
        }
    }
}
