use drforge_scene::Vec3;

/// One triangle vertex: position and normal in the mesh's local frame, plus
/// texture coordinates in meters along the surface (so texture repeat rates
/// are consistent across differently sized faces).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vertex {
    pub position: Vec3,
    pub normal: Vec3,
    pub uv: [f64; 2],
}

/// Triangle list. Triangles index nothing — each one owns its three vertices
/// (meshes here are tiny).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Mesh {
    pub triangles: Vec<[Vertex; 3]>,
}

impl Mesh {
    /// Axis-aligned box of full extents `size`, centered at `center` in local
    /// coordinates, with outward face normals. 12 triangles.
    pub fn box_mesh(size: Vec3, center: Vec3) -> Mesh {
        let h = size * 0.5;
        let mut mesh = Mesh::default();
        // Each face: (normal, corner offsets in face-plane axes u x v).
        // u/v are picked so uv coordinates measure meters along the face.
        let faces: [(Vec3, Vec3, Vec3); 6] = [
            (Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0), Vec3::new(0.0, 0.0, 1.0)),
            (Vec3::new(-1.0, 0.0, 0.0), Vec3::new(0.0, -1.0, 0.0), Vec3::new(0.0, 0.0, 1.0)),
            (Vec3::new(0.0, 1.0, 0.0), Vec3::new(-1.0, 0.0, 0.0), Vec3::new(0.0, 0.0, 1.0)),
            (Vec3::new(0.0, -1.0, 0.0), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 0.0, 1.0)),
            (Vec3::new(0.0, 0.0, 1.0), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)),
            (Vec3::new(0.0, 0.0, -1.0), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, -1.0, 0.0)),
        ];
        for (n, u_axis, v_axis) in faces {
            let face_center = center + Vec3::new(n.x * h.x, n.y * h.y, n.z * h.z);
            let hu = (u_axis.x * h.x + u_axis.y * h.y + u_axis.z * h.z).abs();
            let hv = (v_axis.x * h.x + v_axis.y * h.y + v_axis.z * h.z).abs();
            let mk = |su: f64, sv: f64| Vertex {
                position: face_center + u_axis * (su * hu) + v_axis * (sv * hv),
                normal: n,
                uv: [su * hu, sv * hv],
            };
            let v00 = mk(-1.0, -1.0);
            let v10 = mk(1.0, -1.0);
            let v11 = mk(1.0, 1.0);
            let v01 = mk(-1.0, 1.0);
            mesh.triangles.push([v00, v10, v11]);
            mesh.triangles.push([v00, v11, v01]);
        }
        mesh
    }

    /// Flat rectangle in the local xy-plane at `z`, facing +z — used for
    /// target markers painted on the table. 2 triangles.
    pub fn quad_mesh(size_x: f64, size_y: f64, z: f64) -> Mesh {
        let (hx, hy) = (size_x * 0.5, size_y * 0.5);
        let n = Vec3::new(0.0, 0.0, 1.0);
        let mk = |x: f64, y: f64| Vertex {
            position: Vec3::new(x, y, z),
            normal: n,
            uv: [x, y],
        };
        let v00 = mk(-hx, -hy);
        let v10 = mk(hx, -hy);
        let v11 = mk(hx, hy);
        let v01 = mk(-hx, hy);
        Mesh { triangles: vec![[v00, v10, v11], [v00, v11, v01]] }
    }
}
