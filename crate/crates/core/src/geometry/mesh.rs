//! Triangle meshes.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::geometry::ColoredPointCloud;

/// An indexed triangle mesh with optional per-vertex colors in [0,1].
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    vertices: Vec<Vector3<f64>>,
    faces: Vec<[usize; 3]>,
    vertex_colors: Option<Vec<[f64; 3]>>,
}

impl TriangleMesh {
    pub fn new(
        vertices: Vec<Vector3<f64>>,
        faces: Vec<[usize; 3]>,
        vertex_colors: Option<Vec<[f64; 3]>>,
    ) -> Result<Self> {
        if vertices.iter().any(|p| !p.iter().all(|v| v.is_finite())) {
            return Err(Error::InvalidInput("non-finite vertex".into()));
        }
        for (i, f) in faces.iter().enumerate() {
            if f.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::InvalidInput(format!(
                    "face {i} references vertex {} of {}",
                    f.iter().max().unwrap(),
                    vertices.len()
                )));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::InvalidInput(format!(
                    "face {i} repeats a vertex index"
                )));
            }
        }
        if let Some(colors) = &vertex_colors {
            if colors.len() != vertices.len() {
                return Err(Error::InvalidInput(
                    "vertex color count does not match vertex count".into(),
                ));
            }
            if colors
                .iter()
                .any(|c| c.iter().any(|v| !(0.0..=1.0).contains(v)))
            {
                return Err(Error::InvalidInput(
                    "vertex color component outside [0, 1]".into(),
                ));
            }
        }
        Ok(Self {
            vertices,
            faces,
            vertex_colors,
        })
    }

    pub fn vertices(&self) -> &[Vector3<f64>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn vertex_colors(&self) -> Option<&[[f64; 3]]> {
        self.vertex_colors.as_deref()
    }

    pub fn face_area(&self, face: usize) -> f64 {
        let [a, b, c] = self.faces[face];
        let ab = self.vertices[b] - self.vertices[a];
        let ac = self.vertices[c] - self.vertices[a];
        0.5 * ab.cross(&ac).norm()
    }

    /// The vertex set as a point cloud, colors carried along.
    pub fn vertex_cloud(&self) -> ColoredPointCloud {
        match &self.vertex_colors {
            Some(colors) => {
                ColoredPointCloud::with_colors(self.vertices.clone(), colors.clone()).unwrap()
            }
            None => ColoredPointCloud::new(self.vertices.clone()).unwrap(),
        }
    }
}

/// Diagonal length of the axis-aligned bounding box of the vertices.
pub fn mesh_diagonal(mesh: &TriangleMesh) -> f64 {
    let Some(first) = mesh.vertices.first() else {
        return 0.0;
    };
    let mut lo = *first;
    let mut hi = *first;
    for v in &mesh.vertices[1..] {
        lo = lo.inf(v);
        hi = hi.sup(v);
    }
    (hi - lo).norm()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use approx::assert_relative_eq;

    pub(crate) fn unit_cube() -> TriangleMesh {
        let v = |x: f64, y: f64, z: f64| Vector3::new(x, y, z);
        TriangleMesh::new(
            vec![
                v(0., 0., 0.),
                v(1., 0., 0.),
                v(1., 1., 0.),
                v(0., 1., 0.),
                v(0., 0., 1.),
                v(1., 0., 1.),
                v(1., 1., 1.),
                v(0., 1., 1.),
            ],
            vec![[0, 1, 2], [0, 2, 3], [4, 5, 6], [4, 6, 7]],
            None,
        )
        .unwrap()
    }

    #[test]
    fn unit_cube_diagonal_is_sqrt_three() {
        assert_relative_eq!(mesh_diagonal(&unit_cube()), 3f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn single_vertex_diagonal_is_zero() {
        let m = TriangleMesh::new(vec![Vector3::new(0.2, 0.3, 0.4)], vec![], None).unwrap();
        assert_eq!(mesh_diagonal(&m), 0.0);
    }

    #[test]
    fn pythagorean_diagonal() {
        let m = TriangleMesh::new(
            vec![Vector3::zeros(), Vector3::new(3.0, 4.0, 0.0)],
            vec![],
            None,
        )
        .unwrap();
        assert_relative_eq!(mesh_diagonal(&m), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_out_of_range_face_index() {
        let r = TriangleMesh::new(
            vec![Vector3::zeros(), Vector3::x(), Vector3::y()],
            vec![[0, 1, 3]],
            None,
        );
        assert!(r.is_err());
    }

    #[test]
    fn rejects_degenerate_face() {
        let r = TriangleMesh::new(
            vec![Vector3::zeros(), Vector3::x(), Vector3::y()],
            vec![[0, 1, 1]],
            None,
        );
        assert!(r.is_err());
    }
}
