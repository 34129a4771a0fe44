//! Mesh loading (OBJ, PLY) and saving (canonical binary PLY).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter};
use std::path::Path;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::geometry::TriangleMesh;
use crate::io::ply::{read_ply, write_ply};

/// Loads a triangle mesh; the format is chosen by file extension
/// (`.obj` or `.ply`).
pub fn load_mesh(path: impl AsRef<Path>) -> Result<TriangleMesh> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase());
    let file = File::open(path).map_err(|e| Error::io(&name, e))?;
    let mut reader = BufReader::new(file);
    match ext.as_deref() {
        Some("obj") => load_obj(&name, &mut reader),
        Some("ply") => {
            let data = read_ply(&name, &mut reader)?;
            TriangleMesh::new(data.positions, data.faces, data.colors)
        }
        other => Err(Error::InvalidInput(format!(
            "unsupported mesh extension {other:?} for {name}"
        ))),
    }
}

/// Saves a mesh as canonical binary little-endian PLY.
pub fn save_mesh(path: impl AsRef<Path>, mesh: &TriangleMesh) -> Result<()> {
    let name = path.as_ref().display().to_string();
    let file = File::create(path.as_ref()).map_err(|e| Error::io(&name, e))?;
    let mut writer = BufWriter::new(file);
    write_ply(
        &name,
        &mut writer,
        mesh.vertices(),
        mesh.vertex_colors(),
        Some(mesh.faces()),
    )
}

fn load_obj(path: &str, reader: &mut impl BufRead) -> Result<TriangleMesh> {
    let mut vertices: Vec<Vector3<f64>> = Vec::new();
    let mut colors: Vec<[f64; 3]> = Vec::new();
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for (line_index, line) in reader.lines().enumerate() {
        let line_no = line_index + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let mut tokens = line.split_ascii_whitespace();
        match tokens.next() {
            Some("v") => {
                let values: Vec<f64> = tokens
                    .map(|t| {
                        t.parse::<f64>().map_err(|_| {
                            Error::parse(path, line_no, format!("bad vertex component '{t}'"))
                        })
                    })
                    .collect::<Result<_>>()?;
                if values.len() != 3 && values.len() != 6 {
                    return Err(Error::parse(
                        path,
                        line_no,
                        format!("vertex line has {} components", values.len()),
                    ));
                }
                vertices.push(Vector3::new(values[0], values[1], values[2]));
                if values.len() == 6 {
                    colors.push([
                        values[3].clamp(0.0, 1.0),
                        values[4].clamp(0.0, 1.0),
                        values[5].clamp(0.0, 1.0),
                    ]);
                }
            }
            Some("f") => {
                let mut indices = Vec::new();
                for token in tokens {
                    let first = token.split('/').next().unwrap_or(token);
                    let raw: i64 = first.parse().map_err(|_| {
                        Error::parse(path, line_no, format!("bad face index '{token}'"))
                    })?;
                    let index = if raw < 0 {
                        vertices.len() as i64 + raw
                    } else {
                        raw - 1
                    };
                    if index < 0 || index as usize >= vertices.len() {
                        return Err(Error::parse(
                            path,
                            line_no,
                            format!("face index {raw} out of range"),
                        ));
                    }
                    indices.push(index as usize);
                }
                if indices.len() < 3 {
                    return Err(Error::parse(
                        path,
                        line_no,
                        format!("face has {} vertices", indices.len()),
                    ));
                }
                for k in 1..indices.len() - 1 {
                    faces.push([indices[0], indices[k], indices[k + 1]]);
                }
            }
            // vt, vn, usemtl, mtllib, o, g, s, comments: ignored.
            _ => {}
        }
    }
    let colors = if colors.len() == vertices.len() && !colors.is_empty() {
        Some(colors)
    } else {
        None
    };
    TriangleMesh::new(vertices, faces, colors)
}
