//! Minimal PLY reader/writer: ASCII and binary little-endian, vertex
//! positions with optional colors, faces as index lists.

use std::io::{BufRead, Write};

use nalgebra::Vector3;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ScalarType {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl ScalarType {
    fn parse(token: &str) -> Option<Self> {
        Some(match token {
            "char" | "int8" => ScalarType::I8,
            "uchar" | "uint8" => ScalarType::U8,
            "short" | "int16" => ScalarType::I16,
            "ushort" | "uint16" => ScalarType::U16,
            "int" | "int32" => ScalarType::I32,
            "uint" | "uint32" => ScalarType::U32,
            "float" | "float32" => ScalarType::F32,
            "double" | "float64" => ScalarType::F64,
            _ => return None,
        })
    }

    fn size(self) -> usize {
        match self {
            ScalarType::I8 | ScalarType::U8 => 1,
            ScalarType::I16 | ScalarType::U16 => 2,
            ScalarType::I32 | ScalarType::U32 | ScalarType::F32 => 4,
            ScalarType::F64 => 8,
        }
    }

    /// Normalization divisor for color properties of this type.
    fn color_scale(self) -> f64 {
        match self {
            ScalarType::U8 => 255.0,
            ScalarType::U16 => 65535.0,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone)]
struct Property {
    name: String,
    scalar: ScalarType,
    list_count: Option<ScalarType>,
}

#[derive(Debug, Clone)]
struct ElementSpec {
    name: String,
    count: usize,
    properties: Vec<Property>,
}

/// Parsed PLY payload, already reduced to the data the toolkit uses.
#[derive(Debug, Clone, Default)]
pub struct PlyData {
    pub positions: Vec<Vector3<f64>>,
    pub colors: Option<Vec<[f64; 3]>>,
    pub faces: Vec<[usize; 3]>,
}

fn next_header_line(
    path: &str,
    reader: &mut impl BufRead,
    line_no: &mut usize,
) -> Result<String> {
    let mut line = String::new();
    *line_no += 1;
    let n = reader
        .read_line(&mut line)
        .map_err(|e| Error::io(path, e))?;
    if n == 0 {
        return Err(Error::parse(path, *line_no, "unexpected end of header"));
    }
    Ok(line.trim_end().to_string())
}

pub fn read_ply(path: &str, reader: &mut impl BufRead) -> Result<PlyData> {
    let mut line_no = 0usize;
    if next_header_line(path, reader, &mut line_no)? != "ply" {
        return Err(Error::parse(path, 1, "missing 'ply' magic"));
    }
    let mut binary = None;
    let mut elements: Vec<ElementSpec> = Vec::new();
    loop {
        let current = next_header_line(path, reader, &mut line_no)?;
        let line_here = line_no;
        let mut tokens = current.split_ascii_whitespace();
        match tokens.next() {
            Some("format") => {
                binary = match tokens.next() {
                    Some("ascii") => Some(false),
                    Some("binary_little_endian") => Some(true),
                    other => {
                        return Err(Error::parse(
                            path,
                            line_here,
                            format!("unsupported format {other:?}"),
                        ))
                    }
                };
            }
            Some("comment") | Some("obj_info") => {}
            Some("element") => {
                let name = tokens
                    .next()
                    .ok_or_else(|| Error::parse(path, line_here, "element without name"))?;
                let count: usize = tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::parse(path, line_here, "element without count"))?;
                elements.push(ElementSpec {
                    name: name.to_string(),
                    count,
                    properties: Vec::new(),
                });
            }
            Some("property") => {
                let element = elements
                    .last_mut()
                    .ok_or_else(|| Error::parse(path, line_here, "property before element"))?;
                let first = tokens
                    .next()
                    .ok_or_else(|| Error::parse(path, line_here, "property without type"))?;
                if first == "list" {
                    let count_type = tokens.next().and_then(ScalarType::parse).ok_or_else(
                        || Error::parse(path, line_here, "bad list count type"),
                    )?;
                    let elem_type = tokens.next().and_then(ScalarType::parse).ok_or_else(
                        || Error::parse(path, line_here, "bad list element type"),
                    )?;
                    let name = tokens
                        .next()
                        .ok_or_else(|| Error::parse(path, line_here, "list without name"))?;
                    element.properties.push(Property {
                        name: name.to_string(),
                        scalar: elem_type,
                        list_count: Some(count_type),
                    });
                } else {
                    let scalar = ScalarType::parse(first).ok_or_else(|| {
                        Error::parse(path, line_here, format!("unknown type '{first}'"))
                    })?;
                    let name = tokens
                        .next()
                        .ok_or_else(|| Error::parse(path, line_here, "property without name"))?;
                    element.properties.push(Property {
                        name: name.to_string(),
                        scalar,
                        list_count: None,
                    });
                }
            }
            Some("end_header") => break,
            other => {
                return Err(Error::parse(
                    path,
                    line_here,
                    format!("unexpected header token {other:?}"),
                ))
            }
        }
    }
    let binary =
        binary.ok_or_else(|| Error::parse(path, line_no, "header missing 'format' line"))?;

    let mut data = PlyData::default();
    for element in &elements {
        let is_vertex = element.name == "vertex";
        let is_face = element.name == "face";
        let find = |name: &str| element.properties.iter().position(|p| p.name == name);
        let (x, y, z) = (find("x"), find("y"), find("z"));
        let rgb = match (find("red"), find("green"), find("blue")) {
            (Some(r), Some(g), Some(b)) => Some([r, g, b]),
            _ => None,
        };
        if is_vertex {
            if x.is_none() || y.is_none() || z.is_none() {
                return Err(Error::parse(path, line_no, "vertex element missing x/y/z"));
            }
            if rgb.is_some() {
                data.colors = Some(Vec::with_capacity(element.count));
            }
        }
        let index_property = element
            .properties
            .iter()
            .position(|p| p.list_count.is_some());

        for row in 0..element.count {
            let values = if binary {
                read_binary_row(path, reader, element)?
            } else {
                read_ascii_row(path, reader, element, &mut line_no)?
            };
            if is_vertex {
                let scalar_at = |idx: usize| -> f64 { values[idx].1 };
                data.positions.push(Vector3::new(
                    scalar_at(x.unwrap()),
                    scalar_at(y.unwrap()),
                    scalar_at(z.unwrap()),
                ));
                if let (Some(colors), Some([r, g, b])) = (data.colors.as_mut(), rgb) {
                    let scale = |idx: usize| {
                        let scale = element.properties[idx].scalar.color_scale();
                        (values[idx].1 / scale).clamp(0.0, 1.0)
                    };
                    colors.push([scale(r), scale(g), scale(b)]);
                }
            } else if is_face {
                let idx = index_property.ok_or_else(|| {
                    Error::parse(path, line_no, "face element without an index list")
                })?;
                let list = &values[idx].0;
                if list.len() < 3 {
                    return Err(Error::parse(
                        path,
                        line_no,
                        format!("face {row} has {} indices", list.len()),
                    ));
                }
                // Fan-triangulate polygons.
                let to_index = |v: f64| -> Result<usize> {
                    if v < 0.0 || v.fract() != 0.0 {
                        return Err(Error::parse(path, line_no, "non-integer face index"));
                    }
                    Ok(v as usize)
                };
                for k in 1..list.len() - 1 {
                    data.faces.push([
                        to_index(list[0])?,
                        to_index(list[k])?,
                        to_index(list[k + 1])?,
                    ]);
                }
            }
        }
    }
    Ok(data)
}

type RowValue = (Vec<f64>, f64);

fn read_ascii_row(
    path: &str,
    reader: &mut impl BufRead,
    element: &ElementSpec,
    line_no: &mut usize,
) -> Result<Vec<RowValue>> {
    let mut line = String::new();
    *line_no += 1;
    let n = reader
        .read_line(&mut line)
        .map_err(|e| Error::io(path, e))?;
    if n == 0 {
        return Err(Error::parse(path, *line_no, "unexpected end of data"));
    }
    let mut tokens = line.split_ascii_whitespace();
    let mut take = |what: &str| -> Result<f64> {
        tokens
            .next()
            .and_then(|t| t.parse::<f64>().ok())
            .ok_or_else(|| Error::parse(path, *line_no, format!("expected {what}")))
    };
    let mut out = Vec::with_capacity(element.properties.len());
    for property in &element.properties {
        if property.list_count.is_some() {
            let count = take("list count")? as usize;
            let mut list = Vec::with_capacity(count);
            for _ in 0..count {
                list.push(take("list value")?);
            }
            out.push((list, 0.0));
        } else {
            out.push((Vec::new(), take(&property.name)?));
        }
    }
    Ok(out)
}

fn read_binary_row(
    path: &str,
    reader: &mut impl BufRead,
    element: &ElementSpec,
) -> Result<Vec<RowValue>> {
    let mut out = Vec::with_capacity(element.properties.len());
    for property in &element.properties {
        if let Some(count_type) = property.list_count {
            let count = read_scalar(path, reader, count_type)? as usize;
            let mut list = Vec::with_capacity(count);
            for _ in 0..count {
                list.push(read_scalar(path, reader, property.scalar)?);
            }
            out.push((list, 0.0));
        } else {
            out.push((Vec::new(), read_scalar(path, reader, property.scalar)?));
        }
    }
    Ok(out)
}

fn read_scalar(path: &str, reader: &mut impl BufRead, scalar: ScalarType) -> Result<f64> {
    let mut buf = [0u8; 8];
    let slice = &mut buf[..scalar.size()];
    reader
        .read_exact(slice)
        .map_err(|e| Error::io(path, e))?;
    Ok(match scalar {
        ScalarType::I8 => buf[0] as i8 as f64,
        ScalarType::U8 => buf[0] as f64,
        ScalarType::I16 => i16::from_le_bytes([buf[0], buf[1]]) as f64,
        ScalarType::U16 => u16::from_le_bytes([buf[0], buf[1]]) as f64,
        ScalarType::I32 => i32::from_le_bytes([buf[0], buf[1], buf[2], buf[3]]) as f64,
        ScalarType::U32 => u32::from_le_bytes([buf[0], buf[1], buf[2], buf[3]]) as f64,
        ScalarType::F32 => f32::from_le_bytes([buf[0], buf[1], buf[2], buf[3]]) as f64,
        ScalarType::F64 => f64::from_le_bytes(buf),
    })
}

/// Writes canonical binary little-endian PLY: double positions, optional
/// double colors, faces as `uchar`-counted `uint` lists.
pub fn write_ply(
    path: &str,
    writer: &mut impl Write,
    positions: &[Vector3<f64>],
    colors: Option<&[[f64; 3]]>,
    faces: Option<&[[usize; 3]]>,
) -> Result<()> {
    let io_err = |e: std::io::Error| Error::io(path, e);
    let mut header = String::new();
    header.push_str("ply\nformat binary_little_endian 1.0\n");
    header.push_str(&format!("element vertex {}\n", positions.len()));
    header.push_str("property double x\nproperty double y\nproperty double z\n");
    if colors.is_some() {
        header.push_str("property double red\nproperty double green\nproperty double blue\n");
    }
    if let Some(faces) = faces {
        header.push_str(&format!("element face {}\n", faces.len()));
        header.push_str("property list uchar uint vertex_indices\n");
    }
    header.push_str("end_header\n");
    writer.write_all(header.as_bytes()).map_err(io_err)?;

    for (i, p) in positions.iter().enumerate() {
        for v in [p.x, p.y, p.z] {
            writer.write_all(&v.to_le_bytes()).map_err(io_err)?;
        }
        if let Some(colors) = colors {
            for v in colors[i] {
                writer.write_all(&v.to_le_bytes()).map_err(io_err)?;
            }
        }
    }
    if let Some(faces) = faces {
        for face in faces {
            writer.write_all(&[3u8]).map_err(io_err)?;
            for &v in face {
                writer
                    .write_all(&(v as u32).to_le_bytes())
                    .map_err(io_err)?;
            }
        }
    }
    Ok(())
}
