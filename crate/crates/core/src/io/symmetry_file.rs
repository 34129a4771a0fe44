//! Symmetry annotation files.
//!
//! Schema: a JSON object keyed by object id, each entry carrying optional
//! `discrete` (list of `{"R": [9 row-major], "t": [3]}`), `continuous`
//! (list of `{"axis": [3], "point": [3]}`) and `sphere` (bool) fields.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::RigidTransform;
use crate::metrics::{SymmetryAnnotation, SymmetryAxis};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct DiscreteEntry {
    #[serde(rename = "R")]
    rotation: [f64; 9],
    #[serde(rename = "t", default)]
    translation: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct AxisEntry {
    axis: [f64; 3],
    #[serde(default)]
    point: [f64; 3],
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct SymmetryEntry {
    #[serde(default)]
    discrete: Vec<DiscreteEntry>,
    #[serde(default)]
    continuous: Vec<AxisEntry>,
    #[serde(default)]
    sphere: bool,
}

/// Loads per-object symmetry annotations.
///
/// The sphere flag dominates an entry: any discrete or continuous fields
/// alongside it are dropped with a warning. Axis directions may deviate
/// from unit norm by at most 1e-6 and are renormalized.
pub fn load_symmetry(
    path: impl AsRef<Path>,
) -> Result<(BTreeMap<String, SymmetryAnnotation>, Vec<String>)> {
    let name = path.as_ref().display().to_string();
    let text = fs::read_to_string(path.as_ref()).map_err(|e| Error::io(&name, e))?;
    let entries: BTreeMap<String, SymmetryEntry> = serde_json::from_str(&text)
        .map_err(|e| Error::parse(&name, e.line(), e.to_string()))?;

    let mut out = BTreeMap::new();
    let mut warnings = Vec::new();
    for (object_id, entry) in entries {
        if entry.sphere {
            if !entry.discrete.is_empty() || !entry.continuous.is_empty() {
                warnings.push(format!(
                    "{object_id}: sphere flag set; ignoring discrete/continuous fields"
                ));
            }
            out.insert(object_id, SymmetryAnnotation::sphere());
            continue;
        }
        let mut discrete = Vec::with_capacity(entry.discrete.len());
        for d in &entry.discrete {
            discrete.push(RigidTransform::from_rows_projected(&d.rotation, &d.translation)?);
        }
        let mut axes = Vec::with_capacity(entry.continuous.len());
        for a in &entry.continuous {
            axes.push(SymmetryAxis::new_normalizing(
                Vector3::new(a.axis[0], a.axis[1], a.axis[2]),
                Vector3::new(a.point[0], a.point[1], a.point[2]),
            )?);
        }
        out.insert(object_id, SymmetryAnnotation::new(discrete, axes, false));
    }
    Ok((out, warnings))
}

/// Writes annotations in the schema [`load_symmetry`] reads.
pub fn save_symmetry(
    path: impl AsRef<Path>,
    annotations: &BTreeMap<String, SymmetryAnnotation>,
) -> Result<()> {
    let name = path.as_ref().display().to_string();
    let mut entries: BTreeMap<String, SymmetryEntry> = BTreeMap::new();
    for (object_id, annotation) in annotations {
        let mut entry = SymmetryEntry {
            sphere: annotation.is_textureless_sphere(),
            ..Default::default()
        };
        if !entry.sphere {
            for d in annotation.discrete() {
                let (rotation, translation) = d.to_row_major();
                entry.discrete.push(DiscreteEntry {
                    rotation,
                    translation,
                });
            }
            for a in annotation.continuous_axes() {
                let dir = a.direction().into_inner();
                let p = a.point_on_axis();
                entry.continuous.push(AxisEntry {
                    axis: [dir.x, dir.y, dir.z],
                    point: [p.x, p.y, p.z],
                });
            }
        }
        entries.insert(object_id.clone(), entry);
    }
    let text = serde_json::to_string_pretty(&entries)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
    fs::write(path.as_ref(), text).map_err(|e| Error::io(&name, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::test_dir;
    use crate::metrics::expand_equivalent_poses;

    #[test]
    fn empty_entry_is_no_symmetry() {
        let dir = test_dir("sym_empty");
        let path = dir.join("sym.json");
        std::fs::write(&path, r#"{"mug": {}}"#).unwrap();
        let (map, warnings) = load_symmetry(&path).unwrap();
        assert!(map["mug"].is_trivial());
        assert!(warnings.is_empty());
    }

    #[test]
    fn sphere_flag_ignores_other_fields_with_warning() {
        let dir = test_dir("sym_sphere");
        let path = dir.join("sym.json");
        std::fs::write(
            &path,
            r#"{"ball": {"sphere": true, "continuous": [{"axis": [0,0,1], "point": [0,0,0]}]}}"#,
        )
        .unwrap();
        let (map, warnings) = load_symmetry(&path).unwrap();
        assert!(map["ball"].is_textureless_sphere());
        assert!(map["ball"].continuous_axes().is_empty());
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn two_fold_entry_expands_to_two_poses() {
        let dir = test_dir("sym_twofold");
        let path = dir.join("sym.json");
        std::fs::write(
            &path,
            r#"{"box": {"discrete": [{"R": [-1,0,0, 0,-1,0, 0,0,1], "t": [0,0,0]}]}}"#,
        )
        .unwrap();
        let (map, _) = load_symmetry(&path).unwrap();
        let poses =
            expand_equivalent_poses(&RigidTransform::identity(), &map["box"], 2).unwrap();
        assert_eq!(poses.len(), 2);
    }

    #[test]
    fn non_unit_axis_is_rejected() {
        let dir = test_dir("sym_badaxis");
        let path = dir.join("sym.json");
        std::fs::write(
            &path,
            r#"{"cone": {"continuous": [{"axis": [0,0,2], "point": [0,0,0]}]}}"#,
        )
        .unwrap();
        assert!(load_symmetry(&path).is_err());
    }

    #[test]
    fn annotations_round_trip() {
        let dir = test_dir("sym_rt");
        let path = dir.join("sym.json");
        let mut map = BTreeMap::new();
        map.insert(
            "cyl".to_string(),
            SymmetryAnnotation::new(
                vec![RigidTransform::from_axis_angle(
                    &Vector3::z_axis(),
                    std::f64::consts::PI,
                )],
                vec![SymmetryAxis::new(Vector3::new(0.0, 0.0, 1.0), Vector3::zeros()).unwrap()],
                false,
            ),
        );
        map.insert("ball".to_string(), SymmetryAnnotation::sphere());
        map.insert("plain".to_string(), SymmetryAnnotation::none());
        save_symmetry(&path, &map).unwrap();
        let (loaded, warnings) = load_symmetry(&path).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(loaded.len(), 3);
        assert!(loaded["ball"].is_textureless_sphere());
        assert!(loaded["plain"].is_trivial());
        assert_eq!(loaded["cyl"].discrete().len(), 1);
        assert_eq!(loaded["cyl"].continuous_axes().len(), 1);
        assert!(
            loaded["cyl"].discrete()[0].max_abs_diff(&map["cyl"].discrete()[0]) <= 1e-12
        );
    }
}
