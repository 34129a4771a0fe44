//! Line-delimited JSON pose records.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::RigidTransform;

/// A predicted pose for one (scene, object) pair. Rotation is row-major;
/// values within 1e-4 of a rotation are re-orthonormalized on conversion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub scene_id: String,
    pub object_id: String,
    pub rotation: [f64; 9],
    pub translation: [f64; 3],
    pub score: f64,
}

/// A ground-truth pose for one (scene, object) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthRecord {
    pub scene_id: String,
    pub object_id: String,
    pub rotation: [f64; 9],
    pub translation: [f64; 3],
}

impl PredictionRecord {
    pub fn from_pose(
        scene_id: impl Into<String>,
        object_id: impl Into<String>,
        pose: &RigidTransform,
        score: f64,
    ) -> Self {
        let (rotation, translation) = pose.to_row_major();
        Self {
            scene_id: scene_id.into(),
            object_id: object_id.into(),
            rotation,
            translation,
            score,
        }
    }

    pub fn to_pose(&self) -> Result<RigidTransform> {
        RigidTransform::from_rows_projected(&self.rotation, &self.translation)
    }
}

impl GroundTruthRecord {
    pub fn from_pose(
        scene_id: impl Into<String>,
        object_id: impl Into<String>,
        pose: &RigidTransform,
    ) -> Self {
        let (rotation, translation) = pose.to_row_major();
        Self {
            scene_id: scene_id.into(),
            object_id: object_id.into(),
            rotation,
            translation,
        }
    }

    pub fn to_pose(&self) -> Result<RigidTransform> {
        RigidTransform::from_rows_projected(&self.rotation, &self.translation)
    }
}

fn load_jsonl<T: for<'de> Deserialize<'de>>(path: impl AsRef<Path>) -> Result<Vec<T>> {
    let name = path.as_ref().display().to_string();
    let file = File::open(path.as_ref()).map_err(|e| Error::io(&name, e))?;
    let reader = BufReader::new(file);
    let mut out = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(&name, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: T = serde_json::from_str(&line)
            .map_err(|e| Error::parse(&name, index + 1, e.to_string()))?;
        out.push(record);
    }
    Ok(out)
}

fn save_jsonl<T: Serialize>(path: impl AsRef<Path>, records: &[T]) -> Result<()> {
    let name = path.as_ref().display().to_string();
    let file = File::create(path.as_ref()).map_err(|e| Error::io(&name, e))?;
    let mut writer = BufWriter::new(file);
    for record in records {
        let line = serde_json::to_string(record)
            .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
        writeln!(writer, "{line}").map_err(|e| Error::io(&name, e))?;
    }
    Ok(())
}

pub fn load_predictions(path: impl AsRef<Path>) -> Result<Vec<PredictionRecord>> {
    load_jsonl(path)
}

pub fn save_predictions(path: impl AsRef<Path>, records: &[PredictionRecord]) -> Result<()> {
    save_jsonl(path, records)
}

pub fn load_ground_truth(path: impl AsRef<Path>) -> Result<Vec<GroundTruthRecord>> {
    load_jsonl(path)
}

pub fn save_ground_truth(path: impl AsRef<Path>, records: &[GroundTruthRecord]) -> Result<()> {
    save_jsonl(path, records)
}
