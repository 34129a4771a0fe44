//! Small single-purpose files: camera intrinsics and segment indices.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::CameraIntrinsics;

pub fn load_intrinsics(path: impl AsRef<Path>) -> Result<CameraIntrinsics> {
    let name = path.as_ref().display().to_string();
    let text = fs::read_to_string(path.as_ref()).map_err(|e| Error::io(&name, e))?;
    let cam: CameraIntrinsics = serde_json::from_str(&text)
        .map_err(|e| Error::parse(&name, e.line(), e.to_string()))?;
    cam.validate()?;
    Ok(cam)
}

pub fn save_intrinsics(path: impl AsRef<Path>, cam: &CameraIntrinsics) -> Result<()> {
    let name = path.as_ref().display().to_string();
    let text = serde_json::to_string_pretty(cam)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
    fs::write(path.as_ref(), text + "\n").map_err(|e| Error::io(&name, e))
}

/// Segment indices, one decimal index per line.
pub fn save_indices(path: impl AsRef<Path>, indices: &[usize]) -> Result<()> {
    let name = path.as_ref().display().to_string();
    let mut text = String::new();
    for i in indices {
        text.push_str(&i.to_string());
        text.push('\n');
    }
    fs::write(path.as_ref(), text).map_err(|e| Error::io(&name, e))
}

pub fn load_indices(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let name = path.as_ref().display().to_string();
    let text = fs::read_to_string(path.as_ref()).map_err(|e| Error::io(&name, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(index, line)| {
            line.trim()
                .parse::<usize>()
                .map_err(|_| Error::parse(&name, index + 1, format!("bad index '{line}'")))
        })
        .collect()
}
