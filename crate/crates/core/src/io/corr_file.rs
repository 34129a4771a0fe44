//! Correspondence text files: one pair per line as
//! `ox oy oz sx sy sz confidence`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::fit::CorrespondenceSet;

pub fn load_correspondences(path: impl AsRef<Path>) -> Result<CorrespondenceSet> {
    let name = path.as_ref().display().to_string();
    let file = File::open(path.as_ref()).map_err(|e| Error::io(&name, e))?;
    let reader = BufReader::new(file);
    let mut object = Vec::new();
    let mut scene = Vec::new();
    let mut confidence = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line.map_err(|e| Error::io(&name, e))?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let values: Vec<f64> = line
            .split_ascii_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::parse(&name, line_no, format!("bad number '{t}'")))
            })
            .collect::<Result<_>>()?;
        if values.len() != 7 {
            return Err(Error::parse(
                &name,
                line_no,
                format!("expected 7 values, found {}", values.len()),
            ));
        }
        object.push(Vector3::new(values[0], values[1], values[2]));
        scene.push(Vector3::new(values[3], values[4], values[5]));
        confidence.push(values[6]);
    }
    CorrespondenceSet::new(object, scene, confidence)
}

pub fn save_correspondences(path: impl AsRef<Path>, corr: &CorrespondenceSet) -> Result<()> {
    let name = path.as_ref().display().to_string();
    let file = File::create(path.as_ref()).map_err(|e| Error::io(&name, e))?;
    let mut writer = BufWriter::new(file);
    for i in 0..corr.len() {
        let o = corr.object_points()[i];
        let s = corr.scene_points()[i];
        writeln!(
            writer,
            "{} {} {} {} {} {} {}",
            o.x,
            o.y,
            o.z,
            s.x,
            s.y,
            s.z,
            corr.confidences()[i]
        )
        .map_err(|e| Error::io(&name, e))?;
    }
    Ok(())
}
