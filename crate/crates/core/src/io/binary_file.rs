//! Raw binary exchange files: heatmap scores and instance labels.
//!
//! Both formats are an 8-byte magic, a little-endian u64 count, then the
//! packed little-endian payload.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

const SCORES_MAGIC: &[u8; 8] = b"HMSCORE1";
const LABELS_MAGIC: &[u8; 8] = b"INSTLBL1";

/// Per-point scores as 32-bit little-endian reals, order matching the
/// cloud file they accompany.
pub fn save_scores(path: impl AsRef<Path>, scores: &[f64]) -> Result<()> {
    let name = path.as_ref().display().to_string();
    let mut bytes = Vec::with_capacity(16 + 4 * scores.len());
    bytes.extend_from_slice(SCORES_MAGIC);
    bytes.extend_from_slice(&(scores.len() as u64).to_le_bytes());
    for &s in scores {
        bytes.extend_from_slice(&(s as f32).to_le_bytes());
    }
    fs::write(path.as_ref(), bytes).map_err(|e| Error::io(&name, e))
}

pub fn load_scores(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let name = path.as_ref().display().to_string();
    let bytes = fs::read(path.as_ref()).map_err(|e| Error::io(&name, e))?;
    let payload = check_header(&name, &bytes, SCORES_MAGIC, 4)?;
    Ok(payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
        .collect())
}

/// Per-point instance labels as 32-bit little-endian unsigned integers.
pub fn save_labels(path: impl AsRef<Path>, labels: &[u32]) -> Result<()> {
    let name = path.as_ref().display().to_string();
    let mut bytes = Vec::with_capacity(16 + 4 * labels.len());
    bytes.extend_from_slice(LABELS_MAGIC);
    bytes.extend_from_slice(&(labels.len() as u64).to_le_bytes());
    for &l in labels {
        bytes.extend_from_slice(&l.to_le_bytes());
    }
    fs::write(path.as_ref(), bytes).map_err(|e| Error::io(&name, e))
}

pub fn load_labels(path: impl AsRef<Path>) -> Result<Vec<u32>> {
    let name = path.as_ref().display().to_string();
    let bytes = fs::read(path.as_ref()).map_err(|e| Error::io(&name, e))?;
    let payload = check_header(&name, &bytes, LABELS_MAGIC, 4)?;
    Ok(payload
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect())
}

fn check_header<'a>(
    name: &str,
    bytes: &'a [u8],
    magic: &[u8; 8],
    element_size: usize,
) -> Result<&'a [u8]> {
    if bytes.len() < 16 {
        return Err(Error::parse(name, 0, "file shorter than its header"));
    }
    if &bytes[..8] != magic {
        return Err(Error::parse(
            name,
            0,
            format!("bad magic, expected {:?}", std::str::from_utf8(magic).unwrap()),
        ));
    }
    let count = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    let payload = &bytes[16..];
    if payload.len() != count * element_size {
        return Err(Error::parse(
            name,
            0,
            format!(
                "payload holds {} bytes but the header promises {}",
                payload.len(),
                count * element_size
            ),
        ));
    }
    Ok(payload)
}
