//! Point-cloud PLY loading and saving.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::ColoredPointCloud;
use crate::io::ply::{read_ply, write_ply};

pub fn load_cloud(path: impl AsRef<Path>) -> Result<ColoredPointCloud> {
    let name = path.as_ref().display().to_string();
    let file = File::open(path.as_ref()).map_err(|e| Error::io(&name, e))?;
    let mut reader = BufReader::new(file);
    let data = read_ply(&name, &mut reader)?;
    match data.colors {
        Some(colors) => ColoredPointCloud::with_colors(data.positions, colors),
        None => ColoredPointCloud::new(data.positions),
    }
}

pub fn save_cloud(path: impl AsRef<Path>, cloud: &ColoredPointCloud) -> Result<()> {
    let name = path.as_ref().display().to_string();
    let file = File::create(path.as_ref()).map_err(|e| Error::io(&name, e))?;
    let mut writer = BufWriter::new(file);
    write_ply(&name, &mut writer, cloud.positions(), cloud.colors(), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::test_dir;
    use nalgebra::Vector3;

    #[test]
    fn cloud_round_trips_bit_exactly() {
        let dir = test_dir("cloud_ply");
        let cloud = ColoredPointCloud::with_colors(
            vec![
                Vector3::new(0.123456789, -0.5, 0.75),
                Vector3::new(1e-9, 2.0, 0.333),
            ],
            vec![[0.1, 0.2, 0.3], [1.0, 0.0, 0.5]],
        )
        .unwrap();
        let first = dir.join("a.ply");
        let second = dir.join("b.ply");
        save_cloud(&first, &cloud).unwrap();
        let loaded = load_cloud(&first).unwrap();
        assert_eq!(loaded, cloud);
        save_cloud(&second, &loaded).unwrap();
        assert_eq!(
            std::fs::read(&first).unwrap(),
            std::fs::read(&second).unwrap()
        );
    }

    #[test]
    fn colorless_cloud_round_trips() {
        let dir = test_dir("cloud_plain");
        let cloud =
            ColoredPointCloud::new(vec![Vector3::new(0.1, 0.2, 0.3)]).unwrap();
        let path = dir.join("p.ply");
        save_cloud(&path, &cloud).unwrap();
        assert_eq!(load_cloud(&path).unwrap(), cloud);
    }
}
