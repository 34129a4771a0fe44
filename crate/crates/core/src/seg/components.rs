//! Connected-component labeling on binary images.

/// A packed row-major binary image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    pixels: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            pixels: vec![false; width * height],
        }
    }

    pub fn from_pixels(width: usize, height: usize, pixels: Vec<bool>) -> Self {
        assert_eq!(pixels.len(), width * height);
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, u: usize, v: usize) -> bool {
        self.pixels[v * self.width + u]
    }

    pub fn set(&mut self, u: usize, v: usize, value: bool) {
        self.pixels[v * self.width + u] = value;
    }

    pub fn set_index(&mut self, index: usize, value: bool) {
        self.pixels[index] = value;
    }

    pub fn pixels(&self) -> &[bool] {
        &self.pixels
    }
}

/// One 8-connected component; pixel indices are flat row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub pixels: Vec<usize>,
}

impl Component {
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }
}

/// 8-connectivity labeling; components smaller than `min_size` pixels are
/// dropped and the rest are ordered by descending size (ties by first
/// pixel in scan order).
pub fn connected_components(image: &BinaryImage, min_size: usize) -> Vec<Component> {
    let (w, h) = (image.width, image.height);
    let mut visited = vec![false; w * h];
    let mut components = Vec::new();
    let mut queue = Vec::new();

    for start in 0..w * h {
        if !image.pixels[start] || visited[start] {
            continue;
        }
        let mut pixels = Vec::new();
        visited[start] = true;
        queue.push(start);
        while let Some(index) = queue.pop() {
            pixels.push(index);
            let (u, v) = (index % w, index / w);
            for dv in -1i64..=1 {
                for du in -1i64..=1 {
                    if du == 0 && dv == 0 {
                        continue;
                    }
                    let (uu, vv) = (u as i64 + du, v as i64 + dv);
                    if uu < 0 || vv < 0 || uu >= w as i64 || vv >= h as i64 {
                        continue;
                    }
                    let neighbor = vv as usize * w + uu as usize;
                    if image.pixels[neighbor] && !visited[neighbor] {
                        visited[neighbor] = true;
                        queue.push(neighbor);
                    }
                }
            }
        }
        if pixels.len() >= min_size {
            pixels.sort_unstable();
            components.push(Component { pixels });
        }
    }

    components.sort_by(|a, b| b.len().cmp(&a.len()).then(a.pixels[0].cmp(&b.pixels[0])));
    components
}
