use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::BitMask;
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Component labelling of a mask: 0 is background, components are 1..=N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub labels: Grid<u32>,
    /// `sizes[i]` is the pixel count of component `i + 1`.
    pub sizes: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn mask_of(&self, id: u32) -> BitMask {
        self.labels.map(|&l| l == id)
    }
}

const N4: [(isize, isize); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];
const N8: [(isize, isize); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

pub(crate) fn neighbours(connectivity: u8) -> &'static [(isize, isize)] {
    if connectivity == 4 {
        &N4
    } else {
        &N8
    }
}

/// Labels set pixels by connectivity 4 or 8, numbering components in scan
/// order of their first pixel.
pub fn connected_components(mask: &BitMask, connectivity: u8) -> Result<Components> {
    if connectivity != 4 && connectivity != 8 {
        return Err(Error::InvalidParameter(alloc::format!(
            "connectivity must be 4 or 8, got {connectivity}"
        )));
    }
    let (w, h) = mask.dims();
    let offsets = neighbours(connectivity);
    let mut labels = Grid::filled(w, h, 0u32);
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for y in 0..h {
        for x in 0..w {
            if !*mask.get(x, y) || *labels.get(x, y) != 0 {
                continue;
            }
            let id = sizes.len() as u32 + 1;
            let mut size = 0;
            labels.set(x, y, id);
            queue.push_back((x, y));
            while let Some((cx, cy)) = queue.pop_front() {
                size += 1;
                for &(dx, dy) in offsets {
                    let (nx, ny) = (cx as isize + dx, cy as isize + dy);
                    if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                        continue;
                    }
                    let (nx, ny) = (nx as usize, ny as usize);
                    if *mask.get(nx, ny) && *labels.get(nx, ny) == 0 {
                        labels.set(nx, ny, id);
                        queue.push_back((nx, ny));
                    }
                }
            }
            sizes.push(size);
        }
    }
    Ok(Components { labels, sizes })
}

/// Sets every pixel that cannot be reached from the image border through
/// unset pixels (4-connected).
pub fn fill_holes(mask: &BitMask) -> BitMask {
    let (w, h) = mask.dims();
    let mut outside = vec![false; w * h];
    let mut queue = VecDeque::new();
    let seed = |x: usize, y: usize, outside: &mut Vec<bool>, queue: &mut VecDeque<(usize, usize)>| {
        let i = y * w + x;
        if !mask.as_slice()[i] && !outside[i] {
            outside[i] = true;
            queue.push_back((x, y));
        }
    };
    for x in 0..w {
        seed(x, 0, &mut outside, &mut queue);
        seed(x, h.saturating_sub(1), &mut outside, &mut queue);
    }
    for y in 0..h {
        seed(0, y, &mut outside, &mut queue);
        seed(w.saturating_sub(1), y, &mut outside, &mut queue);
    }
    while let Some((x, y)) = queue.pop_front() {
        for &(dx, dy) in &N4 {
            let (nx, ny) = (x as isize + dx, y as isize + dy);
            if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                continue;
            }
            seed(nx as usize, ny as usize, &mut outside, &mut queue);
        }
    }
    Grid::from_vec(w, h, outside.into_iter().map(|o| !o).collect()).expect("same dims")
}
