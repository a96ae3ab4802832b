//! Progressive morphological filter.
//!
//! The cloud is rasterised into a minimum-height surface on an `x, y` grid.
//! The surface is then opened (grey erosion followed by dilation with a
//! square window of half-width `w` cells) for `w = initial_window,
//! 2 * initial_window, ...` up to `max_window`. At each step a point whose
//! height exceeds the opened surface of its cell by more than
//!
//! ```text
//! min(initial_height_threshold + slope * (w - initial_window) * cell_size,
//!     max_height_threshold)
//! ```
//!
//! is marked as non-ground for good. Empty cells are ignored by both
//! erosion and dilation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::PointCloud;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct PmfParams {
    /// metres
    pub cell_size: f64,
    /// cells
    pub initial_window: usize,
    pub max_window: usize,
    pub slope: f64,
    /// metres
    pub initial_height_threshold: f64,
    pub max_height_threshold: f64,
}

impl Default for PmfParams {
    fn default() -> Self {
        Self {
            cell_size: 0.01,
            initial_window: 1,
            max_window: 16,
            slope: 0.3,
            initial_height_threshold: 0.005,
            max_height_threshold: 0.05,
        }
    }
}

impl PmfParams {
    pub fn validate(&self) -> Result<()> {
        let positive = self.cell_size > 0.0
            && self.initial_window > 0
            && self.slope > 0.0
            && self.initial_height_threshold > 0.0;
        let ordered = self.initial_window <= self.max_window
            && self.initial_height_threshold <= self.max_height_threshold;
        if !(positive && ordered) || !self.cell_size.is_finite() {
            return Err(Error::InvalidParameter(format!("{self:?}")));
        }
        Ok(())
    }

    fn height_threshold(&self, window: usize) -> f64 {
        let grown = self.initial_height_threshold
            + self.slope * (window - self.initial_window) as f64 * self.cell_size;
        grown.min(self.max_height_threshold)
    }
}

struct Raster {
    cols: usize,
    rows: usize,
    cells: Vec<Option<f64>>,
}

impl Raster {
    // one pass of a separable square min/max filter
    fn filter(&self, half: usize, pick: fn(f64, f64) -> f64) -> Raster {
        let pass = |src: &[Option<f64>], along_x: bool| -> Vec<Option<f64>> {
            let mut out = vec![None; src.len()];
            for r in 0..self.rows {
                for c in 0..self.cols {
                    let (pos, len) = if along_x { (c, self.cols) } else { (r, self.rows) };
                    let lo = pos.saturating_sub(half);
                    let hi = (pos + half).min(len - 1);
                    let mut acc: Option<f64> = None;
                    for t in lo..=hi {
                        let idx = if along_x {
                            r * self.cols + t
                        } else {
                            t * self.cols + c
                        };
                        if let Some(v) = src[idx] {
                            acc = Some(acc.map_or(v, |a| pick(a, v)));
                        }
                    }
                    out[r * self.cols + c] = acc;
                }
            }
            out
        };
        let horizontal = pass(&self.cells, true);
        Raster {
            cols: self.cols,
            rows: self.rows,
            cells: pass(&horizontal, false),
        }
    }

    fn open(&self, half: usize) -> Raster {
        self.filter(half, f64::min).filter(half, f64::max)
    }
}

/// Returns `true` for ground points.
pub fn progressive_morphological_filter(cloud: &PointCloud, params: &PmfParams) -> Result<Vec<bool>> {
    params.validate()?;
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in &cloud.points {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let cell_of = |v: f64, lo: f64| libm::floor((v - lo) / params.cell_size) as usize;
    let cols = cell_of(max_x, min_x) + 1;
    let rows = cell_of(max_y, min_y) + 1;
    let point_cells: Vec<usize> = cloud
        .points
        .iter()
        .map(|p| cell_of(p.y, min_y) * cols + cell_of(p.x, min_x))
        .collect();
    let mut surface = Raster {
        cols,
        rows,
        cells: vec![None; cols * rows],
    };
    for (p, &c) in cloud.points.iter().zip(&point_cells) {
        let slot = &mut surface.cells[c];
        *slot = Some(slot.map_or(p.z, |z: f64| z.min(p.z)));
    }

    let mut ground = vec![true; cloud.len()];
    let mut window = params.initial_window;
    loop {
        let opened = surface.open(window);
        let threshold = params.height_threshold(window);
        for ((p, &c), g) in cloud.points.iter().zip(&point_cells).zip(ground.iter_mut()) {
            if *g {
                let base = opened.cells[c].expect("occupied cell stays occupied");
                if p.z - base > threshold {
                    *g = false;
                }
            }
        }
        surface = opened;
        if window >= params.max_window {
            break;
        }
        window = (window * 2).min(params.max_window);
    }
    Ok(ground)
}
