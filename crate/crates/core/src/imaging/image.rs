use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Row-major 8-bit raster with one (grey) or three (RGB) channels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Image {
    width: usize,
    height: usize,
    channels: u8,
    data: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, channels: u8, data: Vec<u8>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidParameter(alloc::format!(
                "images have 1 or 3 channels, got {channels}"
            )));
        }
        if data.len() != width * height * channels as usize {
            return Err(Error::InvalidParameter(alloc::format!(
                "{}x{}x{} image needs {} samples, got {}",
                width,
                height,
                channels,
                width * height * channels as usize,
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn filled_rgb(width: usize, height: usize, rgb: [u8; 3]) -> Self {
        let mut data = Vec::with_capacity(width * height * 3);
        for _ in 0..width * height {
            data.extend_from_slice(&rgb);
        }
        Self {
            width,
            height,
            channels: 3,
            data,
        }
    }

    pub fn from_fn_rgb(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [u8; 3]) -> Self {
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self {
            width,
            height,
            channels: 3,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> &[u8] {
        let c = self.channels as usize;
        let i = (y * self.width + x) * c;
        &self.data[i..i + c]
    }

    pub fn pixel_mut(&mut self, x: usize, y: usize) -> &mut [u8] {
        let c = self.channels as usize;
        let i = (y * self.width + x) * c;
        &mut self.data[i..i + c]
    }

    /// RGB triple at (x, y); grey images replicate the single sample.
    pub fn rgb(&self, x: usize, y: usize) -> [u8; 3] {
        let p = self.pixel(x, y);
        if p.len() == 3 {
            [p[0], p[1], p[2]]
        } else {
            [p[0]; 3]
        }
    }

    pub(crate) fn require_channels(&self, expected: u8) -> Result<()> {
        if self.channels != expected {
            return Err(Error::ChannelCount {
                expected,
                found: self.channels,
            });
        }
        Ok(())
    }

    pub(crate) fn require_dims(&self, dims: (usize, usize)) -> Result<()> {
        if self.dims() != dims {
            return Err(Error::DimensionMismatch {
                expected: dims,
                found: self.dims(),
            });
        }
        Ok(())
    }

    /// Copy of this image with pixels outside `mask` set to zero.
    pub fn masked(&self, mask: &BitMask) -> Result<Image> {
        self.require_dims(mask.dims())?;
        let mut out = self.clone();
        let c = self.channels as usize;
        for (i, &m) in mask.as_slice().iter().enumerate() {
            if !m {
                out.data[i * c..(i + 1) * c].fill(0);
            }
        }
        Ok(out)
    }
}

/// One flag per pixel.
pub type BitMask = Grid<bool>;

impl Grid<bool> {
    pub fn empty(width: usize, height: usize) -> Self {
        Grid::filled(width, height, false)
    }

    pub fn count(&self) -> usize {
        self.as_slice().iter().filter(|&&b| b).count()
    }

    pub fn intersection(&self, other: &BitMask) -> BitMask {
        self.zip_map(other, |a, b| a && b)
    }

    pub fn union(&self, other: &BitMask) -> BitMask {
        self.zip_map(other, |a, b| a || b)
    }

    /// Intersection over union; two empty masks score 1.
    pub fn iou(&self, other: &BitMask) -> f64 {
        let inter = self.intersection(other).count();
        let uni = self.union(other).count();
        if uni == 0 {
            1.0
        } else {
            inter as f64 / uni as f64
        }
    }

    pub fn is_subset_of(&self, other: &BitMask) -> bool {
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .all(|(&a, &b)| !a || b)
    }

    pub fn zip_map(&self, other: &BitMask, f: impl Fn(bool, bool) -> bool) -> BitMask {
        assert_eq!(self.dims(), other.dims(), "mask dimensions differ");
        let data = self
            .as_slice()
            .iter()
            .zip(other.as_slice())
            .map(|(&a, &b)| f(a, b))
            .collect();
        Grid::from_vec(self.width(), self.height(), data).expect("dims checked")
    }
}
