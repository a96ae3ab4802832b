use alloc::vec::Vec;

use super::{BitMask, Image};
use crate::error::{Error, Result};
use crate::grid::Grid;

fn check_window(window: usize) -> Result<usize> {
    if window.is_multiple_of(2) {
        return Err(Error::EvenWindow(window));
    }
    Ok(window / 2)
}

/// Separable square-window extremum filter. Windows are clipped at the border.
fn filter<T: Copy>(src: &[T], width: usize, height: usize, r: usize, pick: fn(T, T) -> T) -> Vec<T> {
    let mut rows = Vec::with_capacity(src.len());
    for y in 0..height {
        let row = &src[y * width..(y + 1) * width];
        for x in 0..width {
            let lo = x.saturating_sub(r);
            let hi = (x + r).min(width - 1);
            rows.push(row[lo + 1..=hi].iter().fold(row[lo], |a, &b| pick(a, b)));
        }
    }
    let mut out = rows.clone();
    for y in 0..height {
        let lo = y.saturating_sub(r);
        let hi = (y + r).min(height - 1);
        for x in 0..width {
            let mut acc = rows[lo * width + x];
            for yy in lo + 1..=hi {
                acc = pick(acc, rows[yy * width + x]);
            }
            out[y * width + x] = acc;
        }
    }
    out
}

fn close_plane<T: Copy + Ord>(src: &[T], width: usize, height: usize, r: usize) -> Vec<T> {
    if r == 0 || src.is_empty() {
        return src.to_vec();
    }
    let dilated = filter(src, width, height, r, Ord::max);
    filter(&dilated, width, height, r, Ord::min)
}

/// Greyscale closing (dilation then erosion) applied to each channel.
pub fn close_image(image: &Image, window: usize) -> Result<Image> {
    let r = check_window(window)?;
    let (w, h) = image.dims();
    let c = image.channels() as usize;
    let mut out = image.clone();
    for ch in 0..c {
        let plane: Vec<u8> = image.data().iter().skip(ch).step_by(c).copied().collect();
        let closed = close_plane(&plane, w, h, r);
        for (i, v) in closed.into_iter().enumerate() {
            out.data_mut()[i * c + ch] = v;
        }
    }
    Ok(out)
}

/// Binary closing with a square structuring element.
pub fn close_mask(mask: &BitMask, window: usize) -> Result<BitMask> {
    let r = check_window(window)?;
    let closed = close_plane(mask.as_slice(), mask.width(), mask.height(), r);
    Grid::from_vec(mask.width(), mask.height(), closed)
}
