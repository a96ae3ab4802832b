//! Raster primitives: 8-bit images, bit masks, morphology, colour handling,
//! connected components and contours.

mod color;
mod components;
mod contour;
mod image;
mod morphology;

pub use color::{quantize_colors, rgb_to_hsv, threshold_hsv, HsvRange};
pub use components::{connected_components, fill_holes, Components};
pub use contour::{boundary, trace_outer_contour};
pub use image::{BitMask, Image};
pub use morphology::{close_image, close_mask};
