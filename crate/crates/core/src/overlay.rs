//! Visualisation of label triples: class colours blended over the image,
//! 1-px part outlines and one bounding box per instance.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::imaging::{boundary, Image};
use crate::labels::LabelTriple;
use crate::taxonomy::{ClassTaxonomy, VOID_ID};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct OverlaySpec {
    pub class_colors: BTreeMap<u16, [u8; 3]>,
    pub part_colors: BTreeMap<u16, [u8; 3]>,
    pub boxes: bool,
    pub part_contours: bool,
    /// Weight of the class colour; 1 paints segments solid.
    pub alpha: f64,
}

impl Default for OverlaySpec {
    fn default() -> Self {
        Self {
            class_colors: BTreeMap::new(),
            part_colors: BTreeMap::new(),
            boxes: true,
            part_contours: true,
            alpha: 0.5,
        }
    }
}

fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [u8; 3] {
    let c = v * s;
    let hp = h / 60.0;
    let x = c * (1.0 - libm::fabs(hp % 2.0 - 1.0));
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    let q = |t: f64| libm::round((t + m) * 255.0) as u8;
    [q(r), q(g), q(b)]
}

fn golden_palette(n: usize, s: f64, v: f64, offset: f64) -> Vec<[u8; 3]> {
    (0..n)
        .map(|i| hsv_to_rgb((offset + i as f64 * 137.507_764) % 360.0, s, v))
        .collect()
}

impl OverlaySpec {
    /// Deterministic palette: hues spaced by the golden angle in taxonomy
    /// order.
    pub fn for_taxonomy(taxonomy: &ClassTaxonomy) -> Self {
        let sem = taxonomy.semantic_classes();
        let parts = taxonomy.part_classes();
        let class_colors = sem
            .iter()
            .zip(golden_palette(sem.len(), 0.8, 0.95, 20.0))
            .map(|(c, rgb)| (c.id, rgb))
            .collect();
        let part_colors = parts
            .iter()
            .zip(golden_palette(parts.len(), 1.0, 0.55, 200.0))
            .map(|(p, rgb)| (p.id, rgb))
            .collect();
        Self {
            class_colors,
            part_colors,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in [0, 1], got {}",
                self.alpha
            )));
        }
        let mut seen = BTreeMap::new();
        for (id, rgb) in &self.class_colors {
            if let Some(other) = seen.insert(*rgb, *id) {
                return Err(Error::InvalidParameter(format!(
                    "classes {other} and {id} share colour {rgb:?}"
                )));
            }
        }
        Ok(())
    }
}

/// Inclusive pixel extents of one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceBox {
    pub class_id: u16,
    pub instance_id: u16,
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

/// Bounding boxes of all (class, instance) pairs with instance != 0, ordered
/// by class then instance.
pub fn instance_boxes(triple: &LabelTriple) -> Vec<InstanceBox> {
    let mut boxes: BTreeMap<(u16, u16), InstanceBox> = BTreeMap::new();
    let (w, h) = triple.dims();
    for y in 0..h {
        for x in 0..w {
            let inst = *triple.instance.get(x, y);
            if inst == 0 {
                continue;
            }
            let class_id = *triple.semantic.get(x, y);
            boxes
                .entry((class_id, inst))
                .and_modify(|b| {
                    b.x0 = b.x0.min(x);
                    b.x1 = b.x1.max(x);
                    b.y1 = y;
                })
                .or_insert(InstanceBox {
                    class_id,
                    instance_id: inst,
                    x0: x,
                    y0: y,
                    x1: x,
                    y1: y,
                });
        }
    }
    boxes.into_values().collect()
}

fn blend(base: u8, colour: u8, alpha: f64) -> u8 {
    libm::round(base as f64 * (1.0 - alpha) + colour as f64 * alpha) as u8
}

const FALLBACK: [u8; 3] = [255, 255, 255];

/// Renders `triple` over `image` (grey images are promoted to RGB).
pub fn render_overlay(image: &Image, triple: &LabelTriple, spec: &OverlaySpec) -> Result<Image> {
    spec.validate()?;
    image.require_dims(triple.dims())?;
    let (w, h) = image.dims();
    let mut out = Image::from_fn_rgb(w, h, |x, y| image.rgb(x, y));
    let class_colour = |id: u16| spec.class_colors.get(&id).copied().unwrap_or(FALLBACK);

    for y in 0..h {
        for x in 0..w {
            let s = *triple.semantic.get(x, y);
            if s == VOID_ID {
                continue;
            }
            let c = class_colour(s);
            let p = out.pixel_mut(x, y);
            for k in 0..3 {
                p[k] = blend(p[k], c[k], spec.alpha);
            }
        }
    }

    if spec.part_contours {
        let mut ids: Vec<u16> = triple
            .part
            .as_slice()
            .iter()
            .copied()
            .filter(|&p| p != 0)
            .collect();
        ids.sort_unstable();
        ids.dedup();
        for id in ids {
            let colour = spec.part_colors.get(&id).copied().unwrap_or(FALLBACK);
            let edge = boundary(&triple.part.map(|&p| p == id));
            for y in 0..h {
                for x in 0..w {
                    if *edge.get(x, y) {
                        out.pixel_mut(x, y).copy_from_slice(&colour);
                    }
                }
            }
        }
    }

    if spec.boxes {
        for b in instance_boxes(triple) {
            let c = class_colour(b.class_id);
            for x in b.x0..=b.x1 {
                out.pixel_mut(x, b.y0).copy_from_slice(&c);
                out.pixel_mut(x, b.y1).copy_from_slice(&c);
            }
            for y in b.y0..=b.y1 {
                out.pixel_mut(b.x0, y).copy_from_slice(&c);
                out.pixel_mut(b.x1, y).copy_from_slice(&c);
            }
        }
    }
    Ok(out)
}
