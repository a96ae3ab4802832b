//! Labels from monitor captures: the object is photographed once on a blue
//! and once on a black screen, keyed out of both, split into parts by
//! colour, and the resulting reference label is reused for captures of the
//! same static scene over arbitrary backgrounds.

use alloc::vec::Vec;

use super::{check_object_class, match_part, ordered_rules, resolve_background, PartColorRule};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::imaging::{
    close_image, connected_components, fill_holes, quantize_colors, threshold_hsv, BitMask, HsvRange, Image,
};
use crate::labels::LabelTriple;
use crate::rng::SplitMix64;
use crate::taxonomy::{ClassTaxonomy, VOID_ID};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct MonitorLabelConfig {
    pub closing_window: usize,
    pub quantize_levels: u32,
    pub blue_range: HsvRange,
    pub black_range: HsvRange,
    pub part_rules: Vec<PartColorRule>,
    pub catch_all_part: Option<u16>,
    pub object_class: u16,
    pub background_class: Option<u16>,
    /// Components smaller than this many pixels are dropped.
    pub min_component_area: usize,
}

impl Default for MonitorLabelConfig {
    fn default() -> Self {
        Self {
            closing_window: 5,
            quantize_levels: 8,
            blue_range: HsvRange {
                h_min: 190.0,
                h_max: 260.0,
                s_min: 0.4,
                s_max: 1.0,
                v_min: 0.2,
                v_max: 1.0,
            },
            black_range: HsvRange {
                h_min: 0.0,
                h_max: 360.0,
                s_min: 0.0,
                s_max: 1.0,
                v_min: 0.0,
                v_max: 0.15,
            },
            part_rules: Vec::new(),
            catch_all_part: None,
            object_class: 1,
            background_class: None,
            min_component_area: 100,
        }
    }
}

impl MonitorLabelConfig {
    pub fn validate(&self, taxonomy: &ClassTaxonomy) -> Result<()> {
        self.validate_raster_params()?;
        check_object_class(self.object_class, taxonomy)?;
        resolve_background(self.background_class, taxonomy)?;
        ordered_rules(&self.part_rules, self.catch_all_part, self.object_class, taxonomy)?;
        Ok(())
    }

    fn validate_raster_params(&self) -> Result<()> {
        if self.closing_window.is_multiple_of(2) {
            return Err(Error::EvenWindow(self.closing_window));
        }
        if !(1..=256).contains(&self.quantize_levels) {
            return Err(Error::LevelsOutOfRange(self.quantize_levels));
        }
        if self.min_component_area == 0 {
            return Err(Error::InvalidParameter(
                "min_component_area must be positive".into(),
            ));
        }
        self.blue_range.validate()?;
        self.black_range.validate()
    }
}

/// Object, part and instance labels of one monitor scene.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceLabel {
    pub object: BitMask,
    /// Part id per pixel, 0 outside the object (or where no part applies).
    pub part: Grid<u16>,
    /// Connected components of the object mask, numbered from 1.
    pub instance: Grid<u16>,
    pub object_class: u16,
    pub background_class: u16,
}

impl ReferenceLabel {
    pub fn dims(&self) -> (usize, usize) {
        self.object.dims()
    }

    /// Part ids present, ascending.
    pub fn part_ids(&self) -> Vec<u16> {
        let mut ids: Vec<u16> = self.part.as_slice().iter().copied().filter(|&p| p != 0).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn part_mask(&self, part_id: u16) -> BitMask {
        self.part.map(|&p| p == part_id && p != 0)
    }

    pub fn part_masks(&self) -> Vec<(u16, BitMask)> {
        self.part_ids()
            .into_iter()
            .map(|id| (id, self.part_mask(id)))
            .collect()
    }

    pub fn instance_count(&self) -> usize {
        self.instance.as_slice().iter().copied().max().unwrap_or(0) as usize
    }

    /// Object class on the mask, background class elsewhere.
    pub fn to_triple(&self) -> LabelTriple {
        let semantic = self.object.map(|&m| {
            if m {
                self.object_class
            } else {
                self.background_class
            }
        });
        LabelTriple {
            semantic,
            instance: self.instance.clone(),
            part: self.part.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dims = self.object.dims();
        if self.part.dims() != dims || self.instance.dims() != dims {
            return Err(Error::DimensionMismatch {
                expected: dims,
                found: if self.part.dims() != dims {
                    self.part.dims()
                } else {
                    self.instance.dims()
                },
            });
        }
        let o = self.object.as_slice();
        let bad = o
            .iter()
            .zip(self.part.as_slice())
            .zip(self.instance.as_slice())
            .any(|((&m, &p), &i)| !m && (p != 0 || i != 0) || m && i == 0);
        if bad {
            return Err(Error::InvalidLabels(
                "parts and instances must lie inside the object mask, which must be covered by instances"
                    .into(),
            ));
        }
        Ok(())
    }
}

/// `close -> quantize -> threshold`, keeping pixels outside `range`.
fn key_out(image: &Image, range: &HsvRange, config: &MonitorLabelConfig) -> Result<BitMask> {
    let closed = close_image(image, config.closing_window)?;
    let quantized = quantize_colors(&closed, config.quantize_levels)?;
    Ok(threshold_hsv(&quantized, range)?.map(|&inside| !inside))
}

fn drop_small_components(mask: &BitMask, min_area: usize) -> Result<BitMask> {
    let comps = connected_components(mask, 8)?;
    Ok(comps
        .labels
        .map(|&l| l != 0 && comps.sizes[l as usize - 1] >= min_area))
}

fn check_pair(a: &Image, b: &Image) -> Result<()> {
    a.require_channels(3)?;
    b.require_channels(3)?;
    b.require_dims(a.dims())
}

/// Object mask from a blue-screen and a black-screen capture of the same
/// scene: the blue capture gives a coarse mask, which restricts where the
/// black capture is keyed.
pub fn extract_reference_mask(
    img_blue: &Image,
    img_black: &Image,
    config: &MonitorLabelConfig,
) -> Result<BitMask> {
    check_pair(img_blue, img_black)?;
    config.validate_raster_params()?;
    let blue_mask = fill_holes(&key_out(img_blue, &config.blue_range, config)?);
    if blue_mask.count() == 0 {
        return Err(Error::EmptyResult("blue-screen keying"));
    }
    refine_with_black(img_black, &blue_mask, config)
}

/// The black-screen stage on its own: key `img_black` inside `coarse`.
pub fn refine_with_black(
    img_black: &Image,
    coarse: &BitMask,
    config: &MonitorLabelConfig,
) -> Result<BitMask> {
    let masked = img_black.masked(coarse)?;
    let survivors = key_out(&masked, &config.black_range, config)?.intersection(coarse);
    let mask = drop_small_components(&fill_holes(&survivors), config.min_component_area)?;
    if mask.count() == 0 {
        return Err(Error::EmptyResult("black-screen keying"));
    }
    Ok(mask)
}

/// Splits `object` into parts by the colour rules applied to the quantized
/// black-screen capture; instances are the connected components of the
/// object, which assumes objects in a scene do not touch.
pub fn extract_part_masks(
    img_blue: &Image,
    img_black: &Image,
    object: &BitMask,
    config: &MonitorLabelConfig,
    taxonomy: &ClassTaxonomy,
) -> Result<ReferenceLabel> {
    check_pair(img_blue, img_black)?;
    img_black.require_dims(object.dims())?;
    config.validate(taxonomy)?;
    let ordered = ordered_rules(
        &config.part_rules,
        config.catch_all_part,
        config.object_class,
        taxonomy,
    )?;
    let quantized = quantize_colors(img_black, config.quantize_levels)?;
    let (w, h) = object.dims();
    let part = Grid::from_fn(w, h, |x, y| {
        if *object.get(x, y) {
            match_part(&ordered, quantized.rgb(x, y), config.catch_all_part)
        } else {
            0
        }
    });
    let comps = connected_components(object, 8)?;
    if comps.count() > u16::MAX as usize {
        return Err(Error::InvalidParameter(
            "more than 65535 object components".into(),
        ));
    }
    let instance = comps.labels.map(|&l| l as u16);
    let reference = ReferenceLabel {
        object: object.clone(),
        part,
        instance,
        object_class: config.object_class,
        background_class: resolve_background(config.background_class, taxonomy)?,
    };
    reference.validate()?;
    Ok(reference)
}

/// Convenience composition of mask and part extraction.
pub fn extract_reference(
    img_blue: &Image,
    img_black: &Image,
    config: &MonitorLabelConfig,
    taxonomy: &ClassTaxonomy,
) -> Result<ReferenceLabel> {
    config.validate(taxonomy)?;
    let object = extract_reference_mask(img_blue, img_black, config)?;
    extract_part_masks(img_blue, img_black, &object, config, taxonomy)
}

/// Labels for a capture of the reference scene over another background.
pub fn transfer_labels(
    reference: &ReferenceLabel,
    target: &Image,
    taxonomy: &ClassTaxonomy,
) -> Result<(Image, LabelTriple)> {
    target.require_dims(reference.dims())?;
    let triple = reference.to_triple();
    triple.validate(taxonomy)?;
    Ok((target.clone(), triple))
}

/// Splices the object pixels of `object_image` onto `background`.
pub fn composite_synthetic(
    object_image: &Image,
    reference: &ReferenceLabel,
    background: &Image,
) -> Result<(Image, LabelTriple)> {
    object_image.require_dims(reference.dims())?;
    background.require_dims(reference.dims())?;
    if object_image.channels() != background.channels() {
        return Err(Error::ChannelCount {
            expected: object_image.channels(),
            found: background.channels(),
        });
    }
    let mut out = background.clone();
    let (w, h) = reference.dims();
    for y in 0..h {
        for x in 0..w {
            if *reference.object.get(x, y) {
                out.pixel_mut(x, y).copy_from_slice(object_image.pixel(x, y));
            }
        }
    }
    Ok((out, reference.to_triple()))
}

/// Index of the background for sample `index`, drawn from its own stream.
pub fn pick_background(seed: u64, index: u64, count: usize) -> Option<usize> {
    (count > 0).then(|| SplitMix64::for_index(seed, index).below(count as u64) as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flip {
    Identity,
    /// Half turn.
    Rot180,
    /// Upside down: rows reversed.
    Vertical,
    /// Mirror: columns reversed.
    Horizontal,
}

impl Flip {
    pub const ALL: [Flip; 4] = [Flip::Identity, Flip::Rot180, Flip::Vertical, Flip::Horizontal];

    pub fn suffix(self) -> &'static str {
        match self {
            Flip::Identity => "id",
            Flip::Rot180 => "rot180",
            Flip::Vertical => "vflip",
            Flip::Horizontal => "hflip",
        }
    }

    fn source(self, x: usize, y: usize, w: usize, h: usize) -> (usize, usize) {
        match self {
            Flip::Identity => (x, y),
            Flip::Rot180 => (w - 1 - x, h - 1 - y),
            Flip::Vertical => (x, h - 1 - y),
            Flip::Horizontal => (w - 1 - x, y),
        }
    }

    pub fn apply_grid<T: Clone>(self, grid: &Grid<T>) -> Grid<T> {
        let (w, h) = grid.dims();
        Grid::from_fn(w, h, |x, y| {
            let (sx, sy) = self.source(x, y, w, h);
            grid.get(sx, sy).clone()
        })
    }

    pub fn apply_image(self, image: &Image) -> Image {
        let (w, h) = image.dims();
        let mut out = image.clone();
        for y in 0..h {
            for x in 0..w {
                let (sx, sy) = self.source(x, y, w, h);
                out.pixel_mut(x, y).copy_from_slice(image.pixel(sx, sy));
            }
        }
        out
    }

    pub fn apply_triple(self, triple: &LabelTriple) -> LabelTriple {
        LabelTriple {
            semantic: self.apply_grid(&triple.semantic),
            instance: self.apply_grid(&triple.instance),
            part: self.apply_grid(&triple.part),
        }
    }
}

/// The four flip variants of a sample, in [`Flip::ALL`] order.
pub fn augment_flips(image: &Image, triple: &LabelTriple) -> Result<Vec<(Flip, Image, LabelTriple)>> {
    image.require_dims(triple.dims())?;
    Ok(Flip::ALL
        .iter()
        .map(|&f| (f, f.apply_image(image), f.apply_triple(triple)))
        .collect())
}

/// Semantic void check used by callers that need to know whether a
/// reference labelled anything.
pub fn is_all_void(triple: &LabelTriple) -> bool {
    triple.semantic.as_slice().iter().all(|&s| s == VOID_ID)
}
