//! Per-pixel (semantic, instance, part) labels and panoptic segments.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::taxonomy::{ClassTaxonomy, VOID_ID};

/// Three labels per pixel. 0 is void (semantic, part) or "no instance".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelTriple {
    pub semantic: Grid<u16>,
    pub instance: Grid<u16>,
    pub part: Grid<u16>,
}

impl LabelTriple {
    pub fn new(semantic: Grid<u16>, instance: Grid<u16>, part: Grid<u16>) -> Result<Self> {
        semantic.same_dims(&instance)?;
        semantic.same_dims(&part)?;
        Ok(Self {
            semantic,
            instance,
            part,
        })
    }

    pub fn void(width: usize, height: usize) -> Self {
        Self {
            semantic: Grid::filled(width, height, VOID_ID),
            instance: Grid::filled(width, height, 0),
            part: Grid::filled(width, height, VOID_ID),
        }
    }

    pub fn width(&self) -> usize {
        self.semantic.width()
    }

    pub fn height(&self) -> usize {
        self.semantic.height()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.semantic.dims()
    }

    pub fn same_dims(&self, other: &LabelTriple) -> Result<()> {
        self.semantic.same_dims(&other.semantic)
    }

    /// Checks that instances sit only on thing classes and that every
    /// instance id maps to a single semantic class.
    pub fn validate(&self, taxonomy: &ClassTaxonomy) -> Result<()> {
        let mut owner: BTreeMap<u16, u16> = BTreeMap::new();
        let sem = self.semantic.as_slice();
        let inst = self.instance.as_slice();
        let part = self.part.as_slice();
        for i in 0..sem.len() {
            if sem[i] != VOID_ID && taxonomy.semantic(sem[i]).is_none() {
                return Err(Error::InvalidLabels(format!(
                    "pixel {i}: unknown semantic class {}",
                    sem[i]
                )));
            }
            if part[i] != VOID_ID && taxonomy.part(part[i]).is_none() {
                return Err(Error::InvalidLabels(format!(
                    "pixel {i}: unknown part class {}",
                    part[i]
                )));
            }
            if inst[i] == 0 {
                continue;
            }
            if !taxonomy.is_thing(sem[i]) {
                return Err(Error::InvalidLabels(format!(
                    "pixel {i}: instance {} on non-thing class {}",
                    inst[i], sem[i]
                )));
            }
            match owner.get(&inst[i]) {
                Some(&c) if c != sem[i] => {
                    return Err(Error::InvalidLabels(format!(
                        "instance {} spans classes {c} and {}",
                        inst[i], sem[i]
                    )))
                }
                Some(_) => {}
                None => {
                    owner.insert(inst[i], sem[i]);
                }
            }
        }
        Ok(())
    }
}

/// One panoptic segment: a (class, instance) pair and its pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PanopticSegment {
    pub class_id: u16,
    /// 0 for stuff.
    pub instance_id: u16,
    /// Row-major pixel indices, ascending.
    pub pixels: Vec<u32>,
}

impl PanopticSegment {
    pub fn pixel_count(&self) -> usize {
        self.pixels.len()
    }
}

/// Splits a triple into panoptic segments, ordered by (class, instance).
///
/// Stuff classes form one segment per class regardless of connectivity or
/// any instance ids present on them.
pub fn derive_segments(triple: &LabelTriple, taxonomy: &ClassTaxonomy) -> Vec<PanopticSegment> {
    let mut by_key: BTreeMap<(u16, u16), Vec<u32>> = BTreeMap::new();
    let sem = triple.semantic.as_slice();
    let inst = triple.instance.as_slice();
    for (i, (&class, &instance)) in sem.iter().zip(inst).enumerate() {
        if class == VOID_ID {
            continue;
        }
        let instance = if taxonomy.is_thing(class) { instance } else { 0 };
        by_key.entry((class, instance)).or_default().push(i as u32);
    }
    by_key
        .into_iter()
        .map(|((class_id, instance_id), pixels)| PanopticSegment {
            class_id,
            instance_id,
            pixels,
        })
        .collect()
}
