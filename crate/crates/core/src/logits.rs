//! Network outputs consumed by fusion: semantic logits, part logits and
//! instance mask proposals.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::taxonomy::ClassTaxonomy;

/// A thing-class instance hypothesis with full-frame mask logits.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceProposal {
    pub class_id: u16,
    pub confidence: f64,
    pub mask_logits: Grid<f64>,
}

/// Semantic logits `[C_sem x H x W]`, part logits `[C_part x H x W]` and
/// instance proposals. Each logit tensor carries an explicit channel to
/// class-id mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct LogitStack {
    width: usize,
    height: usize,
    semantic_channels: Vec<u16>,
    semantic_logits: Vec<f64>,
    part_channels: Vec<u16>,
    part_logits: Vec<f64>,
    proposals: Vec<InstanceProposal>,
}

fn check_channels(what: &str, channels: &[u16], expected: impl Iterator<Item = u16>) -> Result<()> {
    let want: BTreeSet<u16> = expected.collect();
    let got: BTreeSet<u16> = channels.iter().copied().collect();
    if got.len() != channels.len() || got != want {
        return Err(Error::InvalidLogits(format!(
            "{what} channel order {channels:?} is not a permutation of the taxonomy ids {want:?}"
        )));
    }
    Ok(())
}

impl LogitStack {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        width: usize,
        height: usize,
        semantic_channels: Vec<u16>,
        semantic_logits: Vec<f64>,
        part_channels: Vec<u16>,
        part_logits: Vec<f64>,
        proposals: Vec<InstanceProposal>,
        taxonomy: &ClassTaxonomy,
    ) -> Result<Self> {
        check_channels(
            "semantic",
            &semantic_channels,
            taxonomy.semantic_classes().iter().map(|c| c.id),
        )?;
        check_channels(
            "part",
            &part_channels,
            taxonomy.part_classes().iter().map(|p| p.id),
        )?;
        let plane = width * height;
        if semantic_logits.len() != semantic_channels.len() * plane {
            return Err(Error::InvalidLogits(format!(
                "semantic tensor has {} values, expected {}x{}x{}",
                semantic_logits.len(),
                semantic_channels.len(),
                height,
                width
            )));
        }
        if part_logits.len() != part_channels.len() * plane {
            return Err(Error::InvalidLogits(format!(
                "part tensor has {} values, expected {}x{}x{}",
                part_logits.len(),
                part_channels.len(),
                height,
                width
            )));
        }
        if semantic_logits.iter().chain(&part_logits).any(|v| !v.is_finite()) {
            return Err(Error::InvalidLogits("non-finite logit".into()));
        }
        for (i, p) in proposals.iter().enumerate() {
            if !taxonomy.is_thing(p.class_id) {
                return Err(Error::InvalidLogits(format!(
                    "proposal {i} has non-thing class {}",
                    p.class_id
                )));
            }
            if !(0.0..=1.0).contains(&p.confidence) {
                return Err(Error::InvalidLogits(format!(
                    "proposal {i} confidence {} outside [0, 1]",
                    p.confidence
                )));
            }
            if p.mask_logits.dims() != (width, height) {
                return Err(Error::DimensionMismatch {
                    expected: (width, height),
                    found: p.mask_logits.dims(),
                });
            }
            if p.mask_logits.as_slice().iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidLogits(format!(
                    "proposal {i} has non-finite mask logit"
                )));
            }
        }
        Ok(Self {
            width,
            height,
            semantic_channels,
            semantic_logits,
            part_channels,
            part_logits,
            proposals,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn semantic_channels(&self) -> &[u16] {
        &self.semantic_channels
    }

    pub fn part_channels(&self) -> &[u16] {
        &self.part_channels
    }

    pub fn proposals(&self) -> &[InstanceProposal] {
        &self.proposals
    }

    /// The `H x W` semantic logit plane of class `id`.
    pub fn semantic_plane(&self, id: u16) -> Option<&[f64]> {
        let c = self.semantic_channels.iter().position(|&s| s == id)?;
        let n = self.pixel_count();
        Some(&self.semantic_logits[c * n..(c + 1) * n])
    }

    pub fn part_plane(&self, id: u16) -> Option<&[f64]> {
        let c = self.part_channels.iter().position(|&p| p == id)?;
        let n = self.pixel_count();
        Some(&self.part_logits[c * n..(c + 1) * n])
    }
}
