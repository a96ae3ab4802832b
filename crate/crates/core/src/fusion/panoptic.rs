//! Panoptic fusion of enhanced semantic logits with instance proposals.
//!
//! 1. drop proposals below `confidence_min`;
//! 2. order by descending confidence, ties by proposal index;
//! 3. greedily accept a proposal unless `overlap_discard_ratio` or more of
//!    its footprint (`mask > mask_logit_threshold`) is already claimed;
//!    claimed pixels are cut from later proposals;
//! 4. score each accepted instance with [`agreement_sem_inst`] of its mask
//!    logits and the enhanced logit of its class;
//! 5. per pixel the best of {stuff logits} and {instance score} wins, ties
//!    by lowest class id then lowest instance id;
//! 6. instances that win fewer than `min_instance_area` pixels are dropped
//!    and step 5 is repeated without them.

use alloc::vec;
use alloc::vec::Vec;

use super::agreement::agreement_sem_inst;
use super::planes::ClassPlanes;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::logits::InstanceProposal;
use crate::taxonomy::{ClassTaxonomy, VOID_ID};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct FusionParams {
    pub confidence_min: f64,
    pub overlap_discard_ratio: f64,
    pub min_instance_area: usize,
    pub mask_logit_threshold: f64,
}

impl Default for FusionParams {
    fn default() -> Self {
        Self {
            confidence_min: 0.5,
            overlap_discard_ratio: 0.5,
            min_instance_area: 64,
            mask_logit_threshold: 0.0,
        }
    }
}

impl FusionParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.confidence_min) {
            return Err(Error::InvalidParameter(alloc::format!(
                "confidence_min {} outside [0, 1]",
                self.confidence_min
            )));
        }
        if !(self.overlap_discard_ratio > 0.0 && self.overlap_discard_ratio <= 1.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "overlap_discard_ratio {} outside (0, 1]",
                self.overlap_discard_ratio
            )));
        }
        if !self.mask_logit_threshold.is_finite() {
            return Err(Error::InvalidParameter(
                "mask_logit_threshold must be finite".into(),
            ));
        }
        Ok(())
    }
}

struct Accepted {
    class_id: u16,
    pixels: Vec<u32>,
    scores: Vec<f64>,
}

#[derive(Clone, Copy)]
struct Candidate {
    score: f64,
    class_id: u16,
    // acceptance rank + 1, 0 for stuff
    rank: usize,
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        self.score > other.score
            || (self.score == other.score && (self.class_id, self.rank) < (other.class_id, other.rank))
    }
}

/// Produces `(semantic_map, instance_map)` from enhanced semantic logits and
/// instance proposals. Instance ids are `1..=N` in acceptance order.
pub fn panoptic_fuse(
    semantic: &ClassPlanes,
    proposals: &[InstanceProposal],
    taxonomy: &ClassTaxonomy,
    params: &FusionParams,
) -> Result<(Grid<u16>, Grid<u16>)> {
    params.validate()?;
    let (w, h) = (semantic.width(), semantic.height());
    let n = w * h;

    let mut order: Vec<usize> = (0..proposals.len())
        .filter(|&i| proposals[i].confidence >= params.confidence_min)
        .collect();
    order.sort_by(|&a, &b| {
        proposals[b]
            .confidence
            .total_cmp(&proposals[a].confidence)
            .then(a.cmp(&b))
    });

    let mut claimed = vec![false; n];
    let mut accepted: Vec<Accepted> = Vec::new();
    for i in order {
        let p = &proposals[i];
        if p.mask_logits.dims() != (w, h) {
            return Err(Error::DimensionMismatch {
                expected: (w, h),
                found: p.mask_logits.dims(),
            });
        }
        let class_plane = semantic
            .plane(p.class_id)
            .ok_or(Error::UnknownClass(p.class_id))?;
        let mask = p.mask_logits.as_slice();
        let footprint: Vec<u32> = (0..n as u32)
            .filter(|&j| mask[j as usize] > params.mask_logit_threshold)
            .collect();
        if footprint.is_empty() {
            continue;
        }
        let overlap = footprint.iter().filter(|&&j| claimed[j as usize]).count();
        if overlap as f64 >= params.overlap_discard_ratio * footprint.len() as f64 {
            continue;
        }
        let pixels: Vec<u32> = footprint.into_iter().filter(|&j| !claimed[j as usize]).collect();
        for &j in &pixels {
            claimed[j as usize] = true;
        }
        let scores = pixels
            .iter()
            .map(|&j| agreement_sem_inst(mask[j as usize], class_plane[j as usize]))
            .collect();
        accepted.push(Accepted {
            class_id: p.class_id,
            pixels,
            scores,
        });
    }

    // surviving footprints are disjoint: at most one instance per pixel
    let mut instance_at: Vec<Option<(usize, f64)>> = vec![None; n];
    for (rank, inst) in accepted.iter().enumerate() {
        for (&j, &s) in inst.pixels.iter().zip(&inst.scores) {
            instance_at[j as usize] = Some((rank, s));
        }
    }

    let mut stuff: Vec<(u16, &[f64])> = taxonomy
        .semantic_classes()
        .iter()
        .filter(|c| !c.is_thing)
        .map(|c| (c.id, semantic.plane(c.id).expect("planes cover the taxonomy")))
        .collect();
    stuff.sort_by_key(|&(id, _)| id);

    let label = |active: &[bool]| -> Vec<Option<Candidate>> {
        (0..n)
            .map(|j| {
                let mut best: Option<Candidate> = None;
                for &(class_id, plane) in &stuff {
                    let c = Candidate {
                        score: plane[j],
                        class_id,
                        rank: 0,
                    };
                    if best.is_none_or(|b| c.beats(&b)) {
                        best = Some(c);
                    }
                }
                if let Some((rank, score)) = instance_at[j] {
                    if active[rank] {
                        let c = Candidate {
                            score,
                            class_id: accepted[rank].class_id,
                            rank: rank + 1,
                        };
                        if best.is_none_or(|b| c.beats(&b)) {
                            best = Some(c);
                        }
                    }
                }
                best
            })
            .collect()
    };

    let mut active = vec![true; accepted.len()];
    let mut winners = label(&active);
    let mut area = vec![0usize; accepted.len()];
    for c in winners.iter().flatten() {
        if c.rank > 0 {
            area[c.rank - 1] += 1;
        }
    }
    let mut dropped = false;
    for (a, &count) in active.iter_mut().zip(&area) {
        if count < params.min_instance_area {
            *a = false;
            dropped = true;
        }
    }
    if dropped {
        winners = label(&active);
    }

    // compact ids over instances that still own pixels
    let mut final_id = vec![0u16; accepted.len()];
    let mut present = vec![false; accepted.len()];
    for c in winners.iter().flatten() {
        if c.rank > 0 {
            present[c.rank - 1] = true;
        }
    }
    let mut next = 0u16;
    for (id, &p) in final_id.iter_mut().zip(&present) {
        if p {
            next += 1;
            *id = next;
        }
    }

    let mut sem_map = Vec::with_capacity(n);
    let mut inst_map = Vec::with_capacity(n);
    for c in &winners {
        match c {
            Some(c) => {
                sem_map.push(c.class_id);
                inst_map.push(if c.rank > 0 { final_id[c.rank - 1] } else { 0 });
            }
            None => {
                sem_map.push(VOID_ID);
                inst_map.push(0);
            }
        }
    }
    Ok((Grid::from_vec(w, h, sem_map)?, Grid::from_vec(w, h, inst_map)?))
}
