//! Semantic-wise and part-wise fusion of the semantic and part heads.

use alloc::vec::Vec;

use super::agreement::agreement_part_sem;
use super::planes::ClassPlanes;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::logits::LogitStack;
use crate::taxonomy::{ClassTaxonomy, VOID_ID};

/// Enhanced semantic logits, one plane per semantic class in taxonomy order.
///
/// For a class with parts, each pixel's part logits are reduced by max over
/// the class's part channels and combined with the class's semantic logit by
/// [`agreement_part_sem`]. Classes without parts pass through unchanged.
pub fn semantic_wise_fuse(stack: &LogitStack, taxonomy: &ClassTaxonomy) -> ClassPlanes {
    let n = stack.pixel_count();
    let mut out =
        ClassPlanes::with_capacity(stack.width(), stack.height(), taxonomy.semantic_classes().len());
    for class in taxonomy.semantic_classes() {
        let sem = stack
            .semantic_plane(class.id)
            .expect("stack validated against taxonomy");
        let parts: Vec<&[f64]> = taxonomy
            .parts_of(class.id)
            .iter()
            .map(|&p| stack.part_plane(p).expect("stack validated against taxonomy"))
            .collect();
        if parts.is_empty() {
            out.push(class.id, sem.iter().copied());
            continue;
        }
        out.push(
            class.id,
            (0..n).map(|i| {
                let m = parts
                    .iter()
                    .map(|plane| plane[i])
                    .fold(f64::NEG_INFINITY, f64::max);
                agreement_part_sem(m, sem[i])
            }),
        );
    }
    out
}

/// Enhanced part logits (taxonomy order) and the per-pixel part argmax.
///
/// Ties go to the lowest part id.
pub fn part_wise_fuse(stack: &LogitStack, taxonomy: &ClassTaxonomy) -> Result<(ClassPlanes, Grid<u16>)> {
    if !taxonomy.has_parts() {
        return Err(Error::NoParts);
    }
    let mut enhanced =
        ClassPlanes::with_capacity(stack.width(), stack.height(), taxonomy.part_classes().len());
    for part in taxonomy.part_classes() {
        let logits = stack.part_plane(part.id).expect("validated");
        let sem = stack.semantic_plane(part.parent_semantic_id).expect("validated");
        enhanced.push(
            part.id,
            logits.iter().zip(sem).map(|(&p, &s)| agreement_part_sem(p, s)),
        );
    }
    let map = argmax_map(&enhanced);
    Ok((enhanced, map))
}

/// Per-pixel argmax over class planes; ties go to the lowest class id.
pub fn argmax_map(planes: &ClassPlanes) -> Grid<u16> {
    let (w, h) = (planes.width(), planes.height());
    let mut best: Vec<(f64, u16)> = alloc::vec![(f64::NEG_INFINITY, VOID_ID); w * h];
    for (id, plane) in planes.planes() {
        for (slot, &v) in best.iter_mut().zip(plane) {
            if slot.1 == VOID_ID || v > slot.0 || (v == slot.0 && id < slot.1) {
                *slot = (v, id);
            }
        }
    }
    Grid::from_vec(w, h, best.into_iter().map(|(_, id)| id).collect()).expect("sized")
}

/// Raw logits of a stack re-keyed into taxonomy order.
pub fn raw_semantic_planes(stack: &LogitStack, taxonomy: &ClassTaxonomy) -> ClassPlanes {
    let mut out =
        ClassPlanes::with_capacity(stack.width(), stack.height(), taxonomy.semantic_classes().len());
    for class in taxonomy.semantic_classes() {
        out.push(
            class.id,
            stack.semantic_plane(class.id).expect("validated").iter().copied(),
        );
    }
    out
}

pub fn raw_part_planes(stack: &LogitStack, taxonomy: &ClassTaxonomy) -> ClassPlanes {
    let mut out = ClassPlanes::with_capacity(stack.width(), stack.height(), taxonomy.part_classes().len());
    for part in taxonomy.part_classes() {
        out.push(
            part.id,
            stack.part_plane(part.id).expect("validated").iter().copied(),
        );
    }
    out
}
