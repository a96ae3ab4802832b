//! Part-panoptic fusion and the ablation strategies it is compared against.
//!
//! | strategy       | semantic/instance source        | part source                |
//! |----------------|---------------------------------|----------------------------|
//! | `partpanoptic` | enhanced semantic logits        | enhanced part logits       |
//! | `none`         | raw semantic logits             | raw part argmax            |
//! | `consensus`    | as `none`, conflicts fully void | as `none`, conflicts void  |
//! | `topdown`      | as `none`                       | as `none`, conflicts void  |
//!
//! A pixel conflicts when its part label is set and the part's parent class
//! differs from the pixel's semantic label.

mod agreement;
mod panoptic;
mod part_semantic;
mod planes;

use core::fmt;
use core::str::FromStr;

pub use agreement::{agreement_part_sem, agreement_sem_inst, sigmoid, sigmoid_rescaled};
pub use panoptic::{panoptic_fuse, FusionParams};
pub use part_semantic::{
    argmax_map, part_wise_fuse, raw_part_planes, raw_semantic_planes, semantic_wise_fuse,
};
pub use planes::ClassPlanes;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::labels::LabelTriple;
use crate::logits::LogitStack;
use crate::taxonomy::{ClassTaxonomy, VOID_ID};

/// Enhanced semantic and part logits.
#[derive(Debug, Clone, PartialEq)]
pub struct EnhancedLogits {
    pub semantic: ClassPlanes,
    pub part: Option<ClassPlanes>,
}

pub fn enhance(stack: &LogitStack, taxonomy: &ClassTaxonomy) -> EnhancedLogits {
    let semantic = semantic_wise_fuse(stack, taxonomy);
    let part = part_wise_fuse(stack, taxonomy).ok().map(|(p, _)| p);
    EnhancedLogits { semantic, part }
}

/// Ablation baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    /// No fusion; conflicting labels are kept.
    None,
    /// Conflicts void all three labels.
    Consensus,
    /// Conflicts void only the part label.
    TopDown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    PartPanoptic,
    Baseline(Baseline),
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::PartPanoptic,
        Strategy::Baseline(Baseline::None),
        Strategy::Baseline(Baseline::Consensus),
        Strategy::Baseline(Baseline::TopDown),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::PartPanoptic => "partpanoptic",
            Strategy::Baseline(Baseline::None) => "none",
            Strategy::Baseline(Baseline::Consensus) => "consensus",
            Strategy::Baseline(Baseline::TopDown) => "topdown",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::UnknownStrategy(s.into()))
    }
}

impl FromStr for Baseline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<Strategy>()? {
            Strategy::Baseline(b) => Ok(b),
            Strategy::PartPanoptic => Err(Error::UnknownStrategy(s.into())),
        }
    }
}

/// Full part-panoptic fusion.
///
/// The part map is all void when the taxonomy has no part classes.
pub fn fuse_part_panoptic(
    stack: &LogitStack,
    taxonomy: &ClassTaxonomy,
    params: &FusionParams,
) -> Result<LabelTriple> {
    let semantic = semantic_wise_fuse(stack, taxonomy);
    let (sem_map, inst_map) = panoptic_fuse(&semantic, stack.proposals(), taxonomy, params)?;
    let part_map = if taxonomy.has_parts() {
        part_wise_fuse(stack, taxonomy)?.1
    } else {
        Grid::filled(stack.width(), stack.height(), VOID_ID)
    };
    LabelTriple::new(sem_map, inst_map, part_map)
}

/// `true` where a set part label disagrees with the semantic label.
pub fn conflict_mask(triple: &LabelTriple, taxonomy: &ClassTaxonomy) -> Grid<bool> {
    let sem = triple.semantic.as_slice();
    let part = triple.part.as_slice();
    let mask = sem
        .iter()
        .zip(part)
        .map(|(&s, &p)| p != VOID_ID && taxonomy.parent_of(p) != Some(s))
        .collect();
    Grid::from_vec(triple.width(), triple.height(), mask).expect("sized")
}

pub fn fuse_baseline(
    stack: &LogitStack,
    taxonomy: &ClassTaxonomy,
    params: &FusionParams,
    baseline: Baseline,
) -> Result<LabelTriple> {
    let raw = raw_semantic_planes(stack, taxonomy);
    let (sem_map, inst_map) = panoptic_fuse(&raw, stack.proposals(), taxonomy, params)?;
    let part_map = if taxonomy.has_parts() {
        argmax_map(&raw_part_planes(stack, taxonomy))
    } else {
        Grid::filled(stack.width(), stack.height(), VOID_ID)
    };
    let mut triple = LabelTriple::new(sem_map, inst_map, part_map)?;
    if baseline == Baseline::None {
        return Ok(triple);
    }
    let conflicts = conflict_mask(&triple, taxonomy);
    for (i, &c) in conflicts.as_slice().iter().enumerate() {
        if !c {
            continue;
        }
        triple.part.as_mut_slice()[i] = VOID_ID;
        if baseline == Baseline::Consensus {
            triple.semantic.as_mut_slice()[i] = VOID_ID;
            triple.instance.as_mut_slice()[i] = 0;
        }
    }
    Ok(triple)
}

pub fn fuse(
    stack: &LogitStack,
    taxonomy: &ClassTaxonomy,
    params: &FusionParams,
    strategy: Strategy,
) -> Result<LabelTriple> {
    match strategy {
        Strategy::PartPanoptic => fuse_part_panoptic(stack, taxonomy, params),
        Strategy::Baseline(b) => fuse_baseline(stack, taxonomy, params, b),
    }
}

#[cfg(test)]
mod tests;
