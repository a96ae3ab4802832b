//! Annotation-free label generation.
//!
//! [`rgbd`] labels a registered RGB image from a point cloud of the scene;
//! [`monitor`] keys objects out of blue/black monitor captures and
//! composites them onto new backgrounds.

pub mod monitor;
pub mod rgbd;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::imaging::HsvRange;
use crate::taxonomy::ClassTaxonomy;

/// Colour rule assigning a part class. Higher `priority` is tested first;
/// equal priorities keep declaration order.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PartColorRule {
    pub part_id: u16,
    pub hsv_range: HsvRange,
    #[cfg_attr(feature = "serde", serde(default))]
    pub priority: i32,
}

/// Validates rules against the taxonomy and returns them in test order.
pub(crate) fn ordered_rules<'a>(
    rules: &'a [PartColorRule],
    catch_all: Option<u16>,
    object_class: u16,
    taxonomy: &ClassTaxonomy,
) -> Result<Vec<&'a PartColorRule>> {
    let check = |id: u16| -> Result<()> {
        match taxonomy.parent_of(id) {
            None => Err(Error::UnknownPart(id)),
            Some(parent) if parent != object_class => Err(Error::InvalidParameter(alloc::format!(
                "part {id} belongs to class {parent}, not to the object class {object_class}"
            ))),
            Some(_) => Ok(()),
        }
    };
    for r in rules {
        check(r.part_id)?;
        r.hsv_range.validate()?;
    }
    if let Some(id) = catch_all {
        check(id)?;
    }
    let mut ordered: Vec<&PartColorRule> = rules.iter().collect();
    ordered.sort_by_key(|r| core::cmp::Reverse(r.priority));
    Ok(ordered)
}

pub(crate) fn match_part(ordered: &[&PartColorRule], rgb: [u8; 3], catch_all: Option<u16>) -> u16 {
    ordered
        .iter()
        .find(|r| r.hsv_range.contains_rgb(rgb))
        .map(|r| r.part_id)
        .or(catch_all)
        .unwrap_or(0)
}

/// Semantic id used for non-object pixels: the configured one, else the
/// taxonomy's `table` class, else void.
pub(crate) fn resolve_background(configured: Option<u16>, taxonomy: &ClassTaxonomy) -> Result<u16> {
    match configured {
        Some(0) => Ok(0),
        Some(id) => {
            let class = taxonomy.semantic(id).ok_or(Error::UnknownClass(id))?;
            if class.is_thing {
                return Err(Error::InvalidParameter(alloc::format!(
                    "background class {id} must be a stuff class"
                )));
            }
            Ok(id)
        }
        None => Ok(taxonomy
            .semantic_by_name("table")
            .filter(|c| !c.is_thing)
            .map_or(0, |c| c.id)),
    }
}

pub(crate) fn check_object_class(id: u16, taxonomy: &ClassTaxonomy) -> Result<()> {
    let class = taxonomy.semantic(id).ok_or(Error::UnknownClass(id))?;
    if !class.is_thing {
        return Err(Error::InvalidParameter(alloc::format!(
            "object class {id} must be a thing class"
        )));
    }
    Ok(())
}
