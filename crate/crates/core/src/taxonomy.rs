//! Semantic and part class vocabulary.
//!
//! Semantic ids and part ids live in two disjoint id spaces. Id 0 is void
//! in both.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub const VOID_ID: u16 = 0;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SemanticClass {
    pub id: u16,
    pub name: String,
    pub is_thing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PartClass {
    pub id: u16,
    pub name: String,
    pub parent_semantic_id: u16,
}

/// A validated class vocabulary. Construct with [`ClassTaxonomy::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTaxonomy {
    semantic: Vec<SemanticClass>,
    parts: Vec<PartClass>,
    semantic_index: BTreeMap<u16, usize>,
    part_index: BTreeMap<u16, usize>,
    // parts of each semantic class, in declaration order
    children: BTreeMap<u16, Vec<u16>>,
}

impl ClassTaxonomy {
    /// Validates a raw class description. Part ordering is declaration order.
    pub fn new(semantic: Vec<SemanticClass>, parts: Vec<PartClass>) -> Result<Self> {
        if semantic.is_empty() {
            return Err(Error::EmptySemanticClasses);
        }
        let mut semantic_index = BTreeMap::new();
        for (i, class) in semantic.iter().enumerate() {
            if class.id == VOID_ID {
                return Err(Error::ReservedId { space: "semantic" });
            }
            if semantic_index.insert(class.id, i).is_some() {
                return Err(Error::DuplicateId {
                    space: "semantic",
                    id: class.id,
                });
            }
        }
        let mut part_index = BTreeMap::new();
        let mut children: BTreeMap<u16, Vec<u16>> = BTreeMap::new();
        for (i, part) in parts.iter().enumerate() {
            if part.id == VOID_ID {
                return Err(Error::ReservedId { space: "part" });
            }
            if part_index.insert(part.id, i).is_some() {
                return Err(Error::DuplicateId {
                    space: "part",
                    id: part.id,
                });
            }
            if !semantic_index.contains_key(&part.parent_semantic_id) {
                return Err(Error::UnknownParent {
                    part_id: part.id,
                    parent_id: part.parent_semantic_id,
                });
            }
            children.entry(part.parent_semantic_id).or_default().push(part.id);
        }
        Ok(Self {
            semantic,
            parts,
            semantic_index,
            part_index,
            children,
        })
    }

    pub fn semantic_classes(&self) -> &[SemanticClass] {
        &self.semantic
    }

    pub fn part_classes(&self) -> &[PartClass] {
        &self.parts
    }

    pub fn semantic(&self, id: u16) -> Option<&SemanticClass> {
        self.semantic_index.get(&id).map(|&i| &self.semantic[i])
    }

    pub fn part(&self, id: u16) -> Option<&PartClass> {
        self.part_index.get(&id).map(|&i| &self.parts[i])
    }

    /// Position of a semantic class in declaration order.
    pub fn semantic_position(&self, id: u16) -> Option<usize> {
        self.semantic_index.get(&id).copied()
    }

    pub fn part_position(&self, id: u16) -> Option<usize> {
        self.part_index.get(&id).copied()
    }

    pub fn is_thing(&self, id: u16) -> bool {
        self.semantic(id).is_some_and(|c| c.is_thing)
    }

    /// Part ids belonging to semantic class `id`, in declaration order.
    pub fn parts_of(&self, id: u16) -> &[u16] {
        self.children.get(&id).map_or(&[], Vec::as_slice)
    }

    pub fn parent_of(&self, part_id: u16) -> Option<u16> {
        self.part(part_id).map(|p| p.parent_semantic_id)
    }

    pub fn has_parts(&self) -> bool {
        !self.parts.is_empty()
    }

    pub fn semantic_by_name(&self, name: &str) -> Option<&SemanticClass> {
        self.semantic.iter().find(|c| c.name == name)
    }

    pub fn part_by_name(&self, name: &str) -> Option<&PartClass> {
        self.parts.iter().find(|p| p.name == name)
    }

    /// The medical-objects vocabulary: three parts under `transfusion_bag`,
    /// and `table` as the only stuff class.
    pub fn medical() -> Self {
        let sem = |id, name: &str, is_thing| SemanticClass {
            id,
            name: name.into(),
            is_thing,
        };
        let part = |id, name: &str| PartClass {
            id,
            name: name.into(),
            parent_semantic_id: 1,
        };
        Self::new(
            alloc::vec![
                sem(1, "transfusion_bag", true),
                sem(2, "bottle", true),
                sem(3, "medical_bag", true),
                sem(4, "table", false),
            ],
            alloc::vec![
                part(1, "transfusion_bag_seal"),
                part(2, "transfusion_bag_center"),
                part(3, "transfusion_bag_other"),
            ],
        )
        .expect("built-in taxonomy is valid")
    }
}
