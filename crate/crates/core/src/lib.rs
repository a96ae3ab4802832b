//! Part-aware panoptic fusion, panoptic quality metrics and the two
//! annotation-free labelling pipelines (RGB-D point clouds and
//! monitor-backed chroma keying).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, JSON
//! configuration and the command-line front end live in the `partfuse`
//! companion crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod autolabel;
pub mod error;
pub mod fusion;
pub mod grid;
pub mod imaging;
pub mod labels;
pub mod logits;
pub mod metrics;
pub mod overlay;
pub mod pointcloud;
pub mod rng;
pub mod synthetic;
pub mod taxonomy;

pub use error::{Error, Result};
pub use grid::Grid;
pub use labels::{derive_segments, LabelTriple, PanopticSegment};
pub use logits::{InstanceProposal, LogitStack};
pub use taxonomy::{ClassTaxonomy, PartClass, SemanticClass, VOID_ID};
