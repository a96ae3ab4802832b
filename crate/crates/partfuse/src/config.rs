//! JSON inputs: taxonomy, camera, run configuration and the per-image
//! logit sidecars.

use std::path::{Path, PathBuf};

use partfuse_core::autolabel::monitor::MonitorLabelConfig;
use partfuse_core::autolabel::rgbd::RgbdLabelConfig;
use partfuse_core::fusion::FusionParams;
use partfuse_core::overlay::OverlaySpec;
use partfuse_core::pointcloud::CameraModel;
use partfuse_core::{ClassTaxonomy, Grid, InstanceProposal, LogitStack, PartClass, SemanticClass};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{read_file, write_file, CoreContext, Error, Result};
use crate::formats::pnm::with_suffix;
use crate::formats::{read_tensor, TensorData};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let bytes = read_file(path)?;
    serde_json::from_slice(&bytes).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serialisable value");
    text.push('\n');
    write_file(path, text.as_bytes())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaxonomyFile {
    pub semantic_classes: Vec<SemanticClass>,
    #[serde(default)]
    pub part_classes: Vec<PartClass>,
}

impl From<&ClassTaxonomy> for TaxonomyFile {
    fn from(t: &ClassTaxonomy) -> Self {
        Self {
            semantic_classes: t.semantic_classes().to_vec(),
            part_classes: t.part_classes().to_vec(),
        }
    }
}

pub fn load_taxonomy(path: &Path) -> Result<ClassTaxonomy> {
    let file: TaxonomyFile = read_json(path)?;
    ClassTaxonomy::new(file.semantic_classes, file.part_classes)
        .context(format!("taxonomy {}", path.display()))
}

pub fn load_camera(path: &Path) -> Result<CameraModel> {
    let camera: CameraModel = read_json(path)?;
    camera.validate().context(format!("camera {}", path.display()))?;
    Ok(camera)
}

/// Everything `--config` may set. Flags given on the command line win over
/// these values.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub strategy: Option<String>,
    pub fusion: FusionParams,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub rgbd: RgbdLabelConfig,
    pub monitor: MonitorLabelConfig,
    pub overlay: Option<OverlaySpec>,
    /// Synthetic composites generated per monitor scene.
    pub composites_per_scene: usize,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        path.map_or_else(|| Ok(Self::default()), read_json)
    }
}

/// One entry of `<stem>.proposals.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProposalEntry {
    pub class_id: u16,
    pub confidence: f64,
    /// Relative to the directory holding the sidecar.
    pub mask_tensor_path: PathBuf,
}

/// Optional `<stem>.channels.json`; without it channels follow taxonomy
/// order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelOrder {
    pub semantic: Vec<u16>,
    #[serde(default)]
    pub part: Vec<u16>,
}

pub const SEM_LOGITS: &str = ".sem.ppt";
pub const PART_LOGITS: &str = ".part.ppt";
pub const PROPOSALS: &str = ".proposals.json";
pub const CHANNELS: &str = ".channels.json";

fn real_tensor(path: &Path, rank: usize) -> Result<(Vec<u32>, Vec<f64>)> {
    let t = read_tensor(path)?;
    if t.shape().len() != rank {
        return Err(Error::format(
            path,
            format!("expected a rank-{rank} tensor, got shape {:?}", t.shape()),
        ));
    }
    let shape = t.shape().to_vec();
    match t.into_data() {
        TensorData::F32(v) => Ok((shape, v.into_iter().map(f64::from).collect())),
        _ => Err(Error::format(path, "logits must be stored as f32 (dtype 1)")),
    }
}

/// Reads the logit stack of one image from `<stem>.sem.ppt`,
/// `<stem>.part.ppt` (absent means no part channels), `<stem>.proposals.json`
/// (absent means no proposals) and `<stem>.channels.json`.
pub fn load_logit_stack(stem: &Path, taxonomy: &ClassTaxonomy) -> Result<LogitStack> {
    let sem_path = with_suffix(stem, SEM_LOGITS);
    let (shape, semantic) = real_tensor(&sem_path, 3)?;
    let (height, width) = (shape[1] as usize, shape[2] as usize);

    let part_path = with_suffix(stem, PART_LOGITS);
    let (part_shape, part) = if part_path.exists() {
        real_tensor(&part_path, 3)?
    } else {
        (vec![0, shape[1], shape[2]], Vec::new())
    };
    if part_shape[1..] != shape[1..] {
        return Err(Error::format(
            &part_path,
            format!(
                "part logits {:?} do not match semantic logits {:?}",
                part_shape, shape
            ),
        ));
    }

    let channels_path = with_suffix(stem, CHANNELS);
    let channels = if channels_path.exists() {
        read_json(&channels_path)?
    } else {
        ChannelOrder {
            semantic: taxonomy.semantic_classes().iter().map(|c| c.id).collect(),
            part: taxonomy.part_classes().iter().map(|p| p.id).collect(),
        }
    };
    let part_channels = if part.is_empty() && part_shape[0] == 0 {
        Vec::new()
    } else {
        channels.part
    };

    let proposals_path = with_suffix(stem, PROPOSALS);
    let mut proposals = Vec::new();
    if proposals_path.exists() {
        let entries: Vec<ProposalEntry> = read_json(&proposals_path)?;
        let base = proposals_path.parent().unwrap_or(Path::new("."));
        for e in entries {
            let mask_path = base.join(&e.mask_tensor_path);
            let (mshape, mask) = real_tensor(&mask_path, 2)?;
            let grid = Grid::from_vec(mshape[1] as usize, mshape[0] as usize, mask)
                .context(format!("mask {}", mask_path.display()))?;
            proposals.push(InstanceProposal {
                class_id: e.class_id,
                confidence: e.confidence,
                mask_logits: grid,
            });
        }
    }
    LogitStack::new(
        width,
        height,
        channels.semantic,
        semantic,
        part_channels,
        part,
        proposals,
        taxonomy,
    )
    .context(format!("logits {}", stem.display()))
}
