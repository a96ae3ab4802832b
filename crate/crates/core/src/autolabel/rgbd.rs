//! Labels from a registered RGB image and point cloud: the supporting plane
//! is removed (morphological filter refined by RANSAC), what remains is
//! clustered into object instances, object points get parts by colour, and
//! the labelled points vote for the labels of the pixels they project to.

use alloc::vec;
use alloc::vec::Vec;

use super::{check_object_class, match_part, ordered_rules, resolve_background, PartColorRule};
use crate::error::{Error, Result};
use crate::imaging::Image;
use crate::labels::LabelTriple;
use crate::pointcloud::{
    euclidean_clusters, progressive_morphological_filter, ransac_plane, CameraModel, KdTree, PmfParams,
    PointCloud, RansacParams,
};
use crate::taxonomy::{ClassTaxonomy, VOID_ID};

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPointCloud {
    pub cloud: PointCloud,
    pub object: Vec<bool>,
    /// 0 for background points.
    pub instance: Vec<u16>,
    /// 0 for no part.
    pub part: Vec<u16>,
}

impl LabeledPointCloud {
    pub fn background(cloud: PointCloud) -> Self {
        let n = cloud.len();
        Self {
            cloud,
            object: vec![false; n],
            instance: vec![0; n],
            part: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.cloud.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cloud.is_empty()
    }

    pub fn instance_count(&self) -> usize {
        self.instance.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.cloud.len();
        if self.object.len() != n || self.instance.len() != n || self.part.len() != n {
            return Err(Error::InvalidLabels(
                "per-point label arrays differ in length".into(),
            ));
        }
        for i in 0..n {
            if (self.instance[i] != 0) != self.object[i] {
                return Err(Error::InvalidLabels(alloc::format!(
                    "point {i}: instance id set iff object flag"
                )));
            }
            if self.part[i] != 0 && !self.object[i] {
                return Err(Error::InvalidLabels(alloc::format!(
                    "point {i}: part on a background point"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct RgbdLabelConfig {
    pub pmf: PmfParams,
    pub ransac: RansacParams,
    /// metres
    pub cluster_radius: f64,
    pub cluster_min_points: usize,
    /// Thing class given to every cluster of this capture.
    pub object_class: u16,
    /// Stuff class for the supporting plane; `None` picks `table` if the
    /// taxonomy has it.
    pub background_class: Option<u16>,
    pub part_rules: Vec<PartColorRule>,
    pub catch_all_part: Option<u16>,
    pub knn_k: usize,
    /// pixels
    pub max_pixel_radius: f64,
}

impl Default for RgbdLabelConfig {
    fn default() -> Self {
        Self {
            pmf: PmfParams::default(),
            ransac: RansacParams::default(),
            cluster_radius: 0.01,
            cluster_min_points: 30,
            object_class: 1,
            background_class: None,
            part_rules: Vec::new(),
            catch_all_part: None,
            knn_k: 5,
            max_pixel_radius: 3.0,
        }
    }
}

impl RgbdLabelConfig {
    pub fn validate(&self, taxonomy: &ClassTaxonomy) -> Result<()> {
        self.pmf.validate()?;
        self.ransac.validate()?;
        if self.knn_k == 0 {
            return Err(Error::InvalidParameter("knn_k must be at least 1".into()));
        }
        if !(self.cluster_radius > 0.0 && self.cluster_radius.is_finite()) {
            return Err(Error::InvalidParameter("cluster_radius must be positive".into()));
        }
        if !(self.max_pixel_radius >= 0.0 && self.max_pixel_radius.is_finite()) {
            return Err(Error::InvalidParameter(
                "max_pixel_radius must be non-negative".into(),
            ));
        }
        check_object_class(self.object_class, taxonomy)?;
        resolve_background(self.background_class, taxonomy)?;
        ordered_rules(&self.part_rules, self.catch_all_part, self.object_class, taxonomy)?;
        Ok(())
    }
}

/// Ground removal and clustering. Clusters smaller than
/// `cluster_min_points` are left as background.
pub fn segment_objects(cloud: &PointCloud, config: &RgbdLabelConfig) -> Result<LabeledPointCloud> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let positions = cloud.positions();
    let mut ground = progressive_morphological_filter(cloud, &config.pmf)?;
    let candidates: Vec<[f64; 3]> = positions
        .iter()
        .zip(&ground)
        .filter(|(_, &g)| g)
        .map(|(p, _)| *p)
        .collect();
    let fit = ransac_plane(&candidates, &config.ransac)?;
    for (p, g) in positions.iter().zip(ground.iter_mut()) {
        if fit.plane.distance(*p) <= config.ransac.distance_threshold {
            *g = true;
        }
    }

    let rest: Vec<usize> = (0..cloud.len()).filter(|&i| !ground[i]).collect();
    let rest_positions: Vec<[f64; 3]> = rest.iter().map(|&i| positions[i]).collect();
    let ids = euclidean_clusters(&rest_positions, config.cluster_radius, config.cluster_min_points);
    let mut out = LabeledPointCloud::background(cloud.clone());
    for (&i, &id) in rest.iter().zip(&ids) {
        if id != 0 {
            let id =
                u16::try_from(id).map_err(|_| Error::InvalidParameter("more than 65535 clusters".into()))?;
            out.object[i] = true;
            out.instance[i] = id;
        }
    }
    Ok(out)
}

/// Assigns parts to object points by the first matching colour rule.
pub fn label_parts(
    labeled: &LabeledPointCloud,
    rules: &[PartColorRule],
    catch_all: Option<u16>,
    object_class: u16,
    taxonomy: &ClassTaxonomy,
) -> Result<LabeledPointCloud> {
    let ordered = ordered_rules(rules, catch_all, object_class, taxonomy)?;
    let mut out = labeled.clone();
    for (i, p) in labeled.cloud.points.iter().enumerate() {
        out.part[i] = if labeled.object[i] {
            match_part(&ordered, p.rgb(), catch_all)
        } else {
            0
        };
    }
    Ok(out)
}

/// A point's projection together with the labels it votes for.
#[derive(Debug, Clone, Copy)]
pub struct ProjectedVoter {
    pub u: f64,
    pub v: f64,
    pub depth: f64,
    pub semantic: u16,
    pub instance: u16,
    pub part: u16,
}

/// In-frame projections in canonical order (by position, then depth, then
/// labels), so that results do not depend on the order of the input points.
pub fn projected_voters(
    labeled: &LabeledPointCloud,
    camera: &CameraModel,
    object_class: u16,
    background_class: u16,
) -> Vec<ProjectedVoter> {
    let mut voters: Vec<ProjectedVoter> = camera
        .project(&labeled.cloud)
        .into_iter()
        .enumerate()
        .filter(|(_, pr)| pr.in_frame)
        .map(|(i, pr)| ProjectedVoter {
            u: pr.u,
            v: pr.v,
            depth: pr.depth,
            semantic: if labeled.object[i] {
                object_class
            } else {
                background_class
            },
            instance: labeled.instance[i],
            part: labeled.part[i],
        })
        .collect();
    voters.sort_by(|a, b| {
        a.u.total_cmp(&b.u)
            .then(a.v.total_cmp(&b.v))
            .then(a.depth.total_cmp(&b.depth))
            .then((a.semantic, a.instance, a.part).cmp(&(b.semantic, b.instance, b.part)))
    });
    voters
}

/// Majority label among `voters` (ordered nearest first); ties go to the
/// tied label whose first voter is nearest.
fn majority<T: Copy + PartialEq>(voters: impl Iterator<Item = T>) -> Option<T> {
    let mut tally: Vec<(T, usize)> = Vec::new();
    for v in voters {
        match tally.iter_mut().find(|(t, _)| *t == v) {
            Some((_, n)) => *n += 1,
            None => tally.push((v, 1)),
        }
    }
    // tally is in first-seen order, so max_by_key must prefer earlier entries
    let best = tally.iter().map(|&(_, n)| n).max()?;
    tally.into_iter().find(|&(_, n)| n == best).map(|(t, _)| t)
}

/// Votes the labels of one pixel from its nearest voters (nearest first).
/// Semantic class is decided first; instance and part are then voted among
/// the voters that agree with it, which keeps the triple consistent.
pub fn vote(neighbours: &[ProjectedVoter]) -> (u16, u16, u16) {
    let Some(semantic) = majority(neighbours.iter().map(|v| v.semantic)) else {
        return (VOID_ID, 0, VOID_ID);
    };
    let agreeing = || neighbours.iter().filter(move |v| v.semantic == semantic);
    let instance = majority(agreeing().map(|v| v.instance)).unwrap_or(0);
    let part = majority(agreeing().map(|v| v.part)).unwrap_or(VOID_ID);
    (semantic, instance, part)
}

/// Rasterises a labelled cloud into a label triple by k-nearest voting in
/// image space. Pixels whose nearest projection is farther than
/// `max_pixel_radius` stay void; a cloud with nothing in frame gives an
/// all-void triple.
pub fn project_labels(
    labeled: &LabeledPointCloud,
    camera: &CameraModel,
    taxonomy: &ClassTaxonomy,
    config: &RgbdLabelConfig,
) -> Result<LabelTriple> {
    camera.validate()?;
    labeled.validate()?;
    check_object_class(config.object_class, taxonomy)?;
    if config.knn_k == 0 {
        return Err(Error::InvalidParameter("knn_k must be at least 1".into()));
    }
    let background = resolve_background(config.background_class, taxonomy)?;
    let voters = projected_voters(labeled, camera, config.object_class, background);
    let (w, h) = (camera.width, camera.height);
    let mut triple = LabelTriple::void(w, h);
    if voters.is_empty() {
        return Ok(triple);
    }
    let tree = KdTree::new(voters.iter().map(|v| [v.u, v.v]).collect());
    let r2 = config.max_pixel_radius * config.max_pixel_radius;
    let mut chosen = Vec::with_capacity(config.knn_k);
    for y in 0..h {
        for x in 0..w {
            let hits = tree.nearest(&[x as f64, y as f64], config.knn_k);
            if hits.first().is_none_or(|&(_, d2)| d2 > r2) {
                continue;
            }
            chosen.clear();
            chosen.extend(hits.iter().map(|&(i, _)| voters[i]));
            let (s, i, p) = vote(&chosen);
            triple.semantic.set(x, y, s);
            triple.instance.set(x, y, i);
            triple.part.set(x, y, p);
        }
    }
    Ok(triple)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RgbdSample {
    pub image: Image,
    pub labels: LabelTriple,
    pub cloud: LabeledPointCloud,
}

/// Full pipeline: segmentation, part colouring and projection.
pub fn generate_rgbd_sample(
    image: &Image,
    cloud: &PointCloud,
    camera: &CameraModel,
    taxonomy: &ClassTaxonomy,
    config: &RgbdLabelConfig,
) -> Result<RgbdSample> {
    config.validate(taxonomy)?;
    camera.validate()?;
    image.require_dims((camera.width, camera.height))?;
    let segmented = segment_objects(cloud, config)?;
    let labeled = label_parts(
        &segmented,
        &config.part_rules,
        config.catch_all_part,
        config.object_class,
        taxonomy,
    )?;
    let labels = project_labels(&labeled, camera, taxonomy, config)?;
    Ok(RgbdSample {
        image: image.clone(),
        labels,
        cloud: labeled,
    })
}

/// Number of pixels that received a label.
pub fn labelled_pixels(triple: &LabelTriple) -> usize {
    triple
        .semantic
        .as_slice()
        .iter()
        .filter(|&&s| s != VOID_ID)
        .count()
}
