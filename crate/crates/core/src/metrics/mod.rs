//! Panoptic Quality (PQ) and part-aware Panoptic Quality (PartPQ).
//!
//! Segments of the same class match when their IoU exceeds 0.5, which makes
//! the matching unique. Pixels that are void in the ground truth are left out
//! of every union, and predicted segments lying mostly on such pixels are
//! ignored rather than counted as false positives.
//!
//! PartPQ replaces the IoU of a true positive by its part IoU when the class
//! has parts. The part IoU averages, over the class's part classes, the IoU
//! of the predicted and ground-truth part maps restricted to the union of
//! the two matched segments. Part classes absent from both maps on that union
//! are skipped; if all are absent the segment IoU is used instead.
//!
//! Dataset scores pool TP/FP/FN counts and IoU sums over all images before
//! taking the quotient.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::labels::{derive_segments, LabelTriple, PanopticSegment};
use crate::taxonomy::{ClassTaxonomy, VOID_ID};

#[derive(Debug, Clone, PartialEq)]
pub struct TruePositive {
    /// Index into [`MatchResult::pred_segments`].
    pub pred: usize,
    /// Index into [`MatchResult::gt_segments`].
    pub gt: usize,
    pub iou: f64,
    /// Present when the class has part classes.
    pub part_iou: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClassMatch {
    pub tp: Vec<TruePositive>,
    pub fp: Vec<usize>,
    pub fn_: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub pred_segments: Vec<PanopticSegment>,
    pub gt_segments: Vec<PanopticSegment>,
    /// Keyed by semantic class id; only classes with a TP, FP or FN appear.
    pub classes: BTreeMap<u16, ClassMatch>,
    /// Predicted segments dropped for lying mostly on void ground truth.
    pub ignored: Vec<usize>,
}

fn segment_index(n: usize, segments: &[PanopticSegment]) -> Vec<u32> {
    let mut idx = vec![u32::MAX; n];
    for (s, seg) in segments.iter().enumerate() {
        for &p in &seg.pixels {
            idx[p as usize] = s as u32;
        }
    }
    idx
}

/// Matches predicted and ground-truth segments class by class.
pub fn match_segments(pred: &LabelTriple, gt: &LabelTriple, taxonomy: &ClassTaxonomy) -> Result<MatchResult> {
    pred.same_dims(gt)?;
    let n = pred.width() * pred.height();
    let pred_segments = derive_segments(pred, taxonomy);
    let gt_segments = derive_segments(gt, taxonomy);
    let pred_idx = segment_index(n, &pred_segments);
    let gt_idx = segment_index(n, &gt_segments);
    let gt_sem = gt.semantic.as_slice();

    let mut intersections: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    let mut on_void = vec![0usize; pred_segments.len()];
    for j in 0..n {
        let p = pred_idx[j];
        if p == u32::MAX {
            continue;
        }
        if gt_sem[j] == VOID_ID {
            on_void[p as usize] += 1;
            continue;
        }
        let g = gt_idx[j];
        if g != u32::MAX && pred_segments[p as usize].class_id == gt_segments[g as usize].class_id {
            *intersections.entry((p, g)).or_default() += 1;
        }
    }

    let mut classes: BTreeMap<u16, ClassMatch> = BTreeMap::new();
    let mut pred_matched = vec![false; pred_segments.len()];
    let mut gt_matched = vec![false; gt_segments.len()];
    for (&(p, g), &inter) in &intersections {
        let (p, g) = (p as usize, g as usize);
        let union = pred_segments[p].pixel_count() - on_void[p] + gt_segments[g].pixel_count() - inter;
        let iou = inter as f64 / union as f64;
        if iou <= 0.5 {
            continue;
        }
        let class_id = gt_segments[g].class_id;
        let part_iou = if taxonomy.parts_of(class_id).is_empty() {
            None
        } else {
            Some(part_iou(
                pred,
                gt,
                &pred_segments[p],
                &gt_segments[g],
                iou,
                taxonomy,
            )?)
        };
        pred_matched[p] = true;
        gt_matched[g] = true;
        classes.entry(class_id).or_default().tp.push(TruePositive {
            pred: p,
            gt: g,
            iou,
            part_iou,
        });
    }

    let mut ignored = Vec::new();
    for (p, seg) in pred_segments.iter().enumerate() {
        if pred_matched[p] {
            continue;
        }
        if 2 * on_void[p] > seg.pixel_count() {
            ignored.push(p);
        } else {
            classes.entry(seg.class_id).or_default().fp.push(p);
        }
    }
    for (g, seg) in gt_segments.iter().enumerate() {
        if !gt_matched[g] {
            classes.entry(seg.class_id).or_default().fn_.push(g);
        }
    }

    Ok(MatchResult {
        pred_segments,
        gt_segments,
        classes,
        ignored,
    })
}

/// Mean part IoU of a matched segment pair.
///
/// `segment_iou` is returned when no part class of the segment's class
/// occurs in either part map on the union of the two segments.
pub fn part_iou(
    pred: &LabelTriple,
    gt: &LabelTriple,
    pred_segment: &PanopticSegment,
    gt_segment: &PanopticSegment,
    segment_iou: f64,
    taxonomy: &ClassTaxonomy,
) -> Result<f64> {
    let parts = taxonomy.parts_of(gt_segment.class_id);
    if parts.is_empty() {
        return Err(Error::NoParts);
    }
    let pred_part = pred.part.as_slice();
    let gt_part = gt.part.as_slice();
    // (intersection, union) per part class
    let mut counts = vec![(0usize, 0usize); parts.len()];
    let mut tally = |j: u32| {
        let (pp, gp) = (pred_part[j as usize], gt_part[j as usize]);
        for (k, &part) in parts.iter().enumerate() {
            let (a, b) = (pp == part, gp == part);
            if a && b {
                counts[k].0 += 1;
            }
            if a || b {
                counts[k].1 += 1;
            }
        }
    };
    // merge the two sorted pixel lists
    let (a, b) = (&pred_segment.pixels, &gt_segment.pixels);
    let (mut i, mut k) = (0, 0);
    while i < a.len() || k < b.len() {
        let next = match (a.get(i), b.get(k)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                k += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (_, Some(&y)) => {
                k += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        tally(next);
    }
    let present: Vec<f64> = counts
        .iter()
        .filter(|&&(_, u)| u > 0)
        .map(|&(i, u)| i as f64 / u as f64)
        .collect();
    if present.is_empty() {
        return Ok(segment_iou);
    }
    Ok(present.iter().sum::<f64>() / present.len() as f64)
}

/// Pooled per-class counts and IoU sums.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ClassTally {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub iou_sum: f64,
    pub part_iou_sum: f64,
}

impl ClassTally {
    fn add(&mut self, m: &ClassMatch) {
        self.tp += m.tp.len();
        self.fp += m.fp.len();
        self.fn_ += m.fn_.len();
        for tp in &m.tp {
            self.iou_sum += tp.iou;
            self.part_iou_sum += tp.part_iou.unwrap_or(tp.iou);
        }
    }

    fn denominator(&self) -> f64 {
        self.tp as f64 + 0.5 * self.fp as f64 + 0.5 * self.fn_ as f64
    }

    pub fn pq(&self) -> f64 {
        let d = self.denominator();
        if d == 0.0 {
            0.0
        } else {
            self.iou_sum / d
        }
    }

    pub fn part_pq(&self) -> f64 {
        let d = self.denominator();
        if d == 0.0 {
            0.0
        } else {
            self.part_iou_sum / d
        }
    }

    pub fn in_ground_truth(&self) -> bool {
        self.tp + self.fn_ > 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PqSummary {
    /// Classes present in the prediction or the ground truth.
    pub per_class: BTreeMap<u16, f64>,
    /// Mean over `per_class`; `None` when both images are void.
    pub mean: Option<f64>,
}

/// Plain PQ of one match result.
pub fn pq(m: &MatchResult) -> PqSummary {
    let per_class: BTreeMap<u16, f64> = m
        .classes
        .iter()
        .map(|(&c, cm)| {
            let mut t = ClassTally::default();
            t.add(cm);
            (c, t.pq())
        })
        .collect();
    let mean = if per_class.is_empty() {
        None
    } else {
        Some(per_class.values().sum::<f64>() / per_class.len() as f64)
    };
    PqSummary { per_class, mean }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassScores {
    pub pq: f64,
    pub part_pq: f64,
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassRow {
    pub class_id: u16,
    pub name: String,
    /// `None` when the class never occurs in the ground truth.
    pub scores: Option<ClassScores>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    /// One row per semantic class, taxonomy order.
    pub rows: Vec<ClassRow>,
    /// Means over rows with scores.
    pub total_pq: Option<f64>,
    pub total_part_pq: Option<f64>,
}

impl MetricReport {
    pub fn row(&self, class_id: u16) -> Option<&ClassRow> {
        self.rows.iter().find(|r| r.class_id == class_id)
    }
}

/// Pools match results over a dataset into a report.
pub fn aggregate_dataset(matches: &[MatchResult], taxonomy: &ClassTaxonomy) -> Result<MetricReport> {
    if matches.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut tallies: BTreeMap<u16, ClassTally> = BTreeMap::new();
    for m in matches {
        for (&c, cm) in &m.classes {
            tallies.entry(c).or_default().add(cm);
        }
    }
    let rows: Vec<ClassRow> = taxonomy
        .semantic_classes()
        .iter()
        .map(|class| {
            let scores = tallies
                .get(&class.id)
                .filter(|t| t.in_ground_truth())
                .map(|t| ClassScores {
                    pq: t.pq(),
                    part_pq: t.part_pq(),
                    tp: t.tp,
                    fp: t.fp,
                    fn_: t.fn_,
                });
            ClassRow {
                class_id: class.id,
                name: class.name.clone(),
                scores,
            }
        })
        .collect();
    let scored: Vec<&ClassScores> = rows.iter().filter_map(|r| r.scores.as_ref()).collect();
    let (total_pq, total_part_pq) = if scored.is_empty() {
        (None, None)
    } else {
        let k = scored.len() as f64;
        (
            Some(scored.iter().map(|s| s.pq).sum::<f64>() / k),
            Some(scored.iter().map(|s| s.part_pq).sum::<f64>() / k),
        )
    };
    Ok(MetricReport {
        rows,
        total_pq,
        total_part_pq,
    })
}

/// PQ and PartPQ of a single image pair.
pub fn part_pq(pred: &LabelTriple, gt: &LabelTriple, taxonomy: &ClassTaxonomy) -> Result<MetricReport> {
    let m = match_segments(pred, gt, taxonomy)?;
    aggregate_dataset(core::slice::from_ref(&m), taxonomy)
}
