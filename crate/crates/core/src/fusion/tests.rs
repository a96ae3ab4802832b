use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::Strategy;
use super::*;
use crate::logits::InstanceProposal;
use crate::taxonomy::{PartClass, SemanticClass};

fn taxonomy(classes: &[(u16, bool)], parts: &[(u16, u16)]) -> ClassTaxonomy {
    ClassTaxonomy::new(
        classes
            .iter()
            .map(|&(id, is_thing)| SemanticClass {
                id,
                name: alloc::format!("s{id}"),
                is_thing,
            })
            .collect(),
        parts
            .iter()
            .map(|&(id, parent)| PartClass {
                id,
                name: alloc::format!("p{id}"),
                parent_semantic_id: parent,
            })
            .collect(),
    )
    .unwrap()
}

/// Builds a stack in taxonomy channel order from per-class closures.
fn stack(
    t: &ClassTaxonomy,
    w: usize,
    h: usize,
    sem: impl Fn(u16, usize, usize) -> f64,
    part: impl Fn(u16, usize, usize) -> f64,
    proposals: Vec<InstanceProposal>,
) -> LogitStack {
    let sem_ids: Vec<u16> = t.semantic_classes().iter().map(|c| c.id).collect();
    let part_ids: Vec<u16> = t.part_classes().iter().map(|p| p.id).collect();
    let mut s = Vec::new();
    for &id in &sem_ids {
        for y in 0..h {
            for x in 0..w {
                s.push(sem(id, x, y));
            }
        }
    }
    let mut p = Vec::new();
    for &id in &part_ids {
        for y in 0..h {
            for x in 0..w {
                p.push(part(id, x, y));
            }
        }
    }
    LogitStack::new(w, h, sem_ids, s, part_ids, p, proposals, t).unwrap()
}

fn in_box(x: usize, y: usize) -> bool {
    (3..13).contains(&x) && (3..13).contains(&y)
}

fn box_proposal(class_id: u16, confidence: f64) -> InstanceProposal {
    InstanceProposal {
        class_id,
        confidence,
        mask_logits: Grid::from_fn(16, 16, |x, y| if in_box(x, y) { 4.0 } else { -4.0 }),
    }
}

#[test]
fn no_proposals_is_stuff_argmax() {
    let t = taxonomy(&[(1, false), (2, false)], &[]);
    let s = stack(
        &t,
        4,
        1,
        |id, x, _| if id == 1 { x as f64 } else { 1.5 },
        |_, _, _| 0.0,
        vec![],
    );
    let planes = raw_semantic_planes(&s, &t);
    let (sem, inst) = panoptic_fuse(&planes, &[], &t, &FusionParams::default()).unwrap();
    assert_eq!(sem.as_slice(), &[2, 2, 1, 1]);
    assert!(inst.as_slice().iter().all(|&i| i == 0));
}

#[test]
fn agreeing_proposal_claims_its_footprint() {
    // class 1 thing, class 2 stuff at logit 0
    let t = taxonomy(&[(1, true), (2, false)], &[]);
    let s = stack(
        &t,
        16,
        16,
        |id, _, _| if id == 1 { 4.0 } else { 0.0 },
        |_, _, _| 0.0,
        vec![box_proposal(1, 0.9)],
    );
    assert!((agreement_sem_inst(4.0, 4.0) - 15.712_22).abs() < 1e-4);
    let planes = raw_semantic_planes(&s, &t);
    let (sem, inst) = panoptic_fuse(&planes, s.proposals(), &t, &FusionParams::default()).unwrap();
    for y in 0..16 {
        for x in 0..16 {
            if in_box(x, y) {
                assert_eq!((*sem.get(x, y), *inst.get(x, y)), (1, 1));
            } else {
                assert_eq!((*sem.get(x, y), *inst.get(x, y)), (2, 0));
            }
        }
    }
}

#[test]
fn duplicate_lower_confidence_proposal_is_discarded() {
    let t = taxonomy(&[(1, true), (2, false)], &[]);
    let s = stack(
        &t,
        16,
        16,
        |id, _, _| if id == 1 { 4.0 } else { 0.0 },
        |_, _, _| 0.0,
        vec![box_proposal(1, 0.8), box_proposal(1, 0.9)],
    );
    let (_, inst) = panoptic_fuse(
        &raw_semantic_planes(&s, &t),
        s.proposals(),
        &t,
        &FusionParams::default(),
    )
    .unwrap();
    assert_eq!(inst.as_slice().iter().copied().max(), Some(1));
    assert_eq!(inst.as_slice().iter().filter(|&&i| i == 1).count(), 100);
}

#[test]
fn low_confidence_and_small_instances_are_dropped() {
    let t = taxonomy(&[(1, true), (2, false)], &[]);
    let s = stack(
        &t,
        16,
        16,
        |id, _, _| if id == 1 { 4.0 } else { 0.0 },
        |_, _, _| 0.0,
        vec![box_proposal(1, 0.4)],
    );
    let planes = raw_semantic_planes(&s, &t);
    let (_, inst) = panoptic_fuse(&planes, s.proposals(), &t, &FusionParams::default()).unwrap();
    assert!(inst.as_slice().iter().all(|&i| i == 0));

    let s = stack(
        &t,
        16,
        16,
        |id, _, _| if id == 1 { 4.0 } else { 0.0 },
        |_, _, _| 0.0,
        vec![box_proposal(1, 0.9)],
    );
    let params = FusionParams {
        min_instance_area: 101,
        ..FusionParams::default()
    };
    let (sem, inst) = panoptic_fuse(&planes, s.proposals(), &t, &params).unwrap();
    assert!(inst.as_slice().iter().all(|&i| i == 0));
    assert!(sem.as_slice().iter().all(|&c| c == 2));
}

#[test]
fn partially_overlapping_proposal_keeps_unclaimed_pixels() {
    let t = taxonomy(&[(1, true), (2, false)], &[]);
    let left = InstanceProposal {
        class_id: 1,
        confidence: 0.9,
        mask_logits: Grid::from_fn(16, 16, |x, _| if x < 10 { 3.0 } else { -3.0 }),
    };
    // 16x6 right band overlapping 2 columns of `left`: 32 of 96 px claimed
    let right = InstanceProposal {
        class_id: 1,
        confidence: 0.7,
        mask_logits: Grid::from_fn(16, 16, |x, _| if x >= 8 { 3.0 } else { -3.0 }),
    };
    let s = stack(
        &t,
        16,
        16,
        |id, _, _| if id == 1 { 2.0 } else { 0.0 },
        |_, _, _| 0.0,
        vec![right, left],
    );
    let (_, inst) = panoptic_fuse(
        &raw_semantic_planes(&s, &t),
        s.proposals(),
        &t,
        &FusionParams::default(),
    )
    .unwrap();
    assert_eq!(*inst.get(9, 0), 1);
    assert_eq!(*inst.get(10, 0), 2);
    assert_eq!(inst.as_slice().iter().filter(|&&i| i == 2).count(), 96);
}

#[test]
fn all_zero_logits_pick_lowest_class() {
    let t = taxonomy(&[(3, false), (1, false), (2, false)], &[(1, 3), (2, 1)]);
    let s = stack(&t, 5, 4, |_, _, _| 0.0, |_, _, _| 0.0, vec![]);
    let tr = fuse_part_panoptic(&s, &t, &FusionParams::default()).unwrap();
    assert!(tr.semantic.as_slice().iter().all(|&c| c == 1));
    assert!(tr.instance.as_slice().iter().all(|&i| i == 0));
    assert!(tr.part.as_slice().iter().all(|&p| p == 1));
}

#[test]
fn consistent_evidence_labels_one_bag() {
    let t = ClassTaxonomy::medical();
    // bag (1) in the box, table (4) elsewhere; seal (1) on the top rows of the box
    let s = stack(
        &t,
        16,
        16,
        |id, x, y| match (id, in_box(x, y)) {
            (1, true) => 3.0,
            (4, false) => 3.0,
            _ => -3.0,
        },
        |id, x, y| match (id, in_box(x, y), y < 6) {
            (1, true, true) => 2.5,
            (2, true, false) => 2.5,
            (_, false, _) => -2.0,
            _ => -1.0,
        },
        vec![box_proposal(1, 0.95)],
    );
    let tr = fuse_part_panoptic(&s, &t, &FusionParams::default()).unwrap();
    tr.validate(&t).unwrap();
    for y in 0..16 {
        for x in 0..16 {
            let got = (*tr.semantic.get(x, y), *tr.instance.get(x, y), *tr.part.get(x, y));
            if in_box(x, y) {
                let part = if y < 6 { 1 } else { 2 };
                assert_eq!(got, (1, 1, part), "pixel {x},{y}");
            } else {
                assert_eq!((got.0, got.1), (4, 0));
            }
        }
    }
}

#[test]
fn taxonomy_without_parts_yields_void_part_map() {
    let t = taxonomy(&[(1, false)], &[]);
    let s = stack(&t, 2, 2, |_, _, _| 1.0, |_, _, _| 0.0, vec![]);
    let tr = fuse_part_panoptic(&s, &t, &FusionParams::default()).unwrap();
    assert!(tr.part.as_slice().iter().all(|&p| p == 0));
}

/// bottle (2) semantic on x >= 4 while the part head says seal (1) there.
fn conflicting_stack() -> LogitStack {
    let t = ClassTaxonomy::medical();
    stack(
        &t,
        8,
        8,
        |id, x, _| match (id, x >= 4) {
            (1, false) => 3.0,
            (2, true) => 3.0,
            _ => -3.0,
        },
        |id, _, _| if id == 1 { 2.0 } else { -2.0 },
        vec![
            InstanceProposal {
                class_id: 1,
                confidence: 0.9,
                mask_logits: Grid::from_fn(8, 8, |x, _| if x < 4 { 3.0 } else { -3.0 }),
            },
            InstanceProposal {
                class_id: 2,
                confidence: 0.8,
                mask_logits: Grid::from_fn(8, 8, |x, _| if x >= 4 { 3.0 } else { -3.0 }),
            },
        ],
    )
}

fn small_params() -> FusionParams {
    FusionParams {
        min_instance_area: 4,
        ..FusionParams::default()
    }
}

#[test]
fn baselines_on_conflicting_pixels() {
    let t = ClassTaxonomy::medical();
    let s = conflicting_stack();
    let none = fuse_baseline(&s, &t, &small_params(), Baseline::None).unwrap();
    let cons = fuse_baseline(&s, &t, &small_params(), Baseline::Consensus).unwrap();
    let top = fuse_baseline(&s, &t, &small_params(), Baseline::TopDown).unwrap();
    for y in 0..8 {
        for x in 0..8 {
            let b = (
                *none.semantic.get(x, y),
                *none.instance.get(x, y),
                *none.part.get(x, y),
            );
            let c = (
                *cons.semantic.get(x, y),
                *cons.instance.get(x, y),
                *cons.part.get(x, y),
            );
            let tp = (
                *top.semantic.get(x, y),
                *top.instance.get(x, y),
                *top.part.get(x, y),
            );
            if x >= 4 {
                assert_eq!(b, (2, 2, 1));
                assert_eq!(c, (0, 0, 0));
                assert_eq!(tp, (2, 2, 0));
            } else {
                assert_eq!(b, (1, 1, 1));
                assert_eq!(c, b);
                assert_eq!(tp, b);
            }
        }
    }
}

#[test]
fn strategy_names_round_trip() {
    for s in Strategy::ALL {
        assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
    }
    assert_eq!(
        "bogus".parse::<Strategy>().unwrap_err(),
        Error::UnknownStrategy("bogus".into())
    );
    assert!("partpanoptic".parse::<Baseline>().is_err());
    assert_eq!("topdown".parse::<Baseline>().unwrap(), Baseline::TopDown);
}

// --- randomized invariants -------------------------------------------------

fn random_stack(
    t: &ClassTaxonomy,
    w: usize,
    h: usize,
    values: &[f64],
    masks: &[(u16, f64, f64)],
) -> LogitStack {
    let mut it = values.iter().copied().cycle();
    let sem_ids: Vec<u16> = t.semantic_classes().iter().map(|c| c.id).collect();
    let part_ids: Vec<u16> = t.part_classes().iter().map(|p| p.id).collect();
    let sem: Vec<f64> = (0..sem_ids.len() * w * h).map(|_| it.next().unwrap()).collect();
    let part: Vec<f64> = (0..part_ids.len() * w * h).map(|_| it.next().unwrap()).collect();
    let proposals = masks
        .iter()
        .map(|&(class_id, confidence, shift)| InstanceProposal {
            class_id,
            confidence,
            mask_logits: Grid::from_fn(w, h, |_, _| it.next().unwrap() + shift),
        })
        .collect();
    LogitStack::new(w, h, sem_ids, sem, part_ids, part, proposals, t).unwrap()
}

fn permuted(stack: &LogitStack, t: &ClassTaxonomy) -> LogitStack {
    let sem_ids: Vec<u16> = stack.semantic_channels().iter().rev().copied().collect();
    let part_ids: Vec<u16> = stack.part_channels().iter().rev().copied().collect();
    let sem = sem_ids
        .iter()
        .flat_map(|&id| stack.semantic_plane(id).unwrap().to_vec())
        .collect();
    let part = part_ids
        .iter()
        .flat_map(|&id| stack.part_plane(id).unwrap().to_vec())
        .collect();
    LogitStack::new(
        stack.width(),
        stack.height(),
        sem_ids,
        sem,
        part_ids,
        part,
        stack.proposals().to_vec(),
        t,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outputs_are_valid_triples_and_channel_order_free(
        values in prop::collection::vec(-6.0f64..6.0, 97),
        masks in prop::collection::vec((1u16..=3, 0.0f64..1.0, -2.0f64..2.0), 0..4),
    ) {
        let t = ClassTaxonomy::medical();
        let s = random_stack(&t, 8, 8, &values, &masks);
        let p = permuted(&s, &t);
        let params = small_params();
        for strategy in Strategy::ALL {
            let a = fuse(&s, &t, &params, strategy).unwrap();
            a.validate(&t).unwrap();
            let b = fuse(&p, &t, &params, strategy).unwrap();
            prop_assert_eq!(&a, &b);
        }
    }

    #[test]
    fn topdown_differs_from_none_exactly_on_conflicts(
        values in prop::collection::vec(-6.0f64..6.0, 97),
        masks in prop::collection::vec((1u16..=3, 0.0f64..1.0, -2.0f64..2.0), 0..4),
    ) {
        let t = ClassTaxonomy::medical();
        let s = random_stack(&t, 8, 8, &values, &masks);
        let none = fuse_baseline(&s, &t, &small_params(), Baseline::None).unwrap();
        let top = fuse_baseline(&s, &t, &small_params(), Baseline::TopDown).unwrap();
        prop_assert_eq!(&none.semantic, &top.semantic);
        prop_assert_eq!(&none.instance, &top.instance);
        let conflicts = conflict_mask(&none, &t);
        for i in 0..64 {
            let differs = none.part.as_slice()[i] != top.part.as_slice()[i];
            prop_assert_eq!(differs, conflicts.as_slice()[i]);
        }
    }

    #[test]
    fn single_part_taxonomy_structural_identity(values in prop::collection::vec(-8.0f64..8.0, 1..200)) {
        let t = taxonomy(&[(1, true), (2, false), (3, true)], &[(10, 1), (20, 2), (30, 3)]);
        let s = random_stack(&t, 8, 8, &values, &[]);
        let e = enhance(&s, &t);
        let parts = e.part.unwrap();
        for (sem_id, part_id) in [(1u16, 10u16), (2, 20), (3, 30)] {
            prop_assert_eq!(e.semantic.plane(sem_id).unwrap(), parts.plane(part_id).unwrap());
        }
    }
}
