//! Fixture writers shared by the CLI and acceptance tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use partfuse::config::{write_json, ProposalEntry, RunConfig};
use partfuse::formats::{with_suffix, write_ply, write_pnm, write_tensor, Tensor, TensorData};
use partfuse_core::autolabel::monitor::MonitorLabelConfig;
use partfuse_core::autolabel::rgbd::RgbdLabelConfig;
use partfuse_core::autolabel::PartColorRule;
use partfuse_core::imaging::HsvRange;
use partfuse_core::rng::SplitMix64;
use partfuse_core::synthetic::{
    cap_rule, monitor_disk_scene, tabletop_scene, texture, Disk, MonitorScene, TabletopScene,
};

pub fn partfuse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_partfuse"))
        .args(args)
        .env("PARTFUSE_LOG", "error")
        .output()
        .expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// Every file under `dir`, keyed by relative path.
pub fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}

fn f32_tensor(shape: Vec<u32>, v: Vec<f32>) -> Tensor {
    Tensor::new(shape, TensorData::F32(v)).unwrap()
}

/// Writes `<stem>.sem.ppt`, `<stem>.part.ppt` and the proposal sidecar with
/// one mask tensor per proposal. Channels follow medical-taxonomy order.
pub fn write_stack(
    dir: &Path,
    stem: &str,
    (w, h): (usize, usize),
    sem: Vec<f32>,
    part: Vec<f32>,
    proposals: Vec<(u16, f64, Vec<f32>)>,
) {
    let base = dir.join(stem);
    write_tensor(
        &f32_tensor(vec![4, h as u32, w as u32], sem),
        &with_suffix(&base, ".sem.ppt"),
    )
    .unwrap();
    write_tensor(
        &f32_tensor(vec![3, h as u32, w as u32], part),
        &with_suffix(&base, ".part.ppt"),
    )
    .unwrap();
    let mut entries = Vec::new();
    for (k, (class_id, confidence, mask)) in proposals.into_iter().enumerate() {
        let name = format!("{stem}.mask{k}.ppt");
        write_tensor(&f32_tensor(vec![h as u32, w as u32], mask), &dir.join(&name)).unwrap();
        entries.push(ProposalEntry {
            class_id,
            confidence,
            mask_tensor_path: PathBuf::from(name),
        });
    }
    write_json(&entries, &with_suffix(&base, ".proposals.json")).unwrap();
}

/// 8x8: the semantic head says `transfusion_bag` on x < 4 and `bottle` on
/// x >= 4, while the part head says `transfusion_bag_seal` everywhere.
pub fn write_conflicting_stack(dir: &Path, stem: &str) {
    let (w, h) = (8, 8);
    let mut sem = Vec::new();
    for c in 1..=4u16 {
        for _y in 0..h {
            for x in 0..w {
                sem.push(match (c, x >= 4) {
                    (1, false) | (2, true) => 3.0,
                    _ => -3.0,
                });
            }
        }
    }
    let mut part = Vec::new();
    for p in 1..=3 {
        part.extend(std::iter::repeat_n(if p == 1 { 2.0 } else { -2.0 }, w * h));
    }
    let half = |left: bool| {
        (0..w * h)
            .map(|i| if (i % w < 4) == left { 3.0 } else { -3.0 })
            .collect()
    };
    write_stack(
        dir,
        stem,
        (w, h),
        sem,
        part,
        vec![(1, 0.9, half(true)), (2, 0.8, half(false))],
    );
}

/// Random logits with two block-shaped proposals.
pub fn write_random_stack(dir: &Path, stem: &str, seed: u64, (w, h): (usize, usize)) {
    let mut rng = SplitMix64::new(seed);
    let mut draw = |n: usize| {
        (0..n)
            .map(|_| (rng.unit() * 8.0 - 4.0) as f32)
            .collect::<Vec<f32>>()
    };
    let sem = draw(4 * w * h);
    let part = draw(3 * w * h);
    let block = |x0: usize, y0: usize| {
        (0..w * h)
            .map(|i| {
                let (x, y) = (i % w, i / w);
                if x >= x0 && x < x0 + w / 2 && y >= y0 && y < y0 + h / 2 {
                    2.0
                } else {
                    -2.0
                }
            })
            .collect()
    };
    write_stack(
        dir,
        stem,
        (w, h),
        sem,
        part,
        vec![(1, 0.9, block(0, 0)), (2, 0.7, block(w / 3, h / 3))],
    );
}

pub fn rgbd_config() -> RgbdLabelConfig {
    RgbdLabelConfig {
        part_rules: vec![cap_rule(1)],
        catch_all_part: Some(3),
        ..RgbdLabelConfig::default()
    }
}

/// Writes `scene_dir/{rgb.ppm,cloud.ply,camera.json}`.
pub fn write_rgbd_scene(scene_dir: &Path, seed: u64) -> TabletopScene {
    let scene = tabletop_scene(seed, 0.001);
    write_pnm(&scene.image, &scene_dir.join("rgb.ppm")).unwrap();
    write_ply(&scene.cloud, &scene_dir.join("cloud.ply")).unwrap();
    write_json(&scene.camera, &scene_dir.join("camera.json")).unwrap();
    scene
}

pub fn seal_rule() -> PartColorRule {
    PartColorRule {
        part_id: 1,
        hsv_range: HsvRange {
            h_min: 340.0,
            h_max: 20.0,
            s_min: 0.5,
            s_max: 1.0,
            v_min: 0.3,
            v_max: 1.0,
        },
        priority: 1,
    }
}

pub fn monitor_config() -> MonitorLabelConfig {
    MonitorLabelConfig {
        part_rules: vec![seal_rule()],
        catch_all_part: Some(2),
        ..MonitorLabelConfig::default()
    }
}

pub const MONITOR_DIMS: (usize, usize) = (120, 100);

pub fn monitor_disks() -> Vec<Disk> {
    vec![Disk {
        center: [60.0, 50.0],
        radius: 40.0,
    }]
}

/// Writes `scene_dir/{blue,black}.ppm` and `targets` textured captures.
pub fn write_monitor_scene(scene_dir: &Path, targets: usize, seed: u64) -> MonitorScene {
    let (w, h) = MONITOR_DIMS;
    let scene = monitor_disk_scene(w, h, &monitor_disks(), 0.0);
    write_pnm(&scene.blue, &scene_dir.join("blue.ppm")).unwrap();
    write_pnm(&scene.black, &scene_dir.join("black.ppm")).unwrap();
    for m in 0..targets {
        let bg = texture(w, h, seed + m as u64);
        let target = partfuse_core::imaging::Image::from_fn_rgb(w, h, |x, y| {
            if *scene.object.get(x, y) {
                let p = scene.black.pixel(x, y);
                [p[0], p[1], p[2]]
            } else {
                let p = bg.pixel(x, y);
                [p[0], p[1], p[2]]
            }
        });
        write_pnm(&target, &scene_dir.join(format!("target_{m}.ppm"))).unwrap();
    }
    scene
}

pub fn write_backgrounds(dir: &Path, n: usize) {
    let (w, h) = MONITOR_DIMS;
    for k in 0..n {
        write_pnm(&texture(w, h, 100 + k as u64), &dir.join(format!("bg_{k}.ppm"))).unwrap();
    }
}

pub fn write_config(path: &Path, config: &RunConfig) {
    write_json(config, path).unwrap();
}

use partfuse_core::{Grid, LabelTriple};

/// Builds a triple from per-pixel `(semantic, instance, part)`.
pub fn triple(w: usize, h: usize, f: impl Fn(usize, usize) -> (u16, u16, u16)) -> LabelTriple {
    LabelTriple::new(
        Grid::from_fn(w, h, |x, y| f(x, y).0),
        Grid::from_fn(w, h, |x, y| f(x, y).1),
        Grid::from_fn(w, h, |x, y| f(x, y).2),
    )
    .unwrap()
}

/// 10x10, medical taxonomy. Ground truth: bag rows 0-4 (seal rows 0-1,
/// centre rows 2-4), table rows 5-8, void row 9. Prediction: bag rows 0-3
/// plus row 5 (centre on rows 2-3 and 5), table rows 6-8.
///
/// Bag: segment iou 40/60, seal iou 1, centre iou 20/40, so PartPQ 0.75.
/// Table: iou 30/40.
pub fn partpq_fixture() -> (LabelTriple, LabelTriple) {
    let gt = triple(10, 10, |_, y| match y {
        0..=1 => (1, 1, 1),
        2..=4 => (1, 1, 2),
        5..=8 => (4, 0, 0),
        _ => (0, 0, 0),
    });
    let pred = triple(10, 10, |_, y| match y {
        0..=1 => (1, 1, 1),
        2..=3 | 5 => (1, 1, 2),
        6..=8 => (4, 0, 0),
        _ => (0, 0, 0),
    });
    (pred, gt)
}
