//! `label rgbd` and `label monitor`.
//!
//! Variant A scenes are `scene_*/{rgb.ppm,cloud.ply,camera.json}`. Variant B
//! scenes are `scene_*/{blue.ppm,black.ppm,target_*.ppm}` plus an optional
//! directory of background PPMs for synthetic composites.

use std::path::{Path, PathBuf};

use log::info;
use partfuse_core::autolabel::monitor::{
    composite_synthetic, extract_reference, pick_background, transfer_labels, ReferenceLabel,
};
use partfuse_core::autolabel::rgbd::{generate_rgbd_sample, labelled_pixels};
use serde_json::json;

use super::{file_name, list_dir, scene_dirs, Context};
use crate::config::{load_camera, write_json};
use crate::error::{CoreContext, Error, Result};
use crate::formats::{read_ply, read_pnm, with_suffix, write_label_triple, write_mask, write_pnm};

pub const PROVENANCE: &str = ".provenance.json";

pub fn run_rgbd(ctx: &Context, input: &Path, output: &Path) -> Result<()> {
    let mut config = ctx.config.rgbd.clone();
    config.ransac.seed = ctx.seed;
    config.validate(&ctx.taxonomy).context("rgbd configuration")?;
    let scenes = scene_dirs(input)?;
    let done = ctx.run_items(
        &scenes,
        |s| s.display().to_string(),
        |scene| {
            let image = read_pnm(&scene.join("rgb.ppm"))?;
            let cloud = read_ply(&scene.join("cloud.ply"))?;
            let camera = load_camera(&scene.join("camera.json"))?;
            let sample = generate_rgbd_sample(&image, &cloud, &camera, &ctx.taxonomy, &config)
                .context(format!("scene {}", scene.display()))?;
            let name = file_name(scene);
            let stem = output.join(&name);
            write_pnm(&sample.image, &with_suffix(&stem, ".ppm"))?;
            write_label_triple(&sample.labels, &stem)?;
            let provenance = json!({
                "variant": "rgbd",
                "scene": name,
                "seed": ctx.seed,
                "config": config,
                "camera": camera,
                "points": cloud.len(),
                "instances": sample.cloud.instance_count(),
                "labelled_pixels": labelled_pixels(&sample.labels),
            });
            write_json(&provenance, &with_suffix(&stem, PROVENANCE))
        },
    )?;
    info!("labelled {} of {} rgbd scenes", done.len(), scenes.len());
    Ok(())
}

fn write_sample(
    image: &partfuse_core::imaging::Image,
    triple: &partfuse_core::LabelTriple,
    stem: &Path,
) -> Result<()> {
    write_pnm(image, &with_suffix(stem, ".ppm"))?;
    write_label_triple(triple, stem)
}

pub fn run_monitor(ctx: &Context, input: &Path, output: &Path, backgrounds: Option<&Path>) -> Result<()> {
    let config = &ctx.config.monitor;
    config.validate(&ctx.taxonomy).context("monitor configuration")?;
    let per_scene = ctx.config.composites_per_scene;
    let backgrounds: Vec<PathBuf> = match backgrounds {
        Some(dir) => list_dir(dir, |p| p.is_file() && file_name(p).ends_with(".ppm"))?,
        None => Vec::new(),
    };
    if per_scene > 0 && backgrounds.is_empty() {
        return Err(Error::Usage(format!(
            "composites_per_scene is {per_scene} but no background PPMs were given"
        )));
    }
    let scenes = scene_dirs(input)?;
    let indexed: Vec<(usize, &PathBuf)> = scenes.iter().enumerate().collect();
    let done = ctx.run_items(
        &indexed,
        |(_, s)| s.display().to_string(),
        |&(index, scene)| {
            let blue = read_pnm(&scene.join("blue.ppm"))?;
            let black = read_pnm(&scene.join("black.ppm"))?;
            let reference: ReferenceLabel = extract_reference(&blue, &black, config, &ctx.taxonomy)
                .context(format!("scene {}", scene.display()))?;
            let name = file_name(scene);
            write_mask(&reference.object, &output.join(format!("{name}.object.pgm")))?;

            let targets = list_dir(scene, |p| {
                let n = file_name(p);
                p.is_file() && n.starts_with("target_") && n.ends_with(".ppm")
            })?;
            let mut target_names = Vec::new();
            for t in &targets {
                let image = read_pnm(t)?;
                let (img, triple) = transfer_labels(&reference, &image, &ctx.taxonomy)
                    .context(format!("target {}", t.display()))?;
                let tname = file_name(t);
                let stem = output.join(format!("{name}_{}", &tname[..tname.len() - 4]));
                write_sample(&img, &triple, &stem)?;
                target_names.push(tname);
            }

            let mut composites = Vec::new();
            for k in 0..per_scene {
                let sample_index = (index * per_scene + k) as u64;
                let b =
                    pick_background(ctx.seed, sample_index, backgrounds.len()).expect("backgrounds present");
                let bg = read_pnm(&backgrounds[b])?;
                let (img, triple) = composite_synthetic(&black, &reference, &bg)
                    .context(format!("composite with {}", backgrounds[b].display()))?;
                let cname = format!("{name}_composite_{k}");
                write_sample(&img, &triple, &output.join(&cname))?;
                composites.push(json!({ "sample": cname, "background": file_name(&backgrounds[b]) }));
            }

            let provenance = json!({
                "variant": "monitor",
                "scene": name,
                "seed": ctx.seed,
                "config": config,
                "object_pixels": reference.object.count(),
                "instances": reference.instance_count(),
                "parts": reference.part_ids(),
                "targets": target_names,
                "composites": composites,
            });
            write_json(&provenance, &output.join(format!("{name}{PROVENANCE}")))
        },
    )?;
    info!("labelled {} of {} monitor scenes", done.len(), scenes.len());
    Ok(())
}
