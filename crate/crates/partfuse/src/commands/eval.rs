use std::path::{Path, PathBuf};

use log::info;
use partfuse_core::metrics::{aggregate_dataset, match_segments};

use super::{file_name, named_path, stems_with_suffix, unique_names, Context};
use crate::error::{CoreContext, Error, Result};
use crate::formats::pnm::TRIPLE_SUFFIXES;
use crate::formats::read_label_triple;
use crate::report::{render_table, ScoreRow};

pub const TABLE_FILE: &str = "table.txt";

/// Scores each prediction directory against `gt`, writing
/// `output/<name>.tsv` per directory and `output/table.txt`. The table is
/// also returned for printing.
pub fn run(ctx: &Context, gt: &Path, preds: &[PathBuf], output: &Path) -> Result<String> {
    if preds.is_empty() {
        return Err(Error::Usage("eval needs at least one --pred directory".into()));
    }
    let named: Vec<(String, PathBuf)> = preds.iter().map(|p| named_path(p, None)).collect();
    unique_names(&named)?;
    let stems = stems_with_suffix(gt, TRIPLE_SUFFIXES[0])?;
    if stems.is_empty() {
        return Err(Error::Usage(format!("{}: no ground-truth triples", gt.display())));
    }
    // Ground truth is read once and checked against the taxonomy up front.
    let gts = ctx.run_items(
        &stems,
        |s| s.display().to_string(),
        |stem| {
            let t = read_label_triple(stem)?;
            t.validate(&ctx.taxonomy)
                .context(format!("ground truth {}", stem.display()))?;
            Ok(t)
        },
    )?;
    if gts.len() != stems.len() {
        return Err(Error::Usage("unreadable ground truth cannot be skipped".into()));
    }

    let mut rows = Vec::new();
    for (name, dir) in &named {
        let indices: Vec<usize> = (0..stems.len()).collect();
        let matches = ctx.run_items(
            &indices,
            |&i| stems[i].display().to_string(),
            |&i| {
                let stem = dir.join(file_name(&stems[i]));
                let pred = read_label_triple(&stem)?;
                pred.validate(&ctx.taxonomy)
                    .context(format!("prediction {}", stem.display()))?;
                match_segments(&pred, &gts[i], &ctx.taxonomy).context(format!("scoring {}", stem.display()))
            },
        )?;
        let report = aggregate_dataset(&matches, &ctx.taxonomy).context(format!("aggregating {name}"))?;
        let row = ScoreRow::from_report(name, &report);
        crate::error::write_file(&output.join(format!("{name}.tsv")), row.to_tsv().as_bytes())?;
        info!("{name}: scored {} images", matches.len());
        rows.push(row);
    }
    let table = render_table(&rows, ctx.percent).map_err(Error::Usage)?;
    crate::error::write_file(&output.join(TABLE_FILE), table.as_bytes())?;
    Ok(table)
}
