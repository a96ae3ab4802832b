use std::path::Path;

use log::info;
use partfuse_core::autolabel::monitor::augment_flips;

use super::{file_name, stems_with_suffix, Context};
use crate::error::{CoreContext, Error, Result};
use crate::formats::{read_label_triple, read_pnm, with_suffix, write_label_triple, write_pnm};

/// Every `<stem>.ppm` in `input` with its triple becomes four samples
/// `<stem>_{id,rot180,vflip,hflip}` in `output`.
pub fn run(ctx: &Context, input: &Path, output: &Path) -> Result<()> {
    let stems = stems_with_suffix(input, ".ppm")?;
    if stems.is_empty() {
        return Err(Error::Usage(format!("{}: no *.ppm samples", input.display())));
    }
    let done = ctx.run_items(
        &stems,
        |s| s.display().to_string(),
        |stem| {
            let image = read_pnm(&with_suffix(stem, ".ppm"))?;
            let triple = read_label_triple(stem)?;
            triple
                .validate(&ctx.taxonomy)
                .context(format!("labels {}", stem.display()))?;
            let variants = augment_flips(&image, &triple).context(format!("sample {}", stem.display()))?;
            let name = file_name(stem);
            for (flip, img, labels) in variants {
                let out = output.join(format!("{name}_{}", flip.suffix()));
                write_pnm(&img, &with_suffix(&out, ".ppm"))?;
                write_label_triple(&labels, &out)?;
            }
            Ok(())
        },
    )?;
    info!("augmented {} of {} samples", done.len(), stems.len());
    Ok(())
}
