use std::path::Path;

use partfuse_core::overlay::{render_overlay, OverlaySpec};

use super::Context;
use crate::error::{CoreContext, Result};
use crate::formats::{read_label_triple, read_pnm, write_pnm};

/// Draws `labels` over `image` and writes a P6 to `output`.
pub fn run(ctx: &Context, image: &Path, labels: &Path, output: &Path) -> Result<()> {
    let spec = ctx
        .config
        .overlay
        .clone()
        .unwrap_or_else(|| OverlaySpec::for_taxonomy(&ctx.taxonomy));
    spec.validate().context("overlay spec")?;
    let img = read_pnm(image)?;
    let triple = read_label_triple(labels)?;
    triple
        .validate(&ctx.taxonomy)
        .context(format!("labels {}", labels.display()))?;
    let out = render_overlay(&img, &triple, &spec).context(format!("overlay of {}", image.display()))?;
    write_pnm(&out, output)
}
