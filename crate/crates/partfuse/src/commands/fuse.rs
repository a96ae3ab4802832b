use std::path::Path;

use log::info;
use partfuse_core::fusion::{fuse, Strategy};

use super::{file_name, stems_with_suffix, Context};
use crate::config::{load_logit_stack, SEM_LOGITS};
use crate::error::{CoreContext, Error, Result};
use crate::formats::write_label_triple;

/// Flag, then config file, then `partpanoptic`.
pub fn resolve_strategy(flag: Option<&str>, ctx: &Context) -> Result<Strategy> {
    let name = flag.or(ctx.config.strategy.as_deref()).unwrap_or("partpanoptic");
    name.parse::<Strategy>().context("--strategy")
}

/// Fuses every `<stem>.sem.ppt` in `input` into `output/<stem>.{sem,inst,part}.pgm`.
pub fn run(ctx: &Context, input: &Path, output: &Path, strategy: Option<&str>) -> Result<()> {
    let strategy = resolve_strategy(strategy, ctx)?;
    let params = ctx.config.fusion;
    params.validate().context("fusion parameters")?;
    let stems = stems_with_suffix(input, SEM_LOGITS)?;
    if stems.is_empty() {
        return Err(Error::Usage(format!(
            "{}: no *{SEM_LOGITS} files",
            input.display()
        )));
    }
    let done = ctx.run_items(
        &stems,
        |s| s.display().to_string(),
        |stem| {
            let stack = load_logit_stack(stem, &ctx.taxonomy)?;
            let triple = fuse(&stack, &ctx.taxonomy, &params, strategy)
                .context(format!("fusing {}", stem.display()))?;
            write_label_triple(&triple, &output.join(file_name(stem)))
        },
    )?;
    info!("{strategy}: fused {} of {} inputs", done.len(), stems.len());
    Ok(())
}
