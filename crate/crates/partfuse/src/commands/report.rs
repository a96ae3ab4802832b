use std::path::{Path, PathBuf};

use super::{named_path, unique_names, Context};
use crate::error::{read_file, Error, Result};
use crate::report::{render_table, ScoreRow};

/// Re-renders TSV files written by `eval` as one table. Inputs may be given
/// as `NAME=PATH`; otherwise the row is named after the file.
pub fn run(ctx: &Context, inputs: &[PathBuf], output: Option<&Path>) -> Result<String> {
    if inputs.is_empty() {
        return Err(Error::Usage("report needs at least one TSV file".into()));
    }
    let named: Vec<(String, PathBuf)> = inputs.iter().map(|p| named_path(p, Some(".tsv"))).collect();
    unique_names(&named)?;
    let mut rows = Vec::new();
    for (name, path) in &named {
        let bytes = read_file(path)?;
        let text = String::from_utf8(bytes).map_err(|_| Error::format(path, "not UTF-8"))?;
        rows.push(ScoreRow::from_tsv(name, &text).map_err(|m| Error::format(path, m))?);
    }
    let table = render_table(&rows, ctx.percent).map_err(Error::Usage)?;
    if let Some(out) = output {
        crate::error::write_file(out, table.as_bytes())?;
    }
    Ok(table)
}
