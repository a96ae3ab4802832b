//! Subcommand implementations. Each takes the resolved [`Context`] plus its
//! own arguments and returns `Ok(())` or an [`Error`] carrying the exit code.

use std::path::{Path, PathBuf};

use log::warn;
use partfuse_core::ClassTaxonomy;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{Error, Result};

pub mod augment;
pub mod eval;
pub mod fuse;
pub mod label;
pub mod overlay;
pub mod report;

/// Global options after merging flags over the config file.
#[derive(Debug, Clone)]
pub struct Context {
    pub taxonomy: ClassTaxonomy,
    pub config: RunConfig,
    pub seed: u64,
    pub jobs: usize,
    pub keep_going: bool,
    pub percent: bool,
}

impl Context {
    /// Runs `work` over `items` on a pool of `jobs` threads. Results come
    /// back in input order. Under `keep_going` failed items are logged and
    /// dropped, otherwise the first failure in input order is returned.
    pub fn run_items<T, R>(
        &self,
        items: &[T],
        name: impl Fn(&T) -> String,
        work: impl Fn(&T) -> Result<R> + Sync,
    ) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start {} worker threads: {e}", self.jobs)))?;
        let results: Vec<Result<R>> = pool.install(|| items.par_iter().map(&work).collect());
        let mut out = Vec::with_capacity(results.len());
        for (item, r) in items.iter().zip(results) {
            match r {
                Ok(v) => out.push(v),
                Err(e) if self.keep_going => warn!("skipping {}: {e}", name(item)),
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }
}

/// Sorted entries of `dir` accepted by `keep`.
pub(crate) fn list_dir(dir: &Path, keep: impl Fn(&Path) -> bool) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if keep(&path) {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

pub(crate) fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Stems `dir/<stem><suffix>` of every file with that suffix.
pub(crate) fn stems_with_suffix(dir: &Path, suffix: &str) -> Result<Vec<PathBuf>> {
    let files = list_dir(dir, |p| p.is_file() && file_name(p).ends_with(suffix))?;
    Ok(files
        .into_iter()
        .map(|p| {
            let name = file_name(&p);
            dir.join(&name[..name.len() - suffix.len()])
        })
        .collect())
}

/// `scene_*` subdirectories.
pub(crate) fn scene_dirs(dir: &Path) -> Result<Vec<PathBuf>> {
    let scenes = list_dir(dir, |p| p.is_dir() && file_name(p).starts_with("scene_"))?;
    if scenes.is_empty() {
        return Err(Error::Usage(format!("{}: no scene_* directories", dir.display())));
    }
    Ok(scenes)
}

/// Splits `NAME=PATH`; a bare path is named after its last component, less
/// `strip_ext`.
pub(crate) fn named_path(arg: &Path, strip_ext: Option<&str>) -> (String, PathBuf) {
    let s = arg.to_string_lossy();
    if let Some((name, path)) = s.split_once('=') {
        if !name.is_empty() && !name.contains(std::path::MAIN_SEPARATOR) {
            return (name.to_string(), PathBuf::from(path));
        }
    }
    let mut name = file_name(arg);
    if let Some(ext) = strip_ext {
        if let Some(stripped) = name.strip_suffix(ext) {
            name = stripped.to_string();
        }
    }
    (name, arg.to_path_buf())
}

pub(crate) fn unique_names(names: &[(String, PathBuf)]) -> Result<()> {
    for (i, (a, _)) in names.iter().enumerate() {
        if names[..i].iter().any(|(b, _)| a == b) {
            return Err(Error::Usage(format!("duplicate strategy name `{a}`")));
        }
    }
    Ok(())
}
