//! Argument parsing and dispatch for the `partfuse` binary.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use partfuse_core::ClassTaxonomy;

use crate::commands::{self, Context};
use crate::config::{load_taxonomy, RunConfig};
use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "partfuse",
    version,
    about = "Part-aware panoptic fusion, evaluation and automatic labelling"
)]
pub struct Cli {
    /// Taxonomy JSON; the built-in medical taxonomy when omitted.
    #[arg(long, global = true)]
    pub taxonomy: Option<PathBuf>,
    /// Run configuration JSON. Flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for RANSAC and background selection (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads. Outputs do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Skip failing items with a warning instead of stopping.
    #[arg(long, global = true)]
    pub keep_going: bool,
    /// Print scores as percentages with one decimal.
    #[arg(long, global = true)]
    pub percent: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fuse logit stacks into label triples.
    Fuse {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// partpanoptic, none, consensus or topdown.
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Score predicted triples against ground truth.
    Eval {
        #[arg(long)]
        gt: PathBuf,
        /// Prediction directory, optionally `NAME=DIR`. Repeat for several
        /// strategies.
        #[arg(long, required = true)]
        pred: Vec<PathBuf>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Generate labelled samples without manual annotation.
    Label {
        #[command(subcommand)]
        variant: LabelVariant,
    },
    /// Draw labels and instance boxes over an image.
    Overlay {
        #[arg(long)]
        image: PathBuf,
        /// Stem of the label triple.
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Write the four flip variants of every sample.
    Augment {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Tabulate TSV files written by `eval`.
    Report {
        /// TSV file, optionally `NAME=FILE`.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum LabelVariant {
    /// Point cloud plus RGB image per scene.
    Rgbd {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Blue and black monitor captures per scene.
    Monitor {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        backgrounds: Option<PathBuf>,
    },
}

impl Cli {
    pub fn context(&self) -> Result<Context> {
        let taxonomy = match &self.taxonomy {
            Some(p) => load_taxonomy(p)?,
            None => ClassTaxonomy::medical(),
        };
        let config = RunConfig::load(self.config.as_deref())?;
        let jobs = self
            .jobs
            .or(config.jobs)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if jobs == 0 {
            return Err(Error::Usage("--jobs must be at least 1".into()));
        }
        Ok(Context {
            seed: self.seed.or(config.seed).unwrap_or(0),
            taxonomy,
            config,
            jobs,
            keep_going: self.keep_going,
            percent: self.percent,
        })
    }
}

/// Runs the parsed command. Tables produced by `eval` and `report` go to
/// standard output.
pub fn run(cli: &Cli) -> Result<()> {
    let ctx = cli.context()?;
    match &cli.command {
        Command::Fuse {
            input,
            output,
            strategy,
        } => commands::fuse::run(&ctx, input, output, strategy.as_deref()),
        Command::Eval { gt, pred, output } => {
            print!("{}", commands::eval::run(&ctx, gt, pred, output)?);
            Ok(())
        }
        Command::Label { variant } => match variant {
            LabelVariant::Rgbd { input, output } => commands::label::run_rgbd(&ctx, input, output),
            LabelVariant::Monitor {
                input,
                output,
                backgrounds,
            } => commands::label::run_monitor(&ctx, input, output, backgrounds.as_deref()),
        },
        Command::Overlay {
            image,
            labels,
            output,
        } => commands::overlay::run(&ctx, image, labels, output),
        Command::Augment { input, output } => commands::augment::run(&ctx, input, output),
        Command::Report { inputs, output } => {
            print!(
                "{}",
                commands::report::run(&ctx, inputs, output.as_deref().map(Path::new))?
            );
            Ok(())
        }
    }
}
