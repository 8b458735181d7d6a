//! TOML run configuration.
//!
//! ```toml
//! sweep = [3, 5, 7]            # optional: run a choice-count sweep
//!
//! [output]
//! dir = "results"
//!
//! [experiment]
//! rules = ["conventional", "modulated"]
//! change_period = 100
//! total_steps = 1500
//! repetitions = 20
//! seed = 1
//! task = { kind = "bandit", arms = 7 }
//! hyperparams = { grid = { alpha = [0.5, 1.0], tau = [0.5] } }
//! ```

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use modtd::experiments::ExperimentConfig;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub experiment: ExperimentConfig,
    pub output: OutputSection,
    #[serde(default)]
    pub sweep: Option<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
}

pub fn parse(text: &str) -> anyhow::Result<RunConfigFile> {
    let file: RunConfigFile = toml::from_str(text)?;
    file.experiment.validate().context("invalid [experiment]")?;
    if let Some(ns) = &file.sweep {
        if ns.is_empty() {
            bail!("invalid key `sweep`: at least one choice count is required");
        }
        if let Some(n) = ns.iter().find(|&&n| n < 2) {
            bail!("invalid key `sweep`: choice count {n} is below 2");
        }
    }
    Ok(file)
}

pub fn load(path: &Path) -> anyhow::Result<RunConfigFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("in {}", path.display()))
}
