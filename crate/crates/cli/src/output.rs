//! CSV and manifest writers.
//!
//! File names carry the base seed (`bandit_cumreward_seed1.csv`), so every
//! row can be traced back to the seed it was derived from. Reals are written
//! with 17 significant digits.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{ensure, Context};
use modtd::experiments::{
    aggregate, cumulative_reward_summary, time_to_preference, ExperimentConfig, ExperimentResult, SweepRow,
};
use serde_json::json;

pub const CUMREWARD_HEADER: [&str; 6] = ["task", "rule", "step", "mean_cum_reward", "ci95_halfwidth", "reps"];
pub const TTP_HEADER: [&str; 7] = [
    "task",
    "rule",
    "n",
    "change_index",
    "mean_steps_to_preference",
    "ci95_halfwidth",
    "censored_fraction",
];
pub const SWEEP_HEADER: [&str; 7] = [
    "task",
    "rule",
    "n",
    "reward_per_step_mean",
    "reward_per_step_ci95",
    "ttp_mean",
    "ttp_ci95",
];

/// 17 significant digits, enough to round-trip any f64.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(header: &[&str]) -> anyhow::Result<Self> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Self { writer })
    }

    fn row(&mut self, fields: &[String]) -> anyhow::Result<()> {
        self.writer.write_record(fields)?;
        Ok(())
    }

    fn into_bytes(self) -> anyhow::Result<Vec<u8>> {
        Ok(self.writer.into_inner()?)
    }
}

fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

fn file_name(config: &ExperimentConfig, kind: &str, ext: &str) -> String {
    format!("{}_{kind}_seed{}.{ext}", config.task.name(), config.seed)
}

/// Writes every file, then reads each back to confirm it landed intact.
fn commit(dir: &Path, files: Vec<(String, Vec<u8>)>) -> anyhow::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
    let mut written = Vec::with_capacity(files.len());
    for (name, bytes) in files {
        let path = dir.join(name);
        fs::write(&path, &bytes).with_context(|| format!("writing {}", path.display()))?;
        let check = fs::read(&path).with_context(|| format!("re-reading {}", path.display()))?;
        ensure!(check == bytes, "{} does not match what was written", path.display());
        written.push(path);
    }
    Ok(written)
}

fn cumreward_csv(result: &ExperimentResult) -> anyhow::Result<Vec<u8>> {
    let task = result.config.task.name();
    let mut table = Table::new(&CUMREWARD_HEADER)?;
    for rule in &result.rules {
        for (i, s) in cumulative_reward_summary(&rule.records)?.iter().enumerate() {
            table.row(&[
                task.to_string(),
                rule.rule.to_string(),
                (i + 1).to_string(),
                real(s.mean),
                real(s.half_width),
                s.count.to_string(),
            ])?;
        }
    }
    table.into_bytes()
}

fn ttp_csv(result: &ExperimentResult) -> anyhow::Result<Vec<u8>> {
    let task = result.config.task.name();
    let n = result.config.task.choices();
    let mut table = Table::new(&TTP_HEADER)?;
    for rule in &result.rules {
        let per_rep: Vec<_> = rule.records.iter().map(time_to_preference).collect();
        let changes = per_rep.iter().map(Vec::len).min().unwrap_or(0);
        for index in 0..changes {
            let steps: Vec<f64> = per_rep.iter().map(|p| p[index].steps as f64).collect();
            let censored = per_rep.iter().filter(|p| p[index].censored).count();
            let s = aggregate(&steps)?;
            table.row(&[
                task.to_string(),
                rule.rule.to_string(),
                n.to_string(),
                index.to_string(),
                real(s.mean),
                real(s.half_width),
                real(censored as f64 / per_rep.len() as f64),
            ])?;
        }
    }
    table.into_bytes()
}

fn manifest(config: &ExperimentConfig, seeds: serde_json::Value, selected: serde_json::Value) -> anyhow::Result<Vec<u8>> {
    manifest_value(serde_json::to_value(config)?, seeds, selected)
}

pub fn write_experiment(result: &ExperimentResult, dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let config = &result.config;
    let eval_seeds = result.rules.first().map(|r| r.eval_seeds.clone()).unwrap_or_default();
    let seeds = json!({
        "base": config.seed,
        "eval": eval_seeds,
        "search": result.search_seeds,
    });
    let selected: BTreeMap<String, _> = result
        .rules
        .iter()
        .map(|r| (r.rule.to_string(), r.params))
        .collect();

    let mut files = vec![(file_name(config, "cumreward", "csv"), cumreward_csv(result)?)];
    if matches!(config.task, modtd::experiments::TaskConfig::Bandit { .. }) {
        files.push((file_name(config, "ttp", "csv"), ttp_csv(result)?));
    }
    files.push((file_name(config, "manifest", "json"), manifest(config, seeds, json!(selected))?));
    commit(dir, files)
}

pub fn write_sweep(config: &ExperimentConfig, ns: &[usize], rows: &[SweepRow], dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let task = config.task.name();
    let mut table = Table::new(&SWEEP_HEADER)?;
    let mut selected: BTreeMap<String, BTreeMap<usize, _>> = BTreeMap::new();
    for row in rows {
        let (ttp_mean, ttp_ci) = match row.time_to_preference {
            Some(s) => (real(s.mean), real(s.half_width)),
            None => (String::new(), String::new()),
        };
        table.row(&[
            task.to_string(),
            row.rule.to_string(),
            row.n.to_string(),
            real(row.reward_per_step.mean),
            real(row.reward_per_step.half_width),
            ttp_mean,
            ttp_ci,
        ])?;
        selected.entry(row.rule.to_string()).or_default().insert(row.n, row.params);
    }
    let seeds = json!({
        "base": config.seed,
        "eval": modtd::seeds::derive_many(config.seed, modtd::seeds::Stream::Eval, config.repetitions),
        "search": modtd::seeds::derive_many(config.seed, modtd::seeds::Stream::Search, config.repetitions),
    });
    let mut sweep_config = serde_json::to_value(config)?;
    sweep_config["n_values"] = json!(ns);
    let files = vec![
        (file_name(config, "sweep", "csv"), table.into_bytes()?),
        (file_name(config, "sweep_manifest", "json"), manifest_value(sweep_config, seeds, json!(selected))?),
    ];
    commit(dir, files)
}

fn manifest_value(config: serde_json::Value, seeds: serde_json::Value, selected: serde_json::Value) -> anyhow::Result<Vec<u8>> {
    let doc = json!({
        "config": config,
        "seeds": seeds,
        "selected_hyperparams": selected,
        "version": version(),
    });
    let mut bytes = serde_json::to_vec_pretty(&doc)?;
    bytes.push(b'\n');
    Ok(bytes)
}
