use super::config::ExperimentConfig;
use super::metrics::{aggregate, mean_time_to_preference, reward_per_step, Summary};
use super::runner::run_experiment;
use crate::error::{Error, Result};
use crate::learning::{Hyperparams, Rule};

/// One `(n, rule)` cell of a choice-count sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub rule: Rule,
    pub params: Hyperparams,
    pub reward_per_step: Summary,
    /// Bandit only.
    pub time_to_preference: Option<Summary>,
}

/// Runs `base` once per choice count (arms or classes), with hyperparameter
/// selection repeated for every `n`. Rows come out ordered by `n`, then by
/// the rule order of `base`.
pub fn sweep_choices(base: &ExperimentConfig, ns: &[usize]) -> Result<Vec<SweepRow>> {
    if ns.is_empty() {
        return Err(Error::invalid("n_values", "at least one choice count is required"));
    }
    if let Some(&n) = ns.iter().find(|&&n| n < 2) {
        return Err(Error::invalid("n_values", format!("choice count {n} is below 2")));
    }
    let mut rows = Vec::with_capacity(ns.len() * base.rules.len());
    for &n in ns {
        let config = ExperimentConfig {
            task: base.task.with_choices(n),
            ..base.clone()
        };
        let result = run_experiment(&config)?;
        for rule_result in &result.rules {
            let rps = rule_result
                .records
                .iter()
                .map(reward_per_step)
                .collect::<Result<Vec<_>>>()?;
            let ttp = match config.task {
                super::TaskConfig::Bandit { .. } => mean_time_to_preference(&rule_result.records),
                super::TaskConfig::Cardsort { .. } => None,
            };
            rows.push(SweepRow {
                n,
                rule: rule_result.rule,
                params: rule_result.params,
                reward_per_step: aggregate(&rps)?,
                time_to_preference: ttp,
            });
        }
    }
    Ok(rows)
}
