//! Metrics over run records.
//!
//! Time-to-preference follows the detection procedure used for the rotating
//! bandit: each arm's selection probability is smoothed with a trailing
//! 10-step moving average, and a new preference is registered at the first
//! step after a change where some arm other than the previous best exceeds
//! 0.5. Regimes that end without a detection are censored at their length.

use serde::Serialize;

use super::record::RunRecord;
use crate::error::{Error, Result};

pub const SMOOTHING_WINDOW: usize = 10;
pub const PREFERENCE_THRESHOLD: f64 = 0.5;
/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.96;

/// Mean with a normal-approximation 95% confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub half_width: f64,
    pub count: usize,
}

impl Summary {
    pub fn lower(&self) -> f64 {
        self.mean - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.mean + self.half_width
    }

    /// True when the two confidence intervals share no point.
    pub fn separated_from(&self, other: &Summary) -> bool {
        self.lower() > other.upper() || other.lower() > self.upper()
    }
}

/// Mean and `1.96 * s / sqrt(n)` with the n-1 sample deviation; the
/// half-width is zero for a single value.
pub fn aggregate(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::UndefinedInput("cannot aggregate zero values"));
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let half_width = if n < 2 {
        0.0
    } else {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Z_95 * var.sqrt() / (n as f64).sqrt()
    };
    Ok(Summary {
        mean,
        half_width,
        count: n,
    })
}

pub fn reward_per_step(record: &RunRecord) -> Result<f64> {
    if record.is_empty() {
        return Err(Error::UndefinedInput("reward per step of an empty record"));
    }
    Ok(record.total_reward() / record.len() as f64)
}

/// Per-step summary of cumulative reward across repetitions. Records are
/// truncated to the shortest one.
pub fn cumulative_reward_summary(records: &[RunRecord]) -> Result<Vec<Summary>> {
    let steps = records.iter().map(RunRecord::len).min().unwrap_or(0);
    (0..steps)
        .map(|t| {
            let column: Vec<f64> = records.iter().map(|r| r.rows[t].cumulative_reward).collect();
            aggregate(&column)
        })
        .collect()
}

/// Outcome of preference detection after one regime change.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preference {
    pub change_index: usize,
    /// Steps from the change to detection, or the regime length if censored.
    pub steps: usize,
    pub censored: bool,
}

/// Detects the new preference after every regime change in `record`.
///
/// Changes with no steps after them are skipped.
pub fn time_to_preference(record: &RunRecord) -> Vec<Preference> {
    let len = record.len();
    let mut out = Vec::new();
    for (index, change) in record.changes.iter().enumerate() {
        if change.step >= len {
            continue;
        }
        let regime_end = record
            .changes
            .get(index + 1)
            .map_or(len, |next| next.step.min(len));
        let regime_len = regime_end - change.step;
        let detected = (change.step + 1..=regime_end).find(|&t| {
            let window = &record.rows[t.saturating_sub(SMOOTHING_WINDOW)..t];
            let arms = window[0].probs.len();
            (0..arms)
                .filter(|&arm| Some(arm) != change.previous_best)
                .any(|arm| {
                    let avg = window.iter().map(|row| row.probs[arm]).sum::<f64>() / window.len() as f64;
                    avg > PREFERENCE_THRESHOLD
                })
        });
        out.push(match detected {
            Some(t) => Preference {
                change_index: index,
                steps: t - change.step,
                censored: false,
            },
            None => Preference {
                change_index: index,
                steps: regime_len,
                censored: true,
            },
        });
    }
    out
}

/// Summary over repetitions of each repetition's mean time-to-preference.
/// Returns `None` when no record has a scorable change.
pub fn mean_time_to_preference(records: &[RunRecord]) -> Option<Summary> {
    let per_rep: Vec<f64> = records
        .iter()
        .filter_map(|r| {
            let prefs = time_to_preference(r);
            (!prefs.is_empty()).then(|| prefs.iter().map(|p| p.steps as f64).sum::<f64>() / prefs.len() as f64)
        })
        .collect();
    aggregate(&per_rep).ok()
}
