//! Tabular learning rules.
//!
//! The tasks in this crate are single-state, so a value table is one entry per
//! action. Two update rules are provided:
//!
//! ```text
//! conventional:  V(a) += alpha * delta
//! modulated:     V(a) += alpha * pi(a) * delta
//! ```
//!
//! where `delta = r + gamma * V(next) - V(a)` and `pi(a)` is the softmax
//! probability with which `a` was selected. Scaling by `pi(a)` enlarges the
//! drop after a bad outcome on a favoured action and shrinks the gain after a
//! good outcome on an unlikely one.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};

/// Upper end of the learning-rate search range.
pub const ALPHA_MAX: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    /// Learning rate (tabular) or gradient step size (network).
    pub alpha: f64,
    /// Discount on the successor value.
    pub gamma: f64,
    /// Softmax temperature.
    pub tau: f64,
}

impl Hyperparams {
    pub fn new(alpha: f64, gamma: f64, tau: f64) -> Result<Self> {
        let params = Self { alpha, gamma, tau };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=ALPHA_MAX).contains(&self.alpha) {
            return Err(Error::invalid("alpha", format!("{} not in [0, 2]", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::invalid("gamma", format!("{} not in [0, 1]", self.gamma)));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::invalid("tau", format!("{} is not a positive temperature", self.tau)));
        }
        Ok(())
    }
}

/// Which update rule an agent applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Conventional,
    Modulated,
}

impl Rule {
    pub const ALL: [Rule; 2] = [Rule::Conventional, Rule::Modulated];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Conventional => "conventional",
            Rule::Modulated => "modulated",
        }
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conventional" => Ok(Rule::Conventional),
            "modulated" => Ok(Rule::Modulated),
            other => Err(Error::invalid("rule", format!("unknown rule `{other}`"))),
        }
    }
}

/// Per-action value estimates. Entries are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionValues(Vec<f64>);

impl ActionValues {
    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::invalid("values", "need at least two actions"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid("values", format!("non-finite entry {v}")));
        }
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn add(&mut self, action: usize, step: f64) -> Result<()> {
        check_index(action, self.0.len())?;
        let updated = self.0[action] + step;
        if !updated.is_finite() {
            return Err(Error::Diverged("update would store a non-finite value"));
        }
        self.0[action] = updated;
        Ok(())
    }
}

impl std::ops::Index<usize> for ActionValues {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.0[index]
    }
}

/// Action-selection probabilities. Entries lie in `[0, 1]` and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyDistribution(Vec<f64>);

impl PolicyDistribution {
    pub const SUM_TOLERANCE: f64 = 1e-9;

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::invalid("probs", "empty distribution"));
        }
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::invalid("probs", format!("entry {p} outside [0, 1]")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::invalid("probs", format!("entries sum to {total}")));
        }
        Ok(Self(probs))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn prob(&self, action: usize) -> Result<f64> {
        check_index(action, self.0.len())?;
        Ok(self.0[action])
    }
}

/// Softmax of `values / tau`, evaluated after subtracting the maximum.
pub fn softmax(values: &[f64], tau: f64) -> Result<PolicyDistribution> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid("tau", format!("{tau} is not a positive temperature")));
    }
    if values.is_empty() {
        return Err(Error::invalid("values", "empty value vector"));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid("values", format!("non-finite entry {v}")));
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<f64> = values.iter().map(|v| ((v - max) / tau).exp()).collect();
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    Ok(PolicyDistribution(probs))
}

pub fn softmax_policy(values: &ActionValues, tau: f64) -> Result<PolicyDistribution> {
    softmax(values.as_slice(), tau)
}

/// Draws an action index with probability `dist[i]`.
///
/// Zero-probability actions are never returned.
pub fn sample_action<R: Rng + ?Sized>(dist: &PolicyDistribution, rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    for (i, &p) in dist.0.iter().enumerate() {
        cumulative += p;
        if u < cumulative && p > 0.0 {
            return i;
        }
    }
    // Rounding left `u` above the accumulated mass.
    dist.0.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// `reward + gamma * v_next - v_current`.
pub fn td_error(reward: f64, gamma: f64, v_next: f64, v_current: f64) -> f64 {
    reward + gamma * v_next - v_current
}

pub fn conventional_update(
    values: &mut ActionValues,
    action: usize,
    delta: f64,
    alpha: f64,
) -> Result<()> {
    values.add(action, alpha * delta)
}

/// `V(action) += alpha * pi_sa * delta`.
pub fn modulated_update(
    values: &mut ActionValues,
    action: usize,
    delta: f64,
    alpha: f64,
    pi_sa: f64,
) -> Result<()> {
    if !(0.0..=1.0).contains(&pi_sa) {
        return Err(Error::invalid("pi_sa", format!("{pi_sa} outside [0, 1]")));
    }
    values.add(action, alpha * pi_sa * delta)
}

/// A single-state softmax agent learning with either rule.
#[derive(Debug, Clone)]
pub struct TabularAgent {
    values: ActionValues,
    params: Hyperparams,
    rule: Rule,
    modulation_override: Option<f64>,
}

impl TabularAgent {
    pub fn new(n_actions: usize, params: Hyperparams, rule: Rule) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            values: ActionValues::zeros(n_actions)?,
            params,
            rule,
            modulation_override: None,
        })
    }

    /// Replaces the probability used by the modulated rule with a constant.
    ///
    /// With `1.0` the modulated agent must reproduce the conventional one.
    pub fn with_modulation_override(mut self, pi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&pi) {
            return Err(Error::invalid("pi_sa", format!("{pi} outside [0, 1]")));
        }
        self.modulation_override = Some(pi);
        Ok(self)
    }

    pub fn values(&self) -> &ActionValues {
        &self.values
    }

    pub fn params(&self) -> Hyperparams {
        self.params
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn policy(&self) -> Result<PolicyDistribution> {
        softmax_policy(&self.values, self.params.tau)
    }

    /// Samples an action and returns it with the distribution it came from.
    pub fn act<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(usize, PolicyDistribution)> {
        let dist = self.policy()?;
        Ok((sample_action(&dist, rng), dist))
    }

    /// One-step update after `reward`; `pi_sa` is the probability `action`
    /// had when it was selected. Returns the TD error.
    pub fn learn(&mut self, action: usize, reward: f64, pi_sa: f64) -> Result<f64> {
        check_index(action, self.values.len())?;
        // Continuing single-state task: the successor state is the same state.
        let delta = td_error(reward, self.params.gamma, self.values.max(), self.values[action]);
        match self.rule {
            Rule::Conventional => {
                conventional_update(&mut self.values, action, delta, self.params.alpha)?
            }
            Rule::Modulated => {
                let pi = self.modulation_override.unwrap_or(pi_sa);
                modulated_update(&mut self.values, action, delta, self.params.alpha, pi)?
            }
        }
        Ok(delta)
    }
}
