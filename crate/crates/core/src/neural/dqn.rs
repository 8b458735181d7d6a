use rand::Rng;

use super::mlp::{Gradients, Mlp, DEFAULT_HIDDEN};
use super::replay::{ReplayBuffer, Transition, DEFAULT_CAPACITY};
use crate::error::{Error, Result};
use crate::learning::{sample_action, softmax, td_error, Hyperparams, PolicyDistribution, Rule};

pub const DEFAULT_SYNC_PERIOD: usize = 5;
pub const DEFAULT_STEP_SIZE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DqnConfig {
    pub inputs: usize,
    pub actions: usize,
    pub hidden: usize,
    pub replay_capacity: usize,
    pub sync_period: usize,
    /// `alpha` is the gradient step size.
    pub params: Hyperparams,
    pub rule: Rule,
}

impl DqnConfig {
    pub fn new(inputs: usize, actions: usize, params: Hyperparams, rule: Rule) -> Self {
        Self {
            inputs,
            actions,
            hidden: DEFAULT_HIDDEN,
            replay_capacity: DEFAULT_CAPACITY,
            sync_period: DEFAULT_SYNC_PERIOD,
            params,
            rule,
        }
    }
}

/// Deep Q-learner with softmax action selection.
///
/// Every trial the whole replay buffer is replayed as one batch and the
/// policy network takes a single gradient step on
/// `delta = r + gamma * max_b Q_target(next, b) - Q(point, a)`, scaled by the
/// stored action probability under the modulated rule. The target network
/// is a copy refreshed every `sync_period` trials.
#[derive(Debug, Clone)]
pub struct DqnAgent {
    config: DqnConfig,
    policy_net: Mlp,
    target_net: Mlp,
    buffer: ReplayBuffer,
    trials: usize,
    modulation_override: Option<f64>,
}

impl DqnAgent {
    pub fn new<R: Rng + ?Sized>(config: DqnConfig, rng: &mut R) -> Result<Self> {
        config.params.validate()?;
        if config.actions < 2 {
            return Err(Error::invalid("actions", "need at least two actions"));
        }
        if config.sync_period == 0 {
            return Err(Error::invalid("sync_period", "must be at least 1"));
        }
        if config.replay_capacity == 0 {
            return Err(Error::invalid("replay_capacity", "must be at least 1"));
        }
        let policy_net = Mlp::new(config.inputs, config.hidden, config.actions, rng)?;
        Ok(Self {
            target_net: policy_net.clone(),
            policy_net,
            buffer: ReplayBuffer::new(config.replay_capacity),
            trials: 0,
            modulation_override: None,
            config,
        })
    }

    /// Replaces every stored action probability with a constant during
    /// training.
    pub fn with_modulation_override(mut self, pi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&pi) {
            return Err(Error::invalid("pi_sa", format!("{pi} outside [0, 1]")));
        }
        self.modulation_override = Some(pi);
        Ok(self)
    }

    pub fn config(&self) -> &DqnConfig {
        &self.config
    }

    pub fn policy_net(&self) -> &Mlp {
        &self.policy_net
    }

    pub fn policy_net_mut(&mut self) -> &mut Mlp {
        &mut self.policy_net
    }

    pub fn target_net(&self) -> &Mlp {
        &self.target_net
    }

    pub fn buffer(&self) -> &ReplayBuffer {
        &self.buffer
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn policy(&self, point: &[f64]) -> Result<PolicyDistribution> {
        let q = self.policy_net.forward(point)?;
        softmax(&q, self.config.params.tau)
    }

    pub fn act<R: Rng + ?Sized>(&self, point: &[f64], rng: &mut R) -> Result<(usize, PolicyDistribution)> {
        let dist = self.policy(point)?;
        Ok((sample_action(&dist, rng), dist))
    }

    /// Stores the trial, trains on the buffer and syncs the target network
    /// when the trial count reaches a multiple of `sync_period`.
    pub fn observe(
        &mut self,
        point: Vec<f64>,
        action: usize,
        reward: f64,
        next_point: Option<Vec<f64>>,
        pi: f64,
    ) -> Result<()> {
        for p in std::iter::once(&point).chain(next_point.as_ref()) {
            if p.len() != self.config.inputs {
                return Err(Error::DimensionMismatch { expected: self.config.inputs, actual: p.len() });
            }
        }
        crate::error::check_index(action, self.config.actions)?;
        if !(0.0..=1.0).contains(&pi) {
            return Err(Error::invalid("pi_sa", format!("{pi} outside [0, 1]")));
        }
        self.buffer.push(Transition { point, action, reward, next_point, pi });
        self.train_step()?;
        self.trials += 1;
        if self.trials % self.config.sync_period == 0 {
            self.sync_target();
        }
        Ok(())
    }

    /// Batch gradient step over the whole buffer. No-op when empty.
    pub fn train_step(&mut self) -> Result<()> {
        let Some(grads) = self.batch_gradient()? else {
            return Ok(());
        };
        self.policy_net.apply(&grads, self.config.params.alpha);
        if !self.policy_net.is_finite() {
            return Err(Error::Diverged("non-finite network parameters"));
        }
        Ok(())
    }

    fn batch_gradient(&self) -> Result<Option<Gradients>> {
        let mut parts = Vec::with_capacity(self.buffer.len());
        for t in self.buffer.iter() {
            let q = self.policy_net.forward(&t.point)?;
            let v_next = match &t.next_point {
                Some(next) if self.config.params.gamma > 0.0 => {
                    self.target_net.forward(next)?.into_iter().fold(f64::NEG_INFINITY, f64::max)
                }
                _ => 0.0,
            };
            let delta = td_error(t.reward, self.config.params.gamma, v_next, q[t.action]);
            let residual = match self.config.rule {
                Rule::Conventional => delta,
                Rule::Modulated => self.modulation_override.unwrap_or(t.pi) * delta,
            };
            parts.push(self.policy_net.backward(&t.point, t.action, residual)?);
        }
        Ok(self.policy_net.mean_gradient(parts.into_iter()))
    }

    pub fn sync_target(&mut self) {
        self.target_net.clone_from(&self.policy_net);
    }
}
