use rayon::prelude::*;

use super::config::{EpisodeConfig, ExperimentConfig, HyperSelection, TaskConfig};
use super::record::{RegimeChange, RunRecord};
use super::search::{grid_search, GridResult};
use crate::env::{Bandit, CardSort};
use crate::error::Result;
use crate::learning::{Hyperparams, Rule, TabularAgent};
use crate::neural::{DqnAgent, DqnConfig};
use crate::seeds::{self, Stream};

const ENV_COMPONENT: u64 = 10;
const AGENT_COMPONENT: u64 = 11;

/// Runs one agent for `total_steps` on a fresh task instance.
///
/// The bandit is paired with the tabular agent and the card-sorting task with
/// the DQN agent. The record is a pure function of `(config, seed)`.
pub fn run_episode(config: &EpisodeConfig, seed: u64) -> Result<RunRecord> {
    config.validate()?;
    let env_seed = seeds::component(seed, ENV_COMPONENT);
    let mut rng = seeds::rng(seeds::component(seed, AGENT_COMPONENT));
    let mut record = RunRecord::default();

    match config.task {
        TaskConfig::Bandit { arms } => {
            let mut env = Bandit::new(arms, config.change_period, env_seed)?;
            let mut agent = TabularAgent::new(arms, config.params, config.rule)?;
            if let Some(pi) = config.modulation_override {
                agent = agent.with_modulation_override(pi)?;
            }
            for _ in 0..config.total_steps {
                let (action, dist) = agent.act(&mut rng)?;
                let best = env.best_arm();
                let rotations = env.change_count();
                let reward = env.step(action)?;
                agent.learn(action, reward, dist.prob(action)?)?;
                record.push(action, reward, dist.into_vec());
                if env.change_count() != rotations {
                    record.changes.push(RegimeChange {
                        step: record.len(),
                        previous_best: Some(best),
                    });
                }
            }
        }
        TaskConfig::Cardsort { dim, .. } => {
            let params = config.task.cardsort_params(config.change_period).expect("cardsort task");
            let mut env = CardSort::new(params, env_seed)?;
            let dqn = DqnConfig::new(dim, params.classes, config.params, config.rule);
            let mut agent = DqnAgent::new(dqn, &mut rng)?;
            if let Some(pi) = config.modulation_override {
                agent = agent.with_modulation_override(pi)?;
            }
            let mut card = env.draw();
            for _ in 0..config.total_steps {
                let (action, dist) = agent.act(&card.point, &mut rng)?;
                let reward = env.respond(&card, action)?;
                let pi = dist.prob(action)?;
                let next = env.draw();
                let point = std::mem::replace(&mut card, next).point;
                agent.observe(point, action, reward, Some(card.point.clone()), pi)?;
                record.push(action, reward, dist.into_vec());
                if env.steps_taken() % config.change_period == 0 {
                    record.changes.push(RegimeChange {
                        step: record.len(),
                        previous_best: None,
                    });
                }
            }
        }
    }
    Ok(record)
}

/// Outcome of one rule within an experiment.
#[derive(Debug, Clone)]
pub struct RuleResult {
    pub rule: Rule,
    pub params: Hyperparams,
    /// Present when hyperparameters came from a grid search.
    pub search: Option<GridResult>,
    pub eval_seeds: Vec<u64>,
    /// One record per repetition, in repetition order.
    pub records: Vec<RunRecord>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub search_seeds: Vec<u64>,
    pub rules: Vec<RuleResult>,
}

impl ExperimentResult {
    pub fn rule(&self, rule: Rule) -> Option<&RuleResult> {
        self.rules.iter().find(|r| r.rule == rule)
    }
}

/// Selects hyperparameters per rule (grid search on the search stream when
/// configured) and evaluates every rule on the same evaluation seeds.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let eval_seeds = seeds::derive_many(config.seed, Stream::Eval, config.repetitions);
    let search_seeds = seeds::derive_many(config.seed, Stream::Search, config.repetitions);

    let mut rules = Vec::with_capacity(config.rules.len());
    for &rule in &config.rules {
        let (params, search) = match &config.hyperparams {
            HyperSelection::Fixed(p) => (*p, None),
            HyperSelection::Grid(grid) => {
                let template = config.episode(rule, Hyperparams { gamma: config.gamma(), ..default_params() });
                let result = grid_search(&template, grid, &search_seeds, &eval_seeds)?;
                (result.best, Some(result))
            }
        };
        let episode = config.episode(rule, params);
        let records = eval_seeds
            .par_iter()
            .map(|&seed| run_episode(&episode, seed))
            .collect::<Result<Vec<_>>>()?;
        rules.push(RuleResult {
            rule,
            params,
            search,
            eval_seeds: eval_seeds.clone(),
            records,
        });
    }
    Ok(ExperimentResult {
        config: config.clone(),
        search_seeds,
        rules,
    })
}

fn default_params() -> Hyperparams {
    Hyperparams {
        alpha: 0.1,
        gamma: 0.0,
        tau: 1.0,
    }
}
