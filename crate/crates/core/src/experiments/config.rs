use serde::{Deserialize, Serialize};

use crate::env::{CardSortParams, DEFAULT_CLUSTER_STD, DEFAULT_DIM};
use crate::error::{Error, Result};
use crate::learning::{Hyperparams, Rule};

/// Which task to run and its shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TaskConfig {
    Bandit {
        arms: usize,
    },
    Cardsort {
        classes: usize,
        #[serde(default = "default_dim")]
        dim: usize,
        #[serde(default = "default_cluster_std")]
        cluster_std: f64,
    },
}

/// Discount on the bootstrapped successor value for the bandit. Card-sort
/// trials are independent, so the network agent defaults to a one-step target.
pub const DEFAULT_GAMMA: f64 = 0.9;

fn default_dim() -> usize {
    DEFAULT_DIM
}

fn default_cluster_std() -> f64 {
    DEFAULT_CLUSTER_STD
}

impl TaskConfig {
    pub fn cardsort(classes: usize) -> Self {
        TaskConfig::Cardsort {
            classes,
            dim: DEFAULT_DIM,
            cluster_std: DEFAULT_CLUSTER_STD,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TaskConfig::Bandit { .. } => "bandit",
            TaskConfig::Cardsort { .. } => "cardsort",
        }
    }

    /// Number of actions: arms or classes.
    pub fn choices(&self) -> usize {
        match *self {
            TaskConfig::Bandit { arms } => arms,
            TaskConfig::Cardsort { classes, .. } => classes,
        }
    }

    pub fn with_choices(self, n: usize) -> Self {
        match self {
            TaskConfig::Bandit { .. } => TaskConfig::Bandit { arms: n },
            TaskConfig::Cardsort { dim, cluster_std, .. } => TaskConfig::Cardsort {
                classes: n,
                dim,
                cluster_std,
            },
        }
    }

    pub(crate) fn cardsort_params(&self, change_period: usize) -> Option<CardSortParams> {
        match *self {
            TaskConfig::Cardsort { classes, dim, cluster_std } => Some(CardSortParams {
                classes,
                dim,
                cluster_std,
                change_period,
            }),
            TaskConfig::Bandit { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            TaskConfig::Bandit { arms } if arms < 2 => {
                Err(Error::invalid("arms", format!("need at least 2 arms, got {arms}")))
            }
            TaskConfig::Bandit { .. } => Ok(()),
            TaskConfig::Cardsort { .. } => self.cardsort_params(1).expect("cardsort").validate(),
        }
    }

    pub fn default_gamma(&self) -> f64 {
        match self {
            TaskConfig::Bandit { .. } => DEFAULT_GAMMA,
            TaskConfig::Cardsort { .. } => 0.0,
        }
    }

    /// Default learning-rate grid: 21 points over [0, 2] for the tabular
    /// agent, a coarser step-size grid for the network.
    pub fn default_grid(&self) -> HyperGrid {
        match self {
            TaskConfig::Bandit { .. } => HyperGrid::tabular(),
            TaskConfig::Cardsort { .. } => HyperGrid::network(),
        }
    }
}

/// Cartesian grid of learning rates and temperatures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperGrid {
    pub alpha: Vec<f64>,
    pub tau: Vec<f64>,
}

impl HyperGrid {
    pub const TAU: [f64; 3] = [0.5, 1.0, 2.0];

    pub fn tabular() -> Self {
        Self {
            alpha: (0..=20).map(|i| i as f64 / 10.0).collect(),
            tau: Self::TAU.to_vec(),
        }
    }

    pub fn network() -> Self {
        Self {
            alpha: vec![0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0],
            tau: Self::TAU.to_vec(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty() || self.tau.is_empty()
    }

    /// Cells ordered by alpha, then tau, both ascending.
    pub fn cells(&self, gamma: f64) -> Result<Vec<Hyperparams>> {
        let mut alphas = self.alpha.clone();
        let mut taus = self.tau.clone();
        alphas.sort_by(f64::total_cmp);
        alphas.dedup();
        taus.sort_by(f64::total_cmp);
        taus.dedup();
        let mut cells = Vec::with_capacity(alphas.len() * taus.len());
        for &alpha in &alphas {
            for &tau in &taus {
                cells.push(Hyperparams::new(alpha, gamma, tau)?);
            }
        }
        Ok(cells)
    }
}

/// Where an experiment gets its hyperparameters from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum HyperSelection {
    Fixed(Hyperparams),
    Grid(HyperGrid),
}

/// One agent on one task instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeConfig {
    pub task: TaskConfig,
    pub rule: Rule,
    pub change_period: usize,
    pub total_steps: usize,
    pub params: Hyperparams,
    /// Constant probability fed to the modulated rule instead of pi.
    pub modulation_override: Option<f64>,
}

impl EpisodeConfig {
    pub fn new(task: TaskConfig, rule: Rule, change_period: usize, total_steps: usize, params: Hyperparams) -> Self {
        Self {
            task,
            rule,
            change_period,
            total_steps,
            params,
            modulation_override: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.task.validate()?;
        self.params.validate()?;
        if self.change_period == 0 {
            return Err(Error::invalid("change_period", "must be at least 1"));
        }
        Ok(())
    }
}

/// A full comparison: every rule, every repetition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: TaskConfig,
    pub rules: Vec<Rule>,
    pub change_period: usize,
    pub total_steps: usize,
    pub repetitions: usize,
    pub seed: u64,
    /// Falls back to [`TaskConfig::default_gamma`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    pub hyperparams: HyperSelection,
}

impl ExperimentConfig {
    /// Defaults for the rotating-bandit comparison: 1500 steps, rotation
    /// every 100, 20 repetitions, both rules grid-searched.
    pub fn bandit(arms: usize, seed: u64) -> Self {
        Self {
            task: TaskConfig::Bandit { arms },
            rules: Rule::ALL.to_vec(),
            change_period: 100,
            total_steps: 1500,
            repetitions: 20,
            seed,
            gamma: None,
            hyperparams: HyperSelection::Grid(HyperGrid::tabular()),
        }
    }

    pub fn cardsort(classes: usize, seed: u64) -> Self {
        Self {
            task: TaskConfig::cardsort(classes),
            hyperparams: HyperSelection::Grid(HyperGrid::network()),
            ..Self::bandit(classes, seed)
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma.unwrap_or_else(|| self.task.default_gamma())
    }

    pub fn validate(&self) -> Result<()> {
        self.task.validate()?;
        if self.rules.is_empty() {
            return Err(Error::invalid("rules", "at least one rule is required"));
        }
        if self.change_period == 0 {
            return Err(Error::invalid("change_period", "must be at least 1"));
        }
        if self.total_steps < self.change_period {
            return Err(Error::invalid(
                "total_steps",
                format!("{} is shorter than change_period {}", self.total_steps, self.change_period),
            ));
        }
        if self.repetitions == 0 {
            return Err(Error::invalid("repetitions", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.gamma()) {
            return Err(Error::invalid("gamma", format!("{} not in [0, 1]", self.gamma())));
        }
        match &self.hyperparams {
            HyperSelection::Fixed(p) => p.validate(),
            HyperSelection::Grid(g) if g.is_empty() => Err(Error::invalid("grid", "empty hyperparameter grid")),
            HyperSelection::Grid(g) => g.cells(self.gamma()).map(|_| ()),
        }
    }

    pub(crate) fn episode(&self, rule: Rule, params: Hyperparams) -> EpisodeConfig {
        EpisodeConfig::new(self.task, rule, self.change_period, self.total_steps, params)
    }
}
