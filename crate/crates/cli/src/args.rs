use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use modtd::env::{DEFAULT_CLUSTER_STD, DEFAULT_DIM};
use modtd::experiments::{ExperimentConfig, HyperGrid, HyperSelection, TaskConfig};
use modtd::Rule;

#[derive(Debug, Parser)]
#[command(name = "modtd", version, about = "Modulated vs conventional TD learning on nonstationary tasks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rotating n-armed bandit with tabular agents.
    Bandit(BanditArgs),
    /// Rule-switching classification with deep Q-network agents.
    Cardsort(CardsortArgs),
    /// Reward per step and time-to-preference across choice counts.
    Sweep(SweepArgs),
    /// Run from a TOML config file.
    Run(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Agents {
    Conventional,
    Modulated,
    Both,
}

impl Agents {
    fn rules(self) -> Vec<Rule> {
        match self {
            Agents::Conventional => vec![Rule::Conventional],
            Agents::Modulated => vec![Rule::Modulated],
            Agents::Both => Rule::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Task {
    Bandit,
    Cardsort,
}

/// Flags shared by every experiment.
#[derive(Debug, Args)]
pub struct Common {
    /// Steps between regime changes.
    #[arg(long, default_value_t = 100)]
    pub change_period: usize,
    /// Steps per repetition.
    #[arg(long, default_value_t = 1500)]
    pub steps: usize,
    /// Repetitions per rule.
    #[arg(long, default_value_t = 20)]
    pub reps: usize,
    #[arg(long, value_enum, default_value_t = Agents::Both)]
    pub agents: Agents,
    /// Base seed; every instance seed is derived from it.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Comma-separated learning rates (step sizes for the network).
    #[arg(long)]
    pub alpha_grid: Option<String>,
    /// Comma-separated softmax temperatures.
    #[arg(long)]
    pub tau_grid: Option<String>,
    /// Discount on the bootstrapped successor value [default: 0.9 for the
    /// bandit, 0 for card sorting].
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BanditArgs {
    #[arg(long, default_value_t = 7)]
    pub arms: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CardShape {
    /// Dimension of the stimulus space.
    #[arg(long, default_value_t = DEFAULT_DIM)]
    pub dim: usize,
    /// Standard deviation of each cluster.
    #[arg(long, default_value_t = DEFAULT_CLUSTER_STD)]
    pub cluster_std: f64,
}

#[derive(Debug, Args)]
pub struct CardsortArgs {
    #[arg(long, default_value_t = 4)]
    pub classes: usize,
    #[command(flatten)]
    pub shape: CardShape,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = Task::Bandit)]
    pub task: Task,
    /// Comma-separated arm counts (bandit).
    #[arg(long, conflicts_with = "k_values")]
    pub n_values: Option<String>,
    /// Comma-separated class counts (cardsort).
    #[arg(long)]
    pub k_values: Option<String>,
    #[command(flatten)]
    pub shape: CardShape,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
}

pub fn parse_list<T: FromStr>(flag: &str, raw: &str) -> Result<Vec<T>, String> {
    let values = raw
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| format!("invalid value `{s}` in `--{flag}`")))
        .collect::<Result<Vec<T>, String>>()?;
    if values.is_empty() {
        return Err(format!("`--{flag}` needs at least one value"));
    }
    Ok(values)
}

fn at_least(flag: &str, value: usize, min: usize) -> Result<(), String> {
    if value < min {
        Err(format!("`--{flag}` must be at least {min}, got {value}"))
    } else {
        Ok(())
    }
}

impl Common {
    fn experiment(&self, task: TaskConfig) -> Result<ExperimentConfig, String> {
        if self.format != Format::Csv {
            return Err("only `--format csv` is supported".into());
        }
        at_least("change-period", self.change_period, 1)?;
        at_least("reps", self.reps, 1)?;
        if self.steps < self.change_period {
            return Err(format!(
                "`--steps` ({}) must be at least `--change-period` ({})",
                self.steps, self.change_period
            ));
        }
        let mut grid = task.default_grid();
        if let Some(raw) = &self.alpha_grid {
            grid.alpha = parse_list("alpha-grid", raw)?;
        }
        if let Some(raw) = &self.tau_grid {
            grid.tau = parse_list("tau-grid", raw)?;
        }
        let config = ExperimentConfig {
            task,
            rules: self.agents.rules(),
            change_period: self.change_period,
            total_steps: self.steps,
            repetitions: self.reps,
            seed: self.seed,
            gamma: self.gamma,
            hyperparams: HyperSelection::Grid(HyperGrid { ..grid }),
        };
        config.validate().map_err(|e| e.to_string())?;
        Ok(config)
    }
}

impl BanditArgs {
    pub fn resolve(&self) -> Result<(ExperimentConfig, PathBuf), String> {
        at_least("arms", self.arms, 2)?;
        let config = self.common.experiment(TaskConfig::Bandit { arms: self.arms })?;
        Ok((config, self.common.out.clone()))
    }
}

impl CardShape {
    fn task(&self, classes: usize) -> Result<TaskConfig, String> {
        at_least("dim", self.dim, 1)?;
        if !(self.cluster_std >= 0.0 && self.cluster_std.is_finite()) {
            return Err(format!("`--cluster-std` must be a finite non-negative number, got {}", self.cluster_std));
        }
        Ok(TaskConfig::Cardsort {
            classes,
            dim: self.dim,
            cluster_std: self.cluster_std,
        })
    }
}

impl CardsortArgs {
    pub fn resolve(&self) -> Result<(ExperimentConfig, PathBuf), String> {
        at_least("classes", self.classes, 2)?;
        let config = self.common.experiment(self.shape.task(self.classes)?)?;
        Ok((config, self.common.out.clone()))
    }
}

impl SweepArgs {
    pub fn resolve(&self) -> Result<(ExperimentConfig, Vec<usize>, PathBuf), String> {
        let (flag, raw) = match self.task {
            Task::Bandit => ("n-values", self.n_values.as_ref().or(self.k_values.as_ref())),
            Task::Cardsort => ("k-values", self.k_values.as_ref().or(self.n_values.as_ref())),
        };
        let raw = raw.ok_or_else(|| format!("`--{flag}` is required"))?;
        let ns: Vec<usize> = parse_list(flag, raw)?;
        for &n in &ns {
            at_least(flag, n, 2)?;
        }
        let task = match self.task {
            Task::Bandit => TaskConfig::Bandit { arms: ns[0] },
            Task::Cardsort => self.shape.task(ns[0])?,
        };
        let config = self.common.experiment(task)?;
        Ok((config, ns, self.common.out.clone()))
    }
}
