use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use super::reward_for;
use crate::error::{check_index, Error, Result};
use crate::seeds;

pub const DEFAULT_DIM: usize = 2;
pub const DEFAULT_CLUSTER_STD: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CardSortParams {
    pub classes: usize,
    pub dim: usize,
    pub cluster_std: f64,
    pub change_period: usize,
}

impl CardSortParams {
    pub fn new(classes: usize, change_period: usize) -> Self {
        Self {
            classes,
            dim: DEFAULT_DIM,
            cluster_std: DEFAULT_CLUSTER_STD,
            change_period,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.classes < 2 {
            return Err(Error::invalid("classes", format!("need at least 2 classes, got {}", self.classes)));
        }
        if self.dim < 1 {
            return Err(Error::invalid("dim", "must be at least 1"));
        }
        if !(self.cluster_std >= 0.0 && self.cluster_std.is_finite()) {
            return Err(Error::invalid("cluster_std", format!("{} is not a valid spread", self.cluster_std)));
        }
        if self.change_period == 0 {
            return Err(Error::invalid("change_period", "must be at least 1"));
        }
        Ok(())
    }
}

/// One presented stimulus.
#[derive(Debug, Clone, PartialEq)]
pub struct Card {
    pub point: Vec<f64>,
    pub cluster: usize,
    /// Label of `cluster` under the current rule.
    pub label: usize,
}

/// Rule-switching classification task.
///
/// Points are drawn from Gaussian clusters and must be matched to the label
/// their cluster currently carries. Every `change_period` trials the labels
/// are scrambled by a random derangement, so no cluster keeps its label.
#[derive(Debug, Clone)]
pub struct CardSort {
    params: CardSortParams,
    centers: Vec<Vec<f64>>,
    label_perm: Vec<usize>,
    step: usize,
    rng: ChaCha8Rng,
}

impl CardSort {
    pub fn new(params: CardSortParams, seed: u64) -> Result<Self> {
        params.validate()?;
        let mut setup = seeds::rng(seeds::component(seed, 0));
        let centers = (0..params.classes)
            .map(|_| (0..params.dim).map(|_| StandardNormal.sample(&mut setup)).collect())
            .collect();
        Ok(Self {
            params,
            centers,
            label_perm: (0..params.classes).collect(),
            step: 0,
            rng: seeds::rng(seeds::component(seed, 1)),
        })
    }

    pub fn params(&self) -> &CardSortParams {
        &self.params
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn label_perm(&self) -> &[usize] {
        &self.label_perm
    }

    pub fn steps_taken(&self) -> usize {
        self.step
    }

    /// Draws a stimulus without advancing the trial counter.
    pub fn draw(&mut self) -> Card {
        let cluster = self.rng.random_range(0..self.params.classes);
        let point = if self.params.cluster_std == 0.0 {
            self.centers[cluster].clone()
        } else {
            let noise = Normal::new(0.0, self.params.cluster_std).expect("validated spread");
            self.centers[cluster]
                .iter()
                .map(|c| c + noise.sample(&mut self.rng))
                .collect()
        };
        Card {
            point,
            cluster,
            label: self.label_perm[cluster],
        }
    }

    /// Scores `guess` against `card` and closes the trial.
    pub fn respond(&mut self, card: &Card, guess: usize) -> Result<f64> {
        check_index(guess, self.params.classes)?;
        let reward = reward_for(guess == card.label);
        self.advance();
        Ok(reward)
    }

    /// Draws a card and, if a guess is given, scores it. The trial counter
    /// advances either way.
    pub fn trial(&mut self, guess: Option<usize>) -> Result<(Card, Option<f64>)> {
        if let Some(g) = guess {
            check_index(g, self.params.classes)?;
        }
        let card = self.draw();
        match guess {
            Some(g) => {
                let reward = self.respond(&card, g)?;
                Ok((card, Some(reward)))
            }
            None => {
                self.advance();
                Ok((card, None))
            }
        }
    }

    fn advance(&mut self) {
        self.step += 1;
        if self.step % self.params.change_period == 0 {
            self.scramble();
        }
    }

    /// Composes the labelling with a uniformly random derangement.
    pub fn scramble(&mut self) {
        let sigma = random_derangement(self.params.classes, &mut self.rng);
        self.label_perm = sigma.iter().map(|&s| self.label_perm[s]).collect();
    }
}

/// Uniform derangement of `0..k` by rejection; needs about e shuffles.
fn random_derangement<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<usize> {
    debug_assert!(k >= 2);
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        perm.shuffle(rng);
        if perm.iter().enumerate().all(|(i, &p)| i != p) {
            return perm;
        }
    }
}
