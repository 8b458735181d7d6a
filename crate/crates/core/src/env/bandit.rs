use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::reward_for;
use crate::error::{check_index, Error, Result};
use crate::seeds;

pub const HIGH_PROB: f64 = 0.9;
pub const LOW_PROB: f64 = 0.0;
/// Range of the reward probabilities of the remaining arms.
pub const FILL_RANGE: (f64, f64) = (0.25, 0.75);

/// Rotating n-armed bandit.
///
/// The base list is `[0.9, 0.0, u_1, .., u_{n-2}]` and arm `i` currently pays
/// with probability `base[(i + change_count) % n]`. Each rotation shifts the
/// assignment by one, so the arm holding 0.9 moves onto 0.0 and every arm's
/// probability changes while the multiset stays fixed.
#[derive(Debug, Clone)]
pub struct Bandit {
    base_probs: Vec<f64>,
    change_count: usize,
    change_period: usize,
    step: usize,
    rng: ChaCha8Rng,
}

impl Bandit {
    pub fn new(n_arms: usize, change_period: usize, seed: u64) -> Result<Self> {
        if n_arms < 2 {
            return Err(Error::invalid("arms", format!("need at least 2 arms, got {n_arms}")));
        }
        if change_period == 0 {
            return Err(Error::invalid("change_period", "must be at least 1"));
        }
        let mut setup = seeds::rng(seeds::component(seed, 0));
        let mut base_probs = vec![HIGH_PROB, LOW_PROB];
        base_probs.extend((2..n_arms).map(|_| setup.random_range(FILL_RANGE.0..=FILL_RANGE.1)));
        Ok(Self {
            base_probs,
            change_count: 0,
            change_period,
            step: 0,
            rng: seeds::rng(seeds::component(seed, 1)),
        })
    }

    pub fn n_arms(&self) -> usize {
        self.base_probs.len()
    }

    pub fn base_probs(&self) -> &[f64] {
        &self.base_probs
    }

    pub fn change_count(&self) -> usize {
        self.change_count
    }

    pub fn change_period(&self) -> usize {
        self.change_period
    }

    pub fn steps_taken(&self) -> usize {
        self.step
    }

    pub fn arm_prob(&self, arm: usize) -> Result<f64> {
        check_index(arm, self.n_arms())?;
        Ok(self.base_probs[(arm + self.change_count) % self.n_arms()])
    }

    pub fn arm_probs(&self) -> Vec<f64> {
        let n = self.n_arms();
        (0..n).map(|i| self.base_probs[(i + self.change_count) % n]).collect()
    }

    /// The arm currently paying with probability 0.9.
    pub fn best_arm(&self) -> usize {
        let n = self.n_arms();
        (n - self.change_count % n) % n
    }

    /// Pulls `arm`: +1 with the arm's probability, -1 otherwise.
    pub fn step(&mut self, arm: usize) -> Result<f64> {
        let p = self.arm_prob(arm)?;
        let reward = reward_for(self.rng.random::<f64>() < p);
        self.step += 1;
        if self.step % self.change_period == 0 {
            self.rotate();
        }
        Ok(reward)
    }

    pub fn rotate(&mut self) {
        self.change_count += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn two_arms_have_no_fill() {
        let b = Bandit::new(2, 100, 9).unwrap();
        assert_eq!(b.base_probs(), &[0.9, 0.0]);
    }

    #[test]
    fn fill_values_in_range() {
        let b = Bandit::new(7, 100, 4).unwrap();
        assert_eq!(b.base_probs().len(), 7);
        for &p in &b.base_probs()[2..] {
            assert!((0.25..=0.75).contains(&p));
        }
    }

    #[test]
    fn same_seed_same_bandit() {
        let a = Bandit::new(7, 100, 123).unwrap();
        let b = Bandit::new(7, 100, 123).unwrap();
        assert_eq!(a.base_probs(), b.base_probs());
        assert_ne!(a.base_probs(), Bandit::new(7, 100, 124).unwrap().base_probs());
    }

    #[test]
    fn rejects_single_arm() {
        assert!(matches!(
            Bandit::new(1, 100, 0),
            Err(Error::InvalidArgument { name: "arms", .. })
        ));
        assert!(Bandit::new(3, 0, 0).is_err());
    }

    #[test]
    fn rotation_moves_high_arm_to_zero() {
        let mut b = Bandit::new(4, 100, 1).unwrap();
        assert_eq!(b.arm_prob(0).unwrap(), 0.9);
        b.rotate();
        assert_eq!(b.arm_prob(0).unwrap(), 0.0);
    }

    #[test]
    fn full_cycle_restores_assignment() {
        let mut b = Bandit::new(6, 100, 2).unwrap();
        let initial = b.arm_probs();
        let multiset = sorted(initial.clone());
        for _ in 0..6 {
            let before = b.arm_probs();
            let high = b.best_arm();
            b.rotate();
            let after = b.arm_probs();
            assert_eq!(sorted(after.clone()), multiset);
            assert_eq!(after[high], 0.0);
            assert!(before.iter().zip(&after).all(|(x, y)| x != y));
        }
        assert_eq!(b.arm_probs(), initial);
    }

    #[test]
    fn zero_arm_never_pays() {
        let mut b = Bandit::new(5, 1_000_000, 8).unwrap();
        let zero = b.arm_probs().iter().position(|&p| p == 0.0).unwrap();
        for _ in 0..10_000 {
            assert_eq!(b.step(zero).unwrap(), -1.0);
        }
    }

    #[test]
    fn rotation_happens_after_boundary_step() {
        let mut b = Bandit::new(3, 10, 0).unwrap();
        for _ in 0..9 {
            b.step(0).unwrap();
        }
        assert_eq!(b.change_count(), 0);
        b.step(0).unwrap();
        assert_eq!(b.change_count(), 1);
    }

    #[test]
    fn invalid_arm() {
        let mut b = Bandit::new(3, 10, 0).unwrap();
        assert_eq!(b.step(3), Err(Error::IndexOutOfRange { index: 3, len: 3 }));
    }
}
