/// One interaction step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRow {
    /// 1-based step index.
    pub step: usize,
    pub action: usize,
    pub reward: f64,
    /// Policy at action time.
    pub probs: Vec<f64>,
    pub cumulative_reward: f64,
}

/// A regime boundary: the change took effect after `step`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegimeChange {
    pub step: usize,
    /// Arm paying 0.9 in the regime that just ended (bandit only).
    pub previous_best: Option<usize>,
}

/// Per-step log of one episode.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunRecord {
    pub rows: Vec<StepRow>,
    pub changes: Vec<RegimeChange>,
}

impl RunRecord {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rewards(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.reward)
    }

    pub fn total_reward(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.cumulative_reward)
    }

    /// Pushes a row, filling in step index and running total.
    pub(crate) fn push(&mut self, action: usize, reward: f64, probs: Vec<f64>) {
        let cumulative_reward = self.total_reward() + reward;
        self.rows.push(StepRow {
            step: self.rows.len() + 1,
            action,
            reward,
            probs,
            cumulative_reward,
        });
    }

    /// Checks prefix sums and policy normalization on every row.
    pub fn check_integrity(&self) -> bool {
        let mut running = 0.0;
        self.rows.iter().enumerate().all(|(i, row)| {
            running += row.reward;
            let total: f64 = row.probs.iter().sum();
            row.step == i + 1 && row.cumulative_reward == running && (total - 1.0).abs() <= 1e-9
        })
    }
}
