use std::collections::VecDeque;

pub const DEFAULT_CAPACITY: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub point: Vec<f64>,
    pub action: usize,
    pub reward: f64,
    /// Stimulus that followed, when the task continues.
    pub next_point: Option<Vec<f64>>,
    /// Probability of `action` under the policy when it was taken.
    pub pi: f64,
}

/// Fixed-capacity FIFO of the most recent transitions.
#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    entries: VecDeque<Transition>,
    capacity: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be positive");
        Self {
            entries: VecDeque::with_capacity(capacity),
            capacity,
        }
    }

    pub fn push(&mut self, transition: Transition) {
        if self.entries.len() == self.capacity {
            self.entries.pop_front();
        }
        self.entries.push_back(transition);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Oldest first.
    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        self.entries.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifo_eviction() {
        let mut buf = ReplayBuffer::new(10);
        for i in 1..=15 {
            buf.push(Transition { point: vec![i as f64], action: 0, reward: 0.0, next_point: None, pi: 1.0 });
            assert!(buf.len() <= 10);
        }
        let kept: Vec<f64> = buf.iter().map(|t| t.point[0]).collect();
        assert_eq!(kept, (6..=15).map(f64::from).collect::<Vec<_>>());
    }
}
