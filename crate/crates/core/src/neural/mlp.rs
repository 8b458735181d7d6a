use rand::Rng;

use crate::error::{check_index, Error, Result};

pub const DEFAULT_HIDDEN: usize = 20;

/// One-hidden-layer perceptron: `q = w2 * tanh(w1 * x + b1) + b2`.
///
/// Weight matrices are stored row-major, one row per receiving unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    inputs: usize,
    hidden: usize,
    outputs: usize,
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

/// Gradients laid out like the parameters of an [`Mlp`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

impl Gradients {
    fn zeros_like(net: &Mlp) -> Self {
        Self {
            w1: vec![0.0; net.w1.len()],
            b1: vec![0.0; net.b1.len()],
            w2: vec![0.0; net.w2.len()],
            b2: vec![0.0; net.b2.len()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.iter().all(|g| g == 0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.w1.iter().chain(&self.b1).chain(&self.w2).chain(&self.b2).copied()
    }

    fn accumulate(&mut self, other: &Gradients) {
        for (a, b) in self.w1.iter_mut().zip(&other.w1) {
            *a += b;
        }
        for (a, b) in self.b1.iter_mut().zip(&other.b1) {
            *a += b;
        }
        for (a, b) in self.w2.iter_mut().zip(&other.w2) {
            *a += b;
        }
        for (a, b) in self.b2.iter_mut().zip(&other.b2) {
            *a += b;
        }
    }
}

impl Mlp {
    /// All-zero network.
    pub fn zeros(inputs: usize, hidden: usize, outputs: usize) -> Result<Self> {
        if inputs == 0 || hidden == 0 || outputs == 0 {
            return Err(Error::invalid("layer_sizes", "every layer needs at least one unit"));
        }
        Ok(Self {
            inputs,
            hidden,
            outputs,
            w1: vec![0.0; hidden * inputs],
            b1: vec![0.0; hidden],
            w2: vec![0.0; outputs * hidden],
            b2: vec![0.0; outputs],
        })
    }

    /// Uniform init in `[-1/sqrt(fan_in), 1/sqrt(fan_in)]`.
    pub fn new<R: Rng + ?Sized>(inputs: usize, hidden: usize, outputs: usize, rng: &mut R) -> Result<Self> {
        let mut net = Self::zeros(inputs, hidden, outputs)?;
        let r1 = 1.0 / (inputs as f64).sqrt();
        let r2 = 1.0 / (hidden as f64).sqrt();
        for w in net.w1.iter_mut().chain(net.b1.iter_mut()) {
            *w = rng.random_range(-r1..=r1);
        }
        for w in net.w2.iter_mut().chain(net.b2.iter_mut()) {
            *w = rng.random_range(-r2..=r2);
        }
        Ok(net)
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn is_finite(&self) -> bool {
        self.w1.iter().chain(&self.b1).chain(&self.w2).chain(&self.b2).all(|w| w.is_finite())
    }

    fn hidden_activations(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.inputs {
            return Err(Error::DimensionMismatch { expected: self.inputs, actual: x.len() });
        }
        Ok(self
            .w1
            .chunks_exact(self.inputs)
            .zip(&self.b1)
            .map(|(row, b)| (row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>() + b).tanh())
            .collect())
    }

    fn head(&self, h: &[f64]) -> Vec<f64> {
        self.w2
            .chunks_exact(self.hidden)
            .zip(&self.b2)
            .map(|(row, b)| row.iter().zip(h).map(|(w, hj)| w * hj).sum::<f64>() + b)
            .collect()
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        let h = self.hidden_activations(x)?;
        Ok(self.head(&h))
    }

    /// Gradient of `0.5 * residual^2` where `residual = target - q[action]`
    /// is held fixed at `error_signal`.
    pub fn backward(&self, x: &[f64], action: usize, error_signal: f64) -> Result<Gradients> {
        check_index(action, self.outputs)?;
        let h = self.hidden_activations(x)?;
        let mut grads = Gradients::zeros_like(self);
        // dL/dq[action]
        let dq = -error_signal;
        grads.b2[action] = dq;
        let w2_row = &self.w2[action * self.hidden..(action + 1) * self.hidden];
        for j in 0..self.hidden {
            grads.w2[action * self.hidden + j] = dq * h[j];
            let dpre = dq * w2_row[j] * (1.0 - h[j] * h[j]);
            grads.b1[j] = dpre;
            for (i, xi) in x.iter().enumerate() {
                grads.w1[j * self.inputs + i] = dpre * xi;
            }
        }
        Ok(grads)
    }

    /// `params -= step_size * grads`.
    pub fn apply(&mut self, grads: &Gradients, step_size: f64) {
        for (w, g) in self.w1.iter_mut().zip(&grads.w1) {
            *w -= step_size * g;
        }
        for (w, g) in self.b1.iter_mut().zip(&grads.b1) {
            *w -= step_size * g;
        }
        for (w, g) in self.w2.iter_mut().zip(&grads.w2) {
            *w -= step_size * g;
        }
        for (w, g) in self.b2.iter_mut().zip(&grads.b2) {
            *w -= step_size * g;
        }
    }

    /// Sums per-sample gradients and returns the mean.
    pub(crate) fn mean_gradient<'a>(&self, parts: impl Iterator<Item = Gradients> + 'a) -> Option<Gradients> {
        let mut total = Gradients::zeros_like(self);
        let mut count = 0usize;
        for g in parts {
            total.accumulate(&g);
            count += 1;
        }
        if count == 0 {
            return None;
        }
        let scale = 1.0 / count as f64;
        for v in total.w1.iter_mut().chain(total.b1.iter_mut()).chain(total.w2.iter_mut()).chain(total.b2.iter_mut()) {
            *v *= scale;
        }
        Some(total)
    }
}
