//! Gaussian policy and value networks over a constant observation, with
//! hand-written backpropagation. All parameters live in one flat vector.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

const LN_2PI: f64 = 1.8378770664093453;
/// The observation fed to both networks: episodes carry no state.
pub const OBSERVATION: f64 = 1.0;

/// Offsets of one `1 -> h -> h -> out` tanh network inside the flat vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct MlpLayout {
    start: usize,
    hidden: usize,
    out: usize,
}

impl MlpLayout {
    fn len(hidden: usize, out: usize) -> usize {
        hidden + hidden + hidden * hidden + hidden + out * hidden + out
    }

    fn end(&self) -> usize {
        self.start + Self::len(self.hidden, self.out)
    }

    // w1 (h), b1 (h), w2 (h x h, row-major), b2 (h), w3 (out x h), b3 (out)
    fn offsets(&self) -> [usize; 6] {
        let h = self.hidden;
        let w1 = self.start;
        let b1 = w1 + h;
        let w2 = b1 + h;
        let b2 = w2 + h * h;
        let w3 = b2 + h;
        let b3 = w3 + self.out * h;
        [w1, b1, w2, b2, w3, b3]
    }

    fn forward(&self, theta: &[f64], x: f64) -> MlpCache {
        let h = self.hidden;
        let [w1, b1, w2, b2, w3, b3] = self.offsets();
        let h1: Vec<f64> = (0..h).map(|j| libm::tanh(theta[w1 + j] * x + theta[b1 + j])).collect();
        let h2: Vec<f64> = (0..h)
            .map(|i| {
                let row = &theta[w2 + i * h..w2 + (i + 1) * h];
                let s: f64 = row.iter().zip(&h1).map(|(w, a)| w * a).sum();
                libm::tanh(s + theta[b2 + i])
            })
            .collect();
        let out: Vec<f64> = (0..self.out)
            .map(|k| {
                let row = &theta[w3 + k * h..w3 + (k + 1) * h];
                let s: f64 = row.iter().zip(&h2).map(|(w, a)| w * a).sum();
                s + theta[b3 + k]
            })
            .collect();
        MlpCache { x, h1, h2, out }
    }

    /// Accumulates `d out` back into `grad`.
    fn backward(&self, theta: &[f64], cache: &MlpCache, d_out: &[f64], grad: &mut [f64]) {
        let h = self.hidden;
        let [w1, b1, w2, b2, w3, b3] = self.offsets();
        let mut d_h2 = vec![0.0; h];
        for (k, &g) in d_out.iter().enumerate() {
            grad[b3 + k] += g;
            for i in 0..h {
                grad[w3 + k * h + i] += g * cache.h2[i];
                d_h2[i] += g * theta[w3 + k * h + i];
            }
        }
        let mut d_h1 = vec![0.0; h];
        for i in 0..h {
            let d_pre = d_h2[i] * (1.0 - cache.h2[i] * cache.h2[i]);
            grad[b2 + i] += d_pre;
            for j in 0..h {
                grad[w2 + i * h + j] += d_pre * cache.h1[j];
                d_h1[j] += d_pre * theta[w2 + i * h + j];
            }
        }
        for j in 0..h {
            let d_pre = d_h1[j] * (1.0 - cache.h1[j] * cache.h1[j]);
            grad[b1 + j] += d_pre;
            grad[w1 + j] += d_pre * cache.x;
        }
    }

    fn init<R: Rng + ?Sized>(&self, theta: &mut [f64], out_gain: f64, rng: &mut R) {
        let h = self.hidden;
        let [w1, _, w2, _, w3, _] = self.offsets();
        let hidden_gain = core::f64::consts::SQRT_2;
        for j in 0..h {
            theta[w1 + j] = hidden_gain * rng.sample::<f64, _>(StandardNormal);
        }
        let s2 = hidden_gain / libm::sqrt(h as f64);
        for v in &mut theta[w2..w2 + h * h] {
            *v = s2 * rng.sample::<f64, _>(StandardNormal);
        }
        let s3 = out_gain / libm::sqrt(h as f64);
        for v in &mut theta[w3..w3 + self.out * h] {
            *v = s3 * rng.sample::<f64, _>(StandardNormal);
        }
    }
}

#[derive(Debug, Clone)]
struct MlpCache {
    x: f64,
    h1: Vec<f64>,
    h2: Vec<f64>,
    out: Vec<f64>,
}

/// Forward pass results needed by the loss and its gradient.
#[derive(Debug, Clone)]
pub struct PolicyOutput {
    /// Pre-squash mean per action coordinate.
    pub mean: Vec<f64>,
    pub log_std: Vec<f64>,
    pub value: f64,
    pi: MlpCache,
    vf: MlpCache,
}

/// Squashed-normal policy with a separate value network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Policy {
    dim: usize,
    hidden: usize,
    pi: MlpLayout,
    log_std_at: usize,
    vf: MlpLayout,
    /// Every trainable parameter.
    pub theta: Vec<f64>,
}

impl Policy {
    /// Fresh networks: small output weights keep the initial mean near the
    /// cube centre; log-std starts at zero.
    pub fn new<R: Rng + ?Sized>(dim: usize, hidden: usize, rng: &mut R) -> Self {
        let pi = MlpLayout { start: 0, hidden, out: dim };
        let log_std_at = pi.end();
        let vf = MlpLayout {
            start: log_std_at + dim,
            hidden,
            out: 1,
        };
        let mut theta = vec![0.0; vf.end()];
        pi.init(&mut theta, 0.01, rng);
        vf.init(&mut theta, 1.0, rng);
        Policy {
            dim,
            hidden,
            pi,
            log_std_at,
            vf,
            theta,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn n_params(&self) -> usize {
        self.theta.len()
    }

    pub fn log_std(&self) -> &[f64] {
        &self.theta[self.log_std_at..self.log_std_at + self.dim]
    }

    pub fn log_std_mut(&mut self) -> &mut [f64] {
        let at = self.log_std_at;
        &mut self.theta[at..at + self.dim]
    }

    /// Range of the policy-mean network parameters in `theta`.
    pub fn mean_params(&self) -> core::ops::Range<usize> {
        self.pi.start..self.pi.end()
    }

    /// Range of the value network parameters in `theta`.
    pub fn value_params(&self) -> core::ops::Range<usize> {
        self.vf.start..self.vf.end()
    }

    pub fn forward(&self) -> PolicyOutput {
        self.forward_with(&self.theta)
    }

    pub(crate) fn forward_with(&self, theta: &[f64]) -> PolicyOutput {
        let pi = self.pi.forward(theta, OBSERVATION);
        let vf = self.vf.forward(theta, OBSERVATION);
        PolicyOutput {
            mean: pi.out.clone(),
            log_std: theta[self.log_std_at..self.log_std_at + self.dim].to_vec(),
            value: vf.out[0],
            pi,
            vf,
        }
    }

    /// Accumulates the gradient of a loss with the given partials w.r.t. the
    /// mean, log-std and value outputs.
    pub(crate) fn backward(
        &self,
        theta: &[f64],
        out: &PolicyOutput,
        d_mean: &[f64],
        d_log_std: &[f64],
        d_value: f64,
        grad: &mut [f64],
    ) {
        self.pi.backward(theta, &out.pi, d_mean, grad);
        for (g, d) in grad[self.log_std_at..self.log_std_at + self.dim].iter_mut().zip(d_log_std) {
            *g += d;
        }
        self.vf.backward(theta, &out.vf, &[d_value], grad);
    }

    /// Differential entropy of the pre-squash Gaussian.
    pub fn entropy(&self) -> f64 {
        gaussian_entropy(self.log_std())
    }
}

pub(crate) fn gaussian_entropy(log_std: &[f64]) -> f64 {
    log_std.iter().map(|s| s + 0.5 * (LN_2PI + 1.0)).sum()
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

/// `ln sigmoid'(z) = ln s + ln (1 - s)`, stable for large `|z|`.
fn log_sigmoid_derivative(z: f64) -> f64 {
    -libm::fabs(z) - 2.0 * libm::log1p(libm::exp(-libm::fabs(z)))
}

/// Gaussian log-density of the pre-squash sample.
pub fn gaussian_log_prob(z: &[f64], mean: &[f64], log_std: &[f64]) -> f64 {
    z.iter()
        .zip(mean)
        .zip(log_std)
        .map(|((z, m), s)| {
            let t = (z - m) * libm::exp(-s);
            -0.5 * t * t - s - 0.5 * LN_2PI
        })
        .sum()
}

/// Log-density of `u = sigmoid(z)`: the Gaussian term less the squash
/// Jacobian.
pub fn squashed_log_prob(z: &[f64], mean: &[f64], log_std: &[f64]) -> f64 {
    gaussian_log_prob(z, mean, log_std) - z.iter().map(|&z| log_sigmoid_derivative(z)).sum::<f64>()
}

/// A sampled action with everything the update needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Action {
    /// Point in the unit cube.
    pub u: Vec<f64>,
    /// Pre-squash sample.
    pub z: Vec<f64>,
    /// Log-density of `u`, Jacobian included.
    pub log_prob: f64,
    /// Value estimate at sampling time.
    pub value: f64,
}

pub fn sample_action<R: Rng + ?Sized>(policy: &Policy, rng: &mut R) -> Action {
    let out = policy.forward();
    let z: Vec<f64> = out
        .mean
        .iter()
        .zip(&out.log_std)
        .map(|(m, s)| m + libm::exp(*s) * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let u = z.iter().map(|&z| sigmoid(z)).collect();
    Action {
        log_prob: squashed_log_prob(&z, &out.mean, &out.log_std),
        u,
        z,
        value: out.value,
    }
}
