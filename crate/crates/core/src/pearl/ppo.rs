//! Clipped-surrogate policy-gradient update for the single-step bandit.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::policy::{gaussian_entropy, squashed_log_prob, Policy};

/// One completed single-step episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub z: Vec<f64>,
    pub log_prob: f64,
    pub reward: f64,
    pub value: f64,
}

/// Rollout prepared for the loss: standardized rewards serve as returns,
/// advantages subtract the value estimate taken at sampling time.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch {
    pub z: Vec<Vec<f64>>,
    pub old_log_prob: Vec<f64>,
    pub returns: Vec<f64>,
    pub advantages: Vec<f64>,
}

impl Batch {
    pub fn from_rollout(rollout: &[Transition]) -> Self {
        let n = rollout.len() as f64;
        let mean = rollout.iter().map(|t| t.reward).sum::<f64>() / n;
        let var = rollout.iter().map(|t| (t.reward - mean) * (t.reward - mean)).sum::<f64>() / n;
        let std = libm::sqrt(var);
        let returns: Vec<f64> = rollout.iter().map(|t| (t.reward - mean) / (std + 1e-8)).collect();
        Batch {
            z: rollout.iter().map(|t| t.z.clone()).collect(),
            old_log_prob: rollout.iter().map(|t| t.log_prob).collect(),
            advantages: returns.iter().zip(rollout).map(|(r, t)| r - t.value).collect(),
            returns,
        }
    }
}

/// Loss coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossCoefficients {
    pub clip_range: f64,
    pub value_coeff: f64,
    pub entropy_coeff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LossParts {
    pub surrogate: f64,
    pub value: f64,
    pub entropy: f64,
    pub total: f64,
    /// Share of transitions on the clipped branch.
    pub clip_fraction: f64,
}

/// `L = mean(-min(rho A, clip(rho) A)) + c_vf mean((V - R)^2) - c_H H`
/// evaluated at `theta`.
pub fn loss(policy: &Policy, theta: &[f64], batch: &Batch, c: &LossCoefficients) -> LossParts {
    loss_and_grad_impl(policy, theta, batch, c, None)
}

/// Loss and its exact gradient w.r.t. every parameter.
pub fn loss_and_grad(policy: &Policy, theta: &[f64], batch: &Batch, c: &LossCoefficients) -> (LossParts, Vec<f64>) {
    let mut grad = vec![0.0; theta.len()];
    let parts = loss_and_grad_impl(policy, theta, batch, c, Some(&mut grad));
    (parts, grad)
}

fn loss_and_grad_impl(
    policy: &Policy,
    theta: &[f64],
    batch: &Batch,
    c: &LossCoefficients,
    grad: Option<&mut Vec<f64>>,
) -> LossParts {
    let out = policy.forward_with(theta);
    let n = batch.z.len() as f64;
    let d = out.mean.len();
    let inv_std: Vec<f64> = out.log_std.iter().map(|s| libm::exp(-s)).collect();
    let mut surrogate = 0.0;
    let mut clipped = 0usize;
    let mut d_mean = vec![0.0; d];
    let mut d_log_std = vec![0.0; d];
    for ((z, &old), &a) in batch.z.iter().zip(&batch.old_log_prob).zip(&batch.advantages) {
        let lp = squashed_log_prob(z, &out.mean, &out.log_std);
        let ratio = libm::exp(lp - old);
        let bounded = ratio.clamp(1.0 - c.clip_range, 1.0 + c.clip_range);
        let unclipped = ratio * a;
        let limited = bounded * a;
        // the unclipped branch carries the gradient when it is the minimum
        let d_lp = if unclipped <= limited {
            surrogate -= unclipped;
            -a * ratio / n
        } else {
            surrogate -= limited;
            clipped += 1;
            0.0
        };
        if d_lp != 0.0 {
            for k in 0..d {
                let t = (z[k] - out.mean[k]) * inv_std[k];
                d_mean[k] += d_lp * t * inv_std[k];
                d_log_std[k] += d_lp * (t * t - 1.0);
            }
        }
    }
    surrogate /= n;
    let value = batch.returns.iter().map(|r| (out.value - r) * (out.value - r)).sum::<f64>() / n;
    let entropy = gaussian_entropy(&out.log_std);
    if let Some(grad) = grad {
        for g in &mut d_log_std {
            *g -= c.entropy_coeff;
        }
        let d_value = c.value_coeff * 2.0 * batch.returns.iter().map(|r| out.value - r).sum::<f64>() / n;
        policy.backward(theta, &out, &d_mean, &d_log_std, d_value, grad);
    }
    LossParts {
        surrogate,
        value,
        entropy,
        total: surrogate + c.value_coeff * value - c.entropy_coeff * entropy,
        clip_fraction: clipped as f64 / n,
    }
}

/// Rescales `grad` in place so its Euclidean norm is at most `max_norm`.
/// Returns the norm before clipping.
pub fn clip_grad_norm(grad: &mut [f64], max_norm: f64) -> f64 {
    let norm = libm::sqrt(grad.iter().map(|g| g * g).sum());
    if norm > max_norm {
        let s = max_norm / (norm + 1e-6);
        grad.iter_mut().for_each(|g| *g *= s);
    }
    norm
}

/// Adam with bias correction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Adam {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u32,
}

impl Adam {
    pub fn new(n: usize, learning_rate: f64) -> Self {
        Adam {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-5,
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }

    pub fn steps(&self) -> u32 {
        self.t
    }

    pub fn step(&mut self, theta: &mut [f64], grad: &[f64]) {
        self.t += 1;
        let b1t = 1.0 - libm::pow(self.beta1, self.t as f64);
        let b2t = 1.0 - libm::pow(self.beta2, self.t as f64);
        for i in 0..theta.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grad[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grad[i] * grad[i];
            let m_hat = self.m[i] / b1t;
            let v_hat = self.v[i] / b2t;
            theta[i] -= self.learning_rate * m_hat / (libm::sqrt(v_hat) + self.eps);
        }
    }
}

/// What one update did.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpdateStats {
    pub loss: LossParts,
    pub grad_norm: f64,
    pub skipped: bool,
}

/// `epochs` full-batch gradient steps on one rollout. An epoch with a
/// non-finite loss or gradient is skipped and logged.
pub fn ppo_update(
    policy: &mut Policy,
    adam: &mut Adam,
    rollout: &[Transition],
    c: &LossCoefficients,
    max_grad_norm: f64,
    epochs: usize,
) -> UpdateStats {
    let batch = Batch::from_rollout(rollout);
    let mut stats = UpdateStats {
        loss: LossParts::default(),
        grad_norm: 0.0,
        skipped: false,
    };
    for _ in 0..epochs {
        let (parts, mut grad) = loss_and_grad(policy, &policy.theta, &batch, c);
        if !parts.total.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            log::warn!("non-finite policy gradient; update skipped");
            stats.skipped = true;
            stats.loss = parts;
            continue;
        }
        stats.grad_norm = clip_grad_norm(&mut grad, max_grad_norm);
        stats.loss = parts;
        adam.step(&mut policy.theta, &grad);
    }
    stats
}
