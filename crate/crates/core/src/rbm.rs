//! Bipolar restricted Boltzmann machine: a bipartite network of visible and
//! hidden p-bits trained by contrastive divergence or, for small models, by
//! the exact likelihood gradient.
//!
//! Energy of a joint state is `-Σ_ij W_ij v_i h_j - a·v - b·h`; conditioned
//! on one layer, the other layer's bits are independent with
//! `P(+1) = (1 + tanh(input))/2`, so both Gibbs phases of a training step
//! update a whole layer at once.

use crate::error::{Error, Result};
use crate::network::NetworkSpec;
use crate::rng::uniform_pm1;
use crate::sampler::bsn_update_bipolar;
use rand_chacha::ChaCha8Rng;

/// Weights and biases of a bipolar RBM plus its training hyperparameters.
#[derive(Clone, Debug, PartialEq)]
pub struct RbmSpec {
    pub n_visible: usize,
    pub n_hidden: usize,
    /// Row-major `n_visible × n_hidden` coupling matrix.
    pub weights: Vec<f64>,
    pub visible_bias: Vec<f64>,
    pub hidden_bias: Vec<f64>,
    /// Gibbs half-step pairs per contrastive-divergence update.
    pub cd_steps: usize,
    pub learning_rate: f64,
}

impl RbmSpec {
    /// Zero biases and small uniform random weights in ±`scale`.
    pub fn seeded_init(
        n_visible: usize,
        n_hidden: usize,
        scale: f64,
        rng: &mut ChaCha8Rng,
    ) -> RbmSpec {
        let weights = (0..n_visible * n_hidden)
            .map(|_| scale * uniform_pm1(rng))
            .collect();
        RbmSpec {
            n_visible,
            n_hidden,
            weights,
            visible_bias: vec![0.0; n_visible],
            hidden_bias: vec![0.0; n_hidden],
            cd_steps: 1,
            learning_rate: 0.05,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_visible == 0 || self.n_hidden == 0 {
            return Err(Error::EmptyNetwork);
        }
        if self.weights.len() != self.n_visible * self.n_hidden {
            return Err(Error::LengthMismatch {
                expected: self.n_visible * self.n_hidden,
                got: self.weights.len(),
            });
        }
        if self.visible_bias.len() != self.n_visible {
            return Err(Error::BiasLength {
                expected: self.n_visible,
                got: self.visible_bias.len(),
            });
        }
        if self.hidden_bias.len() != self.n_hidden {
            return Err(Error::BiasLength {
                expected: self.n_hidden,
                got: self.hidden_bias.len(),
            });
        }
        let finite = self
            .weights
            .iter()
            .chain(&self.visible_bias)
            .chain(&self.hidden_bias)
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::NonFinite("RBM parameter".into()));
        }
        if self.cd_steps == 0 {
            return Err(Error::InvalidParameter("cd_steps must be positive".into()));
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::InvalidParameter("learning rate must be positive".into()));
        }
        Ok(())
    }

    /// Synapse input of hidden bit `j` given a visible state.
    pub fn hidden_input(&self, v: &[i8], j: usize) -> f64 {
        let mut acc = self.hidden_bias[j];
        for (i, &vi) in v.iter().enumerate() {
            acc += self.weights[i * self.n_hidden + j] * f64::from(vi);
        }
        acc
    }

    /// Synapse input of visible bit `i` given a hidden state.
    pub fn visible_input(&self, h: &[i8], i: usize) -> f64 {
        let mut acc = self.visible_bias[i];
        for (j, &hj) in h.iter().enumerate() {
            acc += self.weights[i * self.n_hidden + j] * f64::from(hj);
        }
        acc
    }

    /// The RBM as a general symmetric network: visible bits first, hidden
    /// bits after, couplings only across the layers.
    pub fn to_network(&self) -> Result<NetworkSpec> {
        let n = self.n_visible + self.n_hidden;
        let mut weights = Vec::with_capacity(2 * self.weights.len());
        for i in 0..self.n_visible {
            for j in 0..self.n_hidden {
                let w = self.weights[i * self.n_hidden + j];
                if w != 0.0 {
                    weights.push((i, self.n_visible + j, w));
                    weights.push((self.n_visible + j, i, w));
                }
            }
        }
        let biases = self
            .visible_bias
            .iter()
            .chain(&self.hidden_bias)
            .copied()
            .collect();
        let spec = NetworkSpec {
            n,
            weights,
            biases,
            clamps: Vec::new(),
            symmetric: true,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn sample_hidden(rbm: &RbmSpec, v: &[i8], rng: &mut ChaCha8Rng) -> Vec<i8> {
    (0..rbm.n_hidden)
        .map(|j| bsn_update_bipolar(rbm.hidden_input(v, j), uniform_pm1(rng)))
        .collect()
}

fn sample_visible(rbm: &RbmSpec, h: &[i8], rng: &mut ChaCha8Rng) -> Vec<i8> {
    (0..rbm.n_visible)
        .map(|i| bsn_update_bipolar(rbm.visible_input(h, i), uniform_pm1(rng)))
        .collect()
}

/// One contrastive-divergence update over a batch of visible patterns.
///
/// Both the data and reconstruction phases use the analytic hidden mean
/// `tanh(input)` instead of a sampled hidden state when accumulating
/// statistics, which removes one source of sampling noise; the Gibbs chain
/// itself runs on sampled states. Steps every parameter by
/// `learning_rate / batch_len × (positive − negative)` and returns the
/// updated model.
pub fn cd_step(rbm: &RbmSpec, batch: &[Vec<i8>], rng: &mut ChaCha8Rng) -> Result<RbmSpec> {
    rbm.validate()?;
    if batch.is_empty() {
        return Err(Error::InvalidParameter("empty training batch".into()));
    }
    let (nv, nh) = (rbm.n_visible, rbm.n_hidden);
    let mut grad_w = vec![0.0_f64; nv * nh];
    let mut grad_a = vec![0.0_f64; nv];
    let mut grad_b = vec![0.0_f64; nh];
    for v0 in batch {
        if v0.len() != nv {
            return Err(Error::LengthMismatch {
                expected: nv,
                got: v0.len(),
            });
        }
        if v0.iter().any(|&x| x != -1 && x != 1) {
            return Err(Error::InvalidParameter("visible pattern outside ±1".into()));
        }
        // Positive phase: data visible, analytic hidden means.
        let h0_mean: Vec<f64> = (0..nh).map(|j| rbm.hidden_input(v0, j).tanh()).collect();
        for i in 0..nv {
            for j in 0..nh {
                grad_w[i * nh + j] += f64::from(v0[i]) * h0_mean[j];
            }
        }
        for i in 0..nv {
            grad_a[i] += f64::from(v0[i]);
        }
        for j in 0..nh {
            grad_b[j] += h0_mean[j];
        }
        // Negative phase: k sampled Gibbs pairs, then analytic means again.
        let mut h = sample_hidden(rbm, v0, rng);
        let mut v = sample_visible(rbm, &h, rng);
        for _ in 1..rbm.cd_steps {
            h = sample_hidden(rbm, &v, rng);
            v = sample_visible(rbm, &h, rng);
        }
        let hk_mean: Vec<f64> = (0..nh).map(|j| rbm.hidden_input(&v, j).tanh()).collect();
        for i in 0..nv {
            for j in 0..nh {
                grad_w[i * nh + j] -= f64::from(v[i]) * hk_mean[j];
            }
        }
        for i in 0..nv {
            grad_a[i] -= f64::from(v[i]);
        }
        for j in 0..nh {
            grad_b[j] -= hk_mean[j];
        }
    }
    let step = rbm.learning_rate / batch.len() as f64;
    let mut next = rbm.clone();
    for (w, g) in next.weights.iter_mut().zip(&grad_w) {
        *w += step * g;
    }
    for (a, g) in next.visible_bias.iter_mut().zip(&grad_a) {
        *a += step * g;
    }
    for (b, g) in next.hidden_bias.iter_mut().zip(&grad_b) {
        *b += step * g;
    }
    Ok(next)
}

/// One exact likelihood-gradient step against a full distribution over the
/// 2^n_visible visible configurations (most significant bit = visible 0).
///
/// The model term marginalizes the hidden layer analytically, so this is the
/// zero-noise limit of [`cd_step`]; returns the updated model and the
/// infinity norm of the gradient (before the learning rate), which vanishes
/// exactly when the model's visible marginal equals the data distribution.
pub fn exact_gradient_step(rbm: &RbmSpec, data_dist: &[f64]) -> Result<(RbmSpec, f64)> {
    rbm.validate()?;
    let (nv, nh) = (rbm.n_visible, rbm.n_hidden);
    if nv > 20 {
        return Err(Error::TooManyBits { n: nv, max: 20 });
    }
    if data_dist.len() != 1usize << nv {
        return Err(Error::LengthMismatch {
            expected: 1usize << nv,
            got: data_dist.len(),
        });
    }
    let model = visible_marginal(rbm)?;
    let mut grad_w = vec![0.0_f64; nv * nh];
    let mut grad_a = vec![0.0_f64; nv];
    let mut grad_b = vec![0.0_f64; nh];
    let mut v = vec![0i8; nv];
    for alpha in 0..1usize << nv {
        let weight = data_dist[alpha] - model[alpha];
        if weight == 0.0 {
            continue;
        }
        decode_visible(alpha, &mut v);
        for (j, gb) in grad_b.iter_mut().enumerate() {
            let t = rbm.hidden_input(&v, j).tanh();
            *gb += weight * t;
            for i in 0..nv {
                grad_w[i * nh + j] += weight * f64::from(v[i]) * t;
            }
        }
        for i in 0..nv {
            grad_a[i] += weight * f64::from(v[i]);
        }
    }
    let norm = grad_w
        .iter()
        .chain(&grad_a)
        .chain(&grad_b)
        .fold(0.0_f64, |acc, g| acc.max(g.abs()));
    let mut next = rbm.clone();
    for (w, g) in next.weights.iter_mut().zip(&grad_w) {
        *w += rbm.learning_rate * g;
    }
    for (a, g) in next.visible_bias.iter_mut().zip(&grad_a) {
        *a += rbm.learning_rate * g;
    }
    for (b, g) in next.hidden_bias.iter_mut().zip(&grad_b) {
        *b += rbm.learning_rate * g;
    }
    Ok((next, norm))
}

fn decode_visible(alpha: usize, v: &mut [i8]) {
    let nv = v.len();
    for (k, slot) in v.iter_mut().enumerate() {
        *slot = if (alpha >> (nv - 1 - k)) & 1 == 1 { 1 } else { -1 };
    }
}

/// Exact marginal distribution over visible configurations, with the hidden
/// layer summed out in closed form:
/// `log weight(v) = a·v + Σ_j ln 2cosh(b_j + Σ_i W_ij v_i)`.
pub fn visible_marginal(rbm: &RbmSpec) -> Result<Vec<f64>> {
    rbm.validate()?;
    let nv = rbm.n_visible;
    if nv > 20 {
        return Err(Error::TooManyBits { n: nv, max: 20 });
    }
    let mut log_w = vec![0.0_f64; 1usize << nv];
    let mut v = vec![0i8; nv];
    let mut max_lw = f64::NEG_INFINITY;
    for (alpha, lw) in log_w.iter_mut().enumerate() {
        decode_visible(alpha, &mut v);
        let mut acc = 0.0;
        for (i, &vi) in v.iter().enumerate() {
            acc += rbm.visible_bias[i] * f64::from(vi);
        }
        for j in 0..rbm.n_hidden {
            let x = rbm.hidden_input(&v, j);
            // ln 2cosh(x), stable for large |x|.
            acc += x.abs() + (-2.0 * x.abs()).exp().ln_1p();
        }
        *lw = acc;
        max_lw = max_lw.max(acc);
    }
    let mut total = 0.0;
    let mut probs: Vec<f64> = log_w.iter().map(|lw| (lw - max_lw).exp()).collect();
    for p in &probs {
        total += p;
    }
    for p in &mut probs {
        *p /= total;
    }
    Ok(probs)
}

/// Exact joint distribution over `[visible..., hidden...]` configurations
/// (most significant bit = visible 0).
pub fn joint_distribution(rbm: &RbmSpec) -> Result<Vec<f64>> {
    rbm.validate()?;
    let n = rbm.n_visible + rbm.n_hidden;
    if n > 24 {
        return Err(Error::TooManyBits { n, max: 24 });
    }
    Ok(crate::oracle::enumerate(&rbm.to_network()?)?.probabilities)
}

/// The six 2×2 bars-and-stripes patterns as bipolar visible vectors, pixel
/// order row-major: both rows solid, both columns solid, all-dark, all-light.
pub fn bars_and_stripes_2x2() -> Vec<Vec<i8>> {
    vec![
        vec![-1, -1, -1, -1],
        vec![1, 1, 1, 1],
        vec![-1, -1, 1, 1],
        vec![1, 1, -1, -1],
        vec![-1, 1, -1, 1],
        vec![1, -1, 1, -1],
    ]
}

/// Empirical distribution of a batch over the 2^n_visible configurations.
pub fn data_distribution(batch: &[Vec<i8>], n_visible: usize) -> Result<Vec<f64>> {
    if batch.is_empty() {
        return Err(Error::InvalidParameter("empty training batch".into()));
    }
    if n_visible > 20 {
        return Err(Error::TooManyBits { n: n_visible, max: 20 });
    }
    let mut dist = vec![0.0_f64; 1usize << n_visible];
    for v in batch {
        if v.len() != n_visible {
            return Err(Error::LengthMismatch {
                expected: n_visible,
                got: v.len(),
            });
        }
        let mut idx = 0usize;
        for &x in v {
            if x != -1 && x != 1 {
                return Err(Error::InvalidParameter("visible pattern outside ±1".into()));
            }
            idx = (idx << 1) | usize::from(x == 1);
        }
        dist[idx] += 1.0 / batch.len() as f64;
    }
    Ok(dist)
}
