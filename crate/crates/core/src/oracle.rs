//! Brute-force enumeration of energies and equilibrium probabilities.
//!
//! For a symmetric network the samplers equilibrate to `P(m) ∝ exp(-E(m))`
//! with `E(m) = -Σ_{i<j} w_ij m_i m_j - Σ_i h_i m_i`; this module computes
//! that distribution exactly for small n and is the ground truth behind the
//! statistical tests. A directed variant evaluates ancestral (parent-to-child)
//! joint distributions in closed form.

use crate::error::{Error, Result};
use crate::network::{validate_order, NetworkSpec, StateVector, MAX_ENUM_BITS};

/// Exact enumeration result: per-configuration energy and probability.
///
/// Configuration `α` is indexed naturally (p-bit 0 is the most significant
/// bit). Configurations that contradict a clamp carry infinite energy and
/// zero probability, so the table is the conditional distribution given the
/// clamps and `probabilities[α] = exp(-energies[α] - log_z)` holds for every
/// entry, including the excluded ones.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyTable {
    pub n: usize,
    pub energies: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub log_z: f64,
}

impl EnergyTable {
    /// Index of the most probable configuration (lowest index wins ties).
    pub fn mode(&self) -> usize {
        let mut best = 0usize;
        for (idx, &p) in self.probabilities.iter().enumerate() {
            if p > self.probabilities[best] {
                best = idx;
            }
        }
        best
    }

    /// Indices of the k most probable configurations, most probable first.
    pub fn top_k(&self, k: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.probabilities.len()).collect();
        idx.sort_by(|&a, &b| {
            self.probabilities[b]
                .partial_cmp(&self.probabilities[a])
                .unwrap()
                .then(a.cmp(&b))
        });
        idx.truncate(k);
        idx
    }
}

/// Pair list (i < j, w) and bias view used by the enumeration loops.
struct PairView {
    pairs: Vec<(usize, usize, f64)>,
    biases: Vec<f64>,
}

impl PairView {
    fn new(spec: &NetworkSpec) -> Self {
        // Symmetric specs store both (i,j) and (j,i); keep each pair once.
        let pairs = spec
            .weights
            .iter()
            .filter(|&&(i, j, _)| i < j)
            .copied()
            .collect();
        PairView {
            pairs,
            biases: spec.biases.clone(),
        }
    }

    fn energy(&self, m: &[i8]) -> f64 {
        let mut e = 0.0;
        for &(i, j, w) in &self.pairs {
            e -= w * f64::from(m[i]) * f64::from(m[j]);
        }
        for (i, &h) in self.biases.iter().enumerate() {
            e -= h * f64::from(m[i]);
        }
        e
    }
}

/// Energy `E(m) = -Σ_{i<j} w_ij m_i m_j - Σ_i h_i m_i` of one configuration.
///
/// Only defined for symmetric networks, where it is the quantity whose
/// Boltzmann distribution the samplers converge to: the conditional flip
/// probability it induces is exactly `(1 + tanh I_i)/2` with
/// `I_i = h_i + Σ_j w_ij m_j`.
pub fn energy(spec: &NetworkSpec, state: &StateVector) -> Result<f64> {
    spec.validate()?;
    if !spec.symmetric {
        return Err(Error::NotSymmetric);
    }
    if state.len() != spec.n {
        return Err(Error::LengthMismatch {
            expected: spec.n,
            got: state.len(),
        });
    }
    Ok(PairView::new(spec).energy(&state.m))
}

/// Writes configuration `config` into `m` (natural order, bit 0 is the MSB).
#[inline]
fn decode_config(config: usize, m: &mut [i8]) {
    let n = m.len();
    for (k, v) in m.iter_mut().enumerate() {
        *v = if (config >> (n - 1 - k)) & 1 == 1 { 1 } else { -1 };
    }
}

/// Enumerates all 2^n configurations of a symmetric network.
///
/// Clamps restrict the distribution to the consistent subspace: excluded
/// configurations get infinite energy and zero probability, and `log_z`
/// normalizes over the consistent ones. Guarded at n ≤ 24.
pub fn enumerate(spec: &NetworkSpec) -> Result<EnergyTable> {
    spec.validate()?;
    if !spec.symmetric {
        return Err(Error::NotSymmetric);
    }
    if spec.n > MAX_ENUM_BITS {
        return Err(Error::TooManyBits {
            n: spec.n,
            max: MAX_ENUM_BITS,
        });
    }
    let view = PairView::new(spec);
    let clamp = spec.clamp_of();
    let size = 1usize << spec.n;
    let mut energies = vec![0.0_f64; size];
    let mut m = vec![0i8; spec.n];
    let mut max_neg_e = f64::NEG_INFINITY;
    for (config, slot) in energies.iter_mut().enumerate() {
        decode_config(config, &mut m);
        let consistent = clamp
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_none_or(|v| m[i] == v));
        if consistent {
            let e = view.energy(&m);
            *slot = e;
            if -e > max_neg_e {
                max_neg_e = -e;
            }
        } else {
            *slot = f64::INFINITY;
        }
    }
    // log-sum-exp over the consistent configurations.
    let sum: f64 = energies
        .iter()
        .filter(|e| e.is_finite())
        .map(|&e| (-e - max_neg_e).exp())
        .sum();
    let log_z = max_neg_e + sum.ln();
    let probabilities = energies.iter().map(|&e| (-e - log_z).exp()).collect();
    Ok(EnergyTable {
        n: spec.n,
        energies,
        probabilities,
        log_z,
    })
}

/// Exact joint distribution of a directed (acyclic) network.
///
/// Each p-bit is distributed given its parents as
/// `P(m_i = +1 | I_i) = (1 + tanh I_i)/2` with `I_i = h_i + Σ_j w_ij m_j`,
/// and the joint is the product over nodes — the distribution reached by
/// updating parents before children. `order` must be a full permutation that
/// places every entry's source before its target; it certifies acyclicity and
/// is not otherwise used. Clamped bits contribute an indicator factor instead
/// (their conditional is a point mass on the clamp value).
pub fn enumerate_directed(spec: &NetworkSpec, order: &[usize]) -> Result<Vec<f64>> {
    spec.validate()?;
    if spec.n > MAX_ENUM_BITS {
        return Err(Error::TooManyBits {
            n: spec.n,
            max: MAX_ENUM_BITS,
        });
    }
    validate_order(order, spec.n)?;
    if order.len() != spec.n {
        return Err(Error::NotAPermutation);
    }
    let mut position = vec![0usize; spec.n];
    for (pos, &i) in order.iter().enumerate() {
        position[i] = pos;
    }
    for &(child, parent, w) in &spec.weights {
        if w != 0.0 && position[parent] >= position[child] {
            return Err(Error::NotTopological { child, parent });
        }
    }
    let rows = spec.rows();
    let clamp = spec.clamp_of();
    let size = 1usize << spec.n;
    let mut probs = vec![0.0_f64; size];
    let mut m = vec![0i8; spec.n];
    for (config, slot) in probs.iter_mut().enumerate() {
        decode_config(config, &mut m);
        let mut p = 1.0_f64;
        for i in 0..spec.n {
            match clamp[i] {
                Some(v) => {
                    if m[i] != v {
                        p = 0.0;
                        break;
                    }
                }
                None => {
                    let mut input = spec.biases[i];
                    for &(j, w) in &rows[i] {
                        input += w * f64::from(m[j]);
                    }
                    p *= 0.5 * (1.0 + f64::from(m[i]) * input.tanh());
                }
            }
        }
        *slot = p;
    }
    Ok(probs)
}

/// `Σ_i p_i ln(p_i / q_i)` with the convention `0 · ln 0 = 0`.
///
/// Errors when `q` vanishes where `p` does not (the divergence is infinite,
/// which for a strictly positive Boltzmann reference signals a bug).
pub fn kl(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    let mut sum = 0.0;
    for (idx, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "negative probability {pi} at config {idx}"
            )));
        }
        if pi == 0.0 {
            continue;
        }
        if qi <= 0.0 {
            return Err(Error::ZeroModelProbability { index: idx });
        }
        sum += pi * (pi / qi).ln();
    }
    Ok(sum)
}

/// KL divergence of an empirical distribution from an exact table.
pub fn kl_divergence(p_empirical: &[f64], table: &EnergyTable) -> Result<f64> {
    kl(p_empirical, &table.probabilities)
}

/// `⟨m_i m_j⟩ = Σ_α P_α m_i(α) m_j(α)` under a distribution over 2^n configs.
pub fn pair_correlation(probs: &[f64], n: usize, i: usize, j: usize) -> Result<f64> {
    if probs.len() != 1usize << n {
        return Err(Error::LengthMismatch {
            expected: 1usize << n,
            got: probs.len(),
        });
    }
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    let mut sum = 0.0;
    for (config, &p) in probs.iter().enumerate() {
        let mi = if (config >> (n - 1 - i)) & 1 == 1 { 1.0 } else { -1.0 };
        let mj = if (config >> (n - 1 - j)) & 1 == 1 { 1.0 } else { -1.0 };
        sum += p * mi * mj;
    }
    Ok(sum)
}

/// `⟨m_i⟩ = Σ_α P_α m_i(α)` under a distribution over 2^n configs.
pub fn magnetization(probs: &[f64], n: usize, i: usize) -> Result<f64> {
    if probs.len() != 1usize << n {
        return Err(Error::LengthMismatch {
            expected: 1usize << n,
            got: probs.len(),
        });
    }
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    let mut sum = 0.0;
    for (config, &p) in probs.iter().enumerate() {
        let mi = if (config >> (n - 1 - i)) & 1 == 1 { 1.0 } else { -1.0 };
        sum += p * mi;
    }
    Ok(sum)
}
