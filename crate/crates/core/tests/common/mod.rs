//! Shared fixtures and independent reference implementations for the
//! integration suites.
//!
//! Where a second opinion matters, the helpers here recompute results from
//! scratch instead of calling the code paths they are meant to check: the
//! dense stationary-law reference walks every configuration with its own
//! energy sum, and the thermal spin oracle diagonalizes the quantum
//! Hamiltonian directly with `nalgebra`.
#![allow(dead_code)]

use nalgebra::DMatrix;
use pbit_core::NetworkSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Every randomized check in the integration suites derives its seeds from
/// this one value, so a single rerun of the binary reproduces everything.
pub const MASTER_SEED: u64 = 20_260_823;

/// Fully connected symmetric network on `n` bits: every pair weight and every
/// bias drawn uniform from [-1, 1).
pub fn random_symmetric_spec(n: usize, seed: u64) -> NetworkSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let w: f64 = rng.random_range(-1.0..1.0);
            weights.push((i, j, w));
            weights.push((j, i, w));
        }
    }
    let biases = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    NetworkSpec::new(n, weights, biases, vec![], true).unwrap()
}

/// Stationary probabilities recomputed from first principles:
/// `P(α) ∝ exp(Σ_{i<j} w_ij m_i m_j + Σ_i h_i m_i)` over all configurations,
/// with clamp-violating configurations assigned zero mass. Configuration
/// indices read bit 0 as the most significant bit.
pub fn dense_reference_probabilities(spec: &NetworkSpec) -> Vec<f64> {
    let n = spec.n;
    let size = 1usize << n;
    // `NetworkSpec` stores each symmetric weight in both directions; fold onto the
    // upper triangle so each pair contributes once.
    let mut upper = vec![0.0_f64; n * n];
    for &(i, j, w) in &spec.weights {
        if i < j {
            upper[i * n + j] = w;
        }
    }
    let mut log_weight = vec![f64::NEG_INFINITY; size];
    for (alpha, slot) in log_weight.iter_mut().enumerate() {
        let m: Vec<f64> = (0..n)
            .map(|k| if (alpha >> (n - 1 - k)) & 1 == 1 { 1.0 } else { -1.0 })
            .collect();
        if spec
            .clamps
            .iter()
            .any(|&(i, v)| m[i] != f64::from(v))
        {
            continue; // stays at -inf: zero probability
        }
        let mut e = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                e += upper[i * n + j] * m[i] * m[j];
            }
        }
        for (i, &h) in spec.biases.iter().enumerate() {
            e += h * m[i];
        }
        *slot = e;
    }
    let peak = log_weight.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let unnorm: Vec<f64> = log_weight.iter().map(|&lw| (lw - peak).exp()).collect();
    let z: f64 = unnorm.iter().sum();
    unnorm.iter().map(|&u| u / z).collect()
}

/// Two-sample chi-square homogeneity p-value for a pair of histograms.
///
/// Uses the statistic `Σ (√(N₂/N₁)·aᵢ − √(N₁/N₂)·bᵢ)² / (aᵢ + bᵢ)` over bins
/// with any counts, with one degree of freedom fewer than the number of
/// occupied bins. Large p-values mean the two histograms are consistent with
/// one underlying distribution.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> f64 {
    assert_eq!(a.len(), b.len(), "histograms must share binning");
    let n1: u64 = a.iter().sum();
    let n2: u64 = b.iter().sum();
    assert!(n1 > 0 && n2 > 0, "both histograms must be populated");
    let k1 = (n2 as f64 / n1 as f64).sqrt();
    let k2 = (n1 as f64 / n2 as f64).sqrt();
    let mut stat = 0.0;
    let mut used = 0usize;
    for (&ca, &cb) in a.iter().zip(b) {
        let total = ca + cb;
        if total == 0 {
            continue;
        }
        used += 1;
        let d = k1 * ca as f64 - k2 * cb as f64;
        stat += d * d / total as f64;
    }
    assert!(used > 1, "need at least two occupied bins");
    let dist = ChiSquared::new((used - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}

/// Thermal expectation of a transverse-field spin model computed by direct
/// dense diagonalization — independent of the replica construction it is
/// used to check.
///
/// The Hamiltonian is `H = −Σ J_ij σz_i σz_j − Σ h_i σz_i − Γ Σ σx_i` on
/// `n` spins; `diag` gives the observable's value on each z-basis state
/// (basis index `b` holds spin `i` up when bit `i` of `b` is set).
pub fn thermal_diagonal_expectation(
    n: usize,
    couplings: &[(usize, usize, f64)],
    h: &[f64],
    gamma: f64,
    beta: f64,
    diag: &[f64],
) -> f64 {
    let size = 1usize << n;
    assert_eq!(diag.len(), size);
    let sz = |b: usize, i: usize| if (b >> i) & 1 == 1 { 1.0 } else { -1.0 };
    let mut ham = DMatrix::<f64>::zeros(size, size);
    for b in 0..size {
        let mut e = 0.0;
        for &(i, j, w) in couplings {
            e -= w * sz(b, i) * sz(b, j);
        }
        for (i, &hz) in h.iter().enumerate() {
            e -= hz * sz(b, i);
        }
        ham[(b, b)] = e;
        for i in 0..n {
            ham[(b, b ^ (1 << i))] -= gamma;
        }
    }
    let eig = ham.symmetric_eigen();
    let ground = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut z = 0.0;
    let mut acc = 0.0;
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let w = (-beta * (lambda - ground)).exp();
        let col = eig.eigenvectors.column(k);
        let val: f64 = (0..size).map(|b| diag[b] * col[b] * col[b]).sum();
        z += w;
        acc += w * val;
    }
    acc / z
}

/// Thermal `⟨σz_a σz_b⟩` via [`thermal_diagonal_expectation`].
pub fn thermal_zz(
    n: usize,
    couplings: &[(usize, usize, f64)],
    h: &[f64],
    gamma: f64,
    beta: f64,
    a: usize,
    b: usize,
) -> f64 {
    let size = 1usize << n;
    let sz = |s: usize, i: usize| if (s >> i) & 1 == 1 { 1.0 } else { -1.0 };
    let diag: Vec<f64> = (0..size).map(|s| sz(s, a) * sz(s, b)).collect();
    thermal_diagonal_expectation(n, couplings, h, gamma, beta, &diag)
}

/// Thermal `⟨σz_a⟩` via [`thermal_diagonal_expectation`].
pub fn thermal_sz(
    n: usize,
    couplings: &[(usize, usize, f64)],
    h: &[f64],
    gamma: f64,
    beta: f64,
    a: usize,
) -> f64 {
    let size = 1usize << n;
    let sz = |s: usize, i: usize| if (s >> i) & 1 == 1 { 1.0 } else { -1.0 };
    let diag: Vec<f64> = (0..size).map(|s| sz(s, a)).collect();
    thermal_diagonal_expectation(n, couplings, h, gamma, beta, &diag)
}

/// Canonical byte-exact rendering of a count vector for rerun comparisons.
pub fn fingerprint_counts(counts: &[u64]) -> String {
    counts
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Canonical byte-exact rendering of floats (hex of the IEEE-754 bits, so
/// equality means bit-for-bit identical numbers, not just close ones).
pub fn fingerprint_f64s(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{:016x}", v.to_bits()))
        .collect::<Vec<_>>()
        .join(",")
}
