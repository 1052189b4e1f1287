//! Configuration histograms and distances between distributions.

use crate::error::{Error, Result};
use crate::network::{validate_order, MAX_ENUM_BITS};
use crate::sampler::SampleTrace;

/// Occurrence counts over the 2^L configurations of a chosen bit order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    /// counts[idx] = number of snapshots whose configuration index is idx.
    pub counts: Vec<u64>,
    /// Total snapshots counted; equals the sum of `counts`.
    pub total: u64,
}

impl Histogram {
    /// Tallies a trace under a serialization order (most significant first).
    pub fn from_trace(trace: &SampleTrace, order: &[usize]) -> Result<Self> {
        validate_order(order, trace.n_bits())?;
        if order.len() > MAX_ENUM_BITS {
            return Err(Error::TooManyBits {
                n: order.len(),
                max: MAX_ENUM_BITS,
            });
        }
        let mut counts = vec![0u64; 1usize << order.len()];
        for t in 0..trace.len() {
            let mut idx = 0usize;
            for &i in order {
                idx = (idx << 1) | usize::from(trace.bit(t, i) == 1);
            }
            counts[idx] += 1;
        }
        Ok(Histogram {
            counts,
            total: trace.len() as u64,
        })
    }

    /// Adds another histogram of the same shape into this one.
    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.counts.len() != other.counts.len() {
            return Err(Error::LengthMismatch {
                expected: self.counts.len(),
                got: other.counts.len(),
            });
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
        Ok(())
    }

    /// Normalized counts; all zeros when the histogram is empty.
    pub fn probabilities(&self) -> Vec<f64> {
        if self.total == 0 {
            return vec![0.0; self.counts.len()];
        }
        let total = self.total as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }

    /// Index of the most frequent configuration (lowest index wins ties).
    pub fn mode(&self) -> usize {
        let mut best = 0usize;
        for (idx, &c) in self.counts.iter().enumerate() {
            if c > self.counts[best] {
                best = idx;
            }
        }
        best
    }
}

/// Total-variation distance `(1/2) Σ |p_i - q_i|` between two distributions.
pub fn total_variation(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}
