//! Network data model: weighted p-bit graph, bipolar states, and index maps.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on operations that materialize all 2^n configurations.
pub const MAX_ENUM_BITS: usize = 24;

/// Immutable description of a p-bit network.
///
/// `weights` holds sparse entries `(i, j, w)` meaning p-bit `j` feeds p-bit `i`
/// with strength `w`; row `i` of the implied matrix is the input fan-in of
/// p-bit `i`, so the synapse input is `I_i = h_i + Σ_j w_ij m_j`. Biases are
/// equivalent to couplings from a virtual always-+1 p-bit (see
/// [`NetworkSpec::augmented_bias_form`]).
///
/// When `symmetric` is set the entries must form a symmetric zero-diagonal
/// matrix, and sampling equilibrates to the Boltzmann distribution
/// `P(m) ∝ exp(Σ_{i<j} w_ij m_i m_j + Σ_i h_i m_i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    /// Number of p-bits.
    pub n: usize,
    /// Sparse weight entries `(i, j, w_ij)`.
    pub weights: Vec<(usize, usize, f64)>,
    /// Per-p-bit bias `h_i`, length `n`.
    pub biases: Vec<f64>,
    /// Pinned p-bits as `(index, -1 | +1)`; clamped bits are never updated.
    pub clamps: Vec<(usize, i8)>,
    /// Asserts the weight matrix is symmetric with a zero diagonal.
    pub symmetric: bool,
}

impl NetworkSpec {
    /// Builds and validates a spec in one step.
    pub fn new(
        n: usize,
        weights: Vec<(usize, usize, f64)>,
        biases: Vec<f64>,
        clamps: Vec<(usize, i8)>,
        symmetric: bool,
    ) -> Result<Self> {
        let spec = NetworkSpec {
            n,
            weights,
            biases,
            clamps,
            symmetric,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// A symmetric spec from a dense matrix; only the upper triangle (`i < j`)
    /// of `w` is read and exact zeros are dropped. `w` is row-major `n × n`.
    ///
    /// Entries are emitted in a canonical order ((i,j) then (j,i), ascending),
    /// so two specs built from equal dense data compare equal.
    pub fn from_dense_symmetric(
        n: usize,
        w: &[f64],
        biases: Vec<f64>,
        clamps: Vec<(usize, i8)>,
    ) -> Result<Self> {
        if w.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "dense weight matrix has {} entries, expected {}",
                w.len(),
                n * n
            )));
        }
        let mut weights = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = w[i * n + j];
                if v != 0.0 {
                    weights.push((i, j, v));
                    weights.push((j, i, v));
                }
            }
        }
        Self::new(n, weights, biases, clamps, true)
    }

    /// Checks every structural invariant; returns the first violation found.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::EmptyNetwork);
        }
        if self.biases.len() != self.n {
            return Err(Error::BiasLength {
                expected: self.n,
                got: self.biases.len(),
            });
        }
        for (idx, b) in self.biases.iter().enumerate() {
            if !b.is_finite() {
                return Err(Error::NonFinite(format!("bias {idx}")));
            }
        }
        let mut seen: HashMap<(usize, usize), f64> = HashMap::new();
        for &(i, j, w) in &self.weights {
            if i >= self.n {
                return Err(Error::IndexOutOfRange { index: i, n: self.n });
            }
            if j >= self.n {
                return Err(Error::IndexOutOfRange { index: j, n: self.n });
            }
            if !w.is_finite() {
                return Err(Error::NonFinite(format!("weight ({i}, {j})")));
            }
            if seen.insert((i, j), w).is_some() {
                return Err(Error::DuplicateWeight { i, j });
            }
        }
        if self.symmetric {
            for &(i, j, w) in &self.weights {
                if i == j {
                    return Err(Error::DiagonalWeight { i });
                }
                let mirror = seen.get(&(j, i)).copied().unwrap_or(0.0);
                if mirror != w {
                    return Err(Error::AsymmetricWeight {
                        i,
                        j,
                        w_ij: w,
                        w_ji: mirror,
                    });
                }
            }
        }
        let mut clamp_seen = vec![false; self.n];
        for &(i, v) in &self.clamps {
            if i >= self.n {
                return Err(Error::IndexOutOfRange { index: i, n: self.n });
            }
            if v != -1 && v != 1 {
                return Err(Error::BadClampValue { index: i, value: v });
            }
            if clamp_seen[i] {
                return Err(Error::DuplicateClamp { index: i });
            }
            clamp_seen[i] = true;
        }
        Ok(())
    }

    /// Fan-in adjacency: `rows()[i]` lists `(j, w_ij)` feeding p-bit `i`.
    pub fn rows(&self) -> Vec<Vec<(usize, f64)>> {
        let mut rows = vec![Vec::new(); self.n];
        for &(i, j, w) in &self.weights {
            rows[i].push((j, w));
        }
        rows
    }

    /// Clamp lookup by index: `None` for free bits.
    pub fn clamp_of(&self) -> Vec<Option<i8>> {
        let mut map = vec![None; self.n];
        for &(i, v) in &self.clamps {
            map[i] = Some(v);
        }
        map
    }

    /// Indices that are not clamped, in ascending order.
    pub fn free_indices(&self) -> Vec<usize> {
        let clamp = self.clamp_of();
        (0..self.n).filter(|&i| clamp[i].is_none()).collect()
    }

    /// Same topology with every weight and bias multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> NetworkSpec {
        NetworkSpec {
            n: self.n,
            weights: self
                .weights
                .iter()
                .map(|&(i, j, w)| (i, j, w * factor))
                .collect(),
            biases: self.biases.iter().map(|h| h * factor).collect(),
            clamps: self.clamps.clone(),
            symmetric: self.symmetric,
        }
    }

    /// Same network with the clamp list replaced wholesale.
    pub fn with_clamps(&self, clamps: Vec<(usize, i8)>) -> Result<NetworkSpec> {
        let spec = NetworkSpec {
            clamps,
            ..self.clone()
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Rewrites every bias as a coupling to a new always-+1 p-bit at index `n`.
    ///
    /// The result has `n + 1` p-bits, all-zero biases, and the extra bit
    /// clamped to +1; its energies match the original exactly, which is the
    /// sense in which a bias "is" a weight from a virtual +1 unit.
    pub fn augmented_bias_form(&self) -> NetworkSpec {
        let aug = self.n;
        let mut weights = self.weights.clone();
        for (i, &h) in self.biases.iter().enumerate() {
            if h != 0.0 {
                weights.push((i, aug, h));
                weights.push((aug, i, h));
            }
        }
        let mut clamps = self.clamps.clone();
        clamps.push((aug, 1));
        NetworkSpec {
            n: self.n + 1,
            weights,
            biases: vec![0.0; self.n + 1],
            clamps,
            symmetric: self.symmetric,
        }
    }

    /// Largest row sum of |w_ij|; the scale against which a bias must win.
    pub fn max_abs_row_sum(&self) -> f64 {
        let mut sums = vec![0.0_f64; self.n];
        for &(i, _, w) in &self.weights {
            sums[i] += w.abs();
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Replaces hard clamps with large biases (soft clamping).
    ///
    /// Each clamp `(i, v)` becomes an extra bias `v * 2 * max_abs_row_sum()`,
    /// and the clamp list is emptied so every bit keeps fluctuating. The
    /// distribution conditioned on the clamp event is identical to the
    /// hard-clamped distribution (an on-site bias is constant within that
    /// event); the large magnitude just concentrates mass on it.
    pub fn soft_clamped(&self) -> NetworkSpec {
        let magnitude = 2.0 * self.max_abs_row_sum();
        let mut biases = self.biases.clone();
        for &(i, v) in &self.clamps {
            biases[i] += f64::from(v) * magnitude;
        }
        NetworkSpec {
            n: self.n,
            weights: self.weights.clone(),
            biases,
            clamps: Vec::new(),
            symmetric: self.symmetric,
        }
    }
}

/// A bipolar configuration m ∈ {-1, +1}^n plus an update counter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVector {
    /// Bipolar values, each exactly -1 or +1.
    pub m: Vec<i8>,
    /// Number of updates applied to reach this state.
    pub epoch: u64,
}

impl StateVector {
    /// Wraps a bipolar vector, rejecting anything that is not ±1.
    pub fn new(m: Vec<i8>) -> Result<Self> {
        for &v in &m {
            if v != -1 && v != 1 {
                return Err(Error::InvalidParameter(format!(
                    "state element {v} is not -1 or +1"
                )));
            }
        }
        Ok(StateVector { m, epoch: 0 })
    }

    /// All bits set to the same value.
    pub fn filled(n: usize, value: i8) -> Result<Self> {
        Self::new(vec![value; n])
    }

    /// Each bit an independent fair coin.
    pub fn uniform_random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let m = (0..n)
            .map(|_| if rng.random::<bool>() { 1 } else { -1 })
            .collect();
        StateVector { m, epoch: 0 }
    }

    /// Inverse of [`state_index`] under the natural order: bit 0 is the most
    /// significant bit of `config`.
    pub fn from_config_index(n: usize, config: usize) -> Result<Self> {
        if n > MAX_ENUM_BITS {
            return Err(Error::TooManyBits {
                n,
                max: MAX_ENUM_BITS,
            });
        }
        if config >= (1usize << n) {
            return Err(Error::IndexOutOfRange {
                index: config,
                n: 1usize << n,
            });
        }
        let m = (0..n)
            .map(|k| if (config >> (n - 1 - k)) & 1 == 1 { 1 } else { -1 })
            .collect();
        Ok(StateVector { m, epoch: 0 })
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    /// Overwrites clamped positions with their clamp values.
    pub fn apply_clamps(&mut self, spec: &NetworkSpec) {
        for &(i, v) in &spec.clamps {
            self.m[i] = v;
        }
    }

    /// True when every clamped position holds its clamp value.
    pub fn satisfies_clamps(&self, spec: &NetworkSpec) -> bool {
        spec.clamps.iter().all(|&(i, v)| self.m[i] == v)
    }
}

/// The identity serialization order `[0, 1, .., n-1]`.
pub fn natural_order(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Decimal index of a configuration under a serialization order.
///
/// Maps -1/+1 to binary 0/1 and reads `order` most-significant-bit first:
/// the result is `Σ_k bit(order[k]) · 2^(L-1-k)` where `L = order.len()`.
/// `order` may cover any subset of the p-bits but must not repeat an index.
pub fn state_index(state: &StateVector, order: &[usize]) -> Result<usize> {
    validate_order(order, state.len())?;
    let mut idx = 0usize;
    for &i in order {
        idx = (idx << 1) | usize::from(state.m[i] == 1);
    }
    Ok(idx)
}

/// Rejects orders with repeats, out-of-range entries, or more than 63 bits.
pub fn validate_order(order: &[usize], n: usize) -> Result<()> {
    if order.len() > 63 {
        return Err(Error::TooManyBits {
            n: order.len(),
            max: 63,
        });
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n {
            return Err(Error::NotAPermutation);
        }
        if seen[i] {
            return Err(Error::NotAPermutation);
        }
        seen[i] = true;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_bit_ferromagnet() -> NetworkSpec {
        NetworkSpec::new(
            2,
            vec![(0, 1, 1.0), (1, 0, 1.0)],
            vec![0.0, 0.0],
            vec![],
            true,
        )
        .unwrap()
    }

    #[test]
    fn validation_accepts_a_plain_spec() {
        two_bit_ferromagnet();
    }

    #[test]
    fn validation_rejects_empty_network() {
        let err = NetworkSpec::new(0, vec![], vec![], vec![], true).unwrap_err();
        assert!(matches!(err, Error::EmptyNetwork));
    }

    #[test]
    fn validation_rejects_out_of_range_weight_index() {
        let err = NetworkSpec::new(2, vec![(0, 2, 1.0)], vec![0.0; 2], vec![], false).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { index: 2, n: 2 }));
    }

    #[test]
    fn validation_rejects_duplicate_weight_entries() {
        let err = NetworkSpec::new(
            2,
            vec![(0, 1, 1.0), (0, 1, 2.0)],
            vec![0.0; 2],
            vec![],
            false,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateWeight { i: 0, j: 1 }));
    }

    #[test]
    fn validation_names_both_values_of_an_asymmetric_pair() {
        let err = NetworkSpec::new(
            2,
            vec![(0, 1, 1.0), (1, 0, 0.5)],
            vec![0.0; 2],
            vec![],
            true,
        )
        .unwrap_err();
        match err {
            Error::AsymmetricWeight { w_ij, w_ji, .. } => {
                let mut pair = [w_ij, w_ji];
                pair.sort_by(f64::total_cmp);
                assert_eq!(pair, [0.5, 1.0]);
            }
            other => panic!("expected AsymmetricWeight, got {other:?}"),
        }
    }

    #[test]
    fn validation_rejects_one_sided_symmetric_entry() {
        let err =
            NetworkSpec::new(2, vec![(0, 1, 1.0)], vec![0.0; 2], vec![], true).unwrap_err();
        assert!(matches!(
            err,
            Error::AsymmetricWeight { w_ji, .. } if w_ji == 0.0
        ));
    }

    #[test]
    fn validation_rejects_symmetric_diagonal() {
        let err = NetworkSpec::new(1, vec![(0, 0, 1.0)], vec![0.0], vec![], true).unwrap_err();
        assert!(matches!(err, Error::DiagonalWeight { i: 0 }));
    }

    #[test]
    fn validation_rejects_bad_clamp_values_and_duplicates() {
        let err = NetworkSpec::new(1, vec![], vec![0.0], vec![(0, 2)], false).unwrap_err();
        assert!(matches!(err, Error::BadClampValue { index: 0, value: 2 }));
        let err =
            NetworkSpec::new(1, vec![], vec![0.0], vec![(0, 1), (0, 1)], false).unwrap_err();
        assert!(matches!(err, Error::DuplicateClamp { index: 0 }));
    }

    #[test]
    fn validation_rejects_non_finite_values() {
        let err =
            NetworkSpec::new(1, vec![], vec![f64::NAN], vec![], false).unwrap_err();
        assert!(matches!(err, Error::NonFinite(_)));
        let err = NetworkSpec::new(
            2,
            vec![(0, 1, f64::INFINITY)],
            vec![0.0; 2],
            vec![],
            false,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonFinite(_)));
    }

    #[test]
    fn rows_collect_fan_in_per_p_bit() {
        let spec = NetworkSpec::new(
            3,
            vec![(0, 1, 0.5), (0, 2, -0.25), (2, 0, 4.0)],
            vec![0.0; 3],
            vec![],
            false,
        )
        .unwrap();
        let rows = spec.rows();
        assert_eq!(rows[0], vec![(1, 0.5), (2, -0.25)]);
        assert!(rows[1].is_empty());
        assert_eq!(rows[2], vec![(0, 4.0)]);
    }

    #[test]
    fn free_indices_skip_clamped_bits() {
        let spec = NetworkSpec::new(3, vec![], vec![0.0; 3], vec![(1, -1)], false).unwrap();
        assert_eq!(spec.free_indices(), vec![0, 2]);
    }

    #[test]
    fn from_dense_round_trips_through_canonical_entries() {
        let spec = two_bit_ferromagnet();
        let dense = [0.0, 1.0, 1.0, 0.0];
        let rebuilt =
            NetworkSpec::from_dense_symmetric(2, &dense, vec![0.0; 2], vec![]).unwrap();
        assert_eq!(spec, rebuilt);
    }

    #[test]
    fn soft_clamp_moves_clamps_into_biases() {
        let spec = NetworkSpec::new(
            2,
            vec![(0, 1, 1.5), (1, 0, 1.5)],
            vec![0.0, 0.25],
            vec![(0, -1)],
            true,
        )
        .unwrap();
        let soft = spec.soft_clamped();
        assert!(soft.clamps.is_empty());
        assert_eq!(soft.biases[0], -3.0); // 2 * max row sum of |W| = 3.0
        assert_eq!(soft.biases[1], 0.25);
    }

    #[test]
    fn state_vector_rejects_non_bipolar_values() {
        assert!(StateVector::new(vec![1, 0]).is_err());
        assert!(StateVector::new(vec![1, -1]).is_ok());
    }

    #[test]
    fn all_ones_five_bits_index_to_31_and_all_minus_to_0() {
        let up = StateVector::filled(5, 1).unwrap();
        let down = StateVector::filled(5, -1).unwrap();
        let order = natural_order(5);
        assert_eq!(state_index(&up, &order).unwrap(), 31);
        assert_eq!(state_index(&down, &order).unwrap(), 0);
    }

    #[test]
    fn gate_style_labeling_places_00100_at_index_4() {
        // Order [A, B, X, C, D] with only the third bit high: binary 00100.
        let state = StateVector::new(vec![-1, -1, 1, -1, -1]).unwrap();
        assert_eq!(state_index(&state, &natural_order(5)).unwrap(), 4);
    }

    #[test]
    fn state_index_rejects_duplicates_and_out_of_range() {
        let state = StateVector::filled(3, 1).unwrap();
        assert!(matches!(
            state_index(&state, &[0, 0]),
            Err(Error::NotAPermutation)
        ));
        assert!(matches!(
            state_index(&state, &[3]),
            Err(Error::NotAPermutation)
        ));
    }

    #[test]
    fn augmented_bias_form_moves_biases_to_a_clamped_extra_bit() {
        let spec = NetworkSpec::new(
            2,
            vec![(0, 1, 1.0), (1, 0, 1.0)],
            vec![0.5, -0.25],
            vec![],
            true,
        )
        .unwrap();
        let aug = spec.augmented_bias_form();
        aug.validate().unwrap();
        assert_eq!(aug.n, 3);
        assert!(aug.biases.iter().all(|&h| h == 0.0));
        assert_eq!(aug.clamps, vec![(2, 1)]);
        assert!(aug.weights.contains(&(0, 2, 0.5)));
        assert!(aug.weights.contains(&(2, 1, -0.25)));
    }

    proptest! {
        #[test]
        fn config_index_round_trips(n in 1usize..12, bits in proptest::collection::vec(proptest::bool::ANY, 12)) {
            let m: Vec<i8> = bits.iter().take(n).map(|&b| if b { 1 } else { -1 }).collect();
            let state = StateVector::new(m).unwrap();
            let idx = state_index(&state, &natural_order(n)).unwrap();
            let back = StateVector::from_config_index(n, idx).unwrap();
            prop_assert_eq!(back.m, state.m);
        }

        #[test]
        fn scaling_multiplies_every_weight_and_bias(factor in -3.0f64..3.0) {
            let spec = NetworkSpec::new(
                2,
                vec![(0, 1, 1.25), (1, 0, 1.25)],
                vec![0.5, -1.0],
                vec![],
                true,
            ).unwrap();
            let scaled = spec.scaled(factor);
            prop_assert_eq!(scaled.weights[0].2, 1.25 * factor);
            prop_assert_eq!(scaled.biases[1], -1.0 * factor);
        }
    }
}
