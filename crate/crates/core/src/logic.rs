//! Invertible logic: synthesize a symmetric network whose equilibrium
//! distribution peaks on the rows of a truth table.
//!
//! The synthesized network carries one extra always-+1 "handle" bit whose
//! couplings realize effective biases. Because the gate is an energy model
//! rather than a circuit, it runs in any direction: clamp the inputs and the
//! outputs settle (direct mode), clamp outputs and the inputs fluctuate over
//! the consistent assignments (inverse mode), or clamp nothing and the chain
//! visits all table rows.

use crate::error::{Error, Result};
use crate::hist::Histogram;
use crate::network::{natural_order, NetworkSpec};
use crate::oracle::enumerate;
use crate::sampler::{run_chain, RecordPolicy, UpdateSchedule};

/// A complete bipolar truth table over named bits.
///
/// `labels` orders the bits for decimal indexing (first label is the most
/// significant); rows list full assignments over inputs then outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    pub input_bits: usize,
    pub output_bits: usize,
    pub rows: Vec<Vec<i8>>,
    pub labels: Vec<String>,
}

impl TruthTable {
    pub fn n_bits(&self) -> usize {
        self.input_bits + self.output_bits
    }

    /// The three-gate table over [A, B, XNOR, AND, OR]: one row per input
    /// pair, with all three functions as output columns. Its rows sit at
    /// configuration indices 4, 9, 17, and 31.
    pub fn and_or_xnor() -> TruthTable {
        TruthTable {
            input_bits: 2,
            output_bits: 3,
            rows: vec![
                vec![-1, -1, 1, -1, -1],
                vec![-1, 1, -1, -1, 1],
                vec![1, -1, -1, -1, 1],
                vec![1, 1, 1, 1, 1],
            ],
            labels: ["A", "B", "XNOR", "AND", "OR"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_bits();
        if n == 0 {
            return Err(Error::BadTruthTable("table has no bits".into()));
        }
        if self.labels.len() != n {
            return Err(Error::BadTruthTable(format!(
                "{} labels for {} bits",
                self.labels.len(),
                n
            )));
        }
        for (i, a) in self.labels.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::BadTruthTable("empty bit label".into()));
            }
            if self.labels[..i].contains(a) {
                return Err(Error::BadTruthTable(format!("duplicate label {a}")));
            }
        }
        if self.rows.len() != 1usize << self.input_bits {
            return Err(Error::BadTruthTable(format!(
                "{} rows for {} input bits",
                self.rows.len(),
                self.input_bits
            )));
        }
        let mut seen_inputs = vec![false; 1usize << self.input_bits];
        for row in &self.rows {
            if row.len() != n {
                return Err(Error::BadTruthTable(format!(
                    "row length {} does not match {} bits",
                    row.len(),
                    n
                )));
            }
            if row.iter().any(|&v| v != -1 && v != 1) {
                return Err(Error::BadTruthTable("row value outside ±1".into()));
            }
            let mut input_idx = 0usize;
            for &v in &row[..self.input_bits] {
                input_idx = (input_idx << 1) | usize::from(v == 1);
            }
            if seen_inputs[input_idx] {
                return Err(Error::BadTruthTable(format!(
                    "input combination {input_idx} appears twice"
                )));
            }
            seen_inputs[input_idx] = true;
        }
        Ok(())
    }

    /// Configuration index of each row under the label order.
    pub fn row_config_indices(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(0usize, |idx, &v| (idx << 1) | usize::from(v == 1))
            })
            .collect()
    }
}

/// Convergence targets and budget for [`synthesize`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthOptions {
    /// Minimum equilibrium probability per table row; defaults to 0.6/rows
    /// (0.15 for a four-row table) when `None`.
    pub min_row_mass: Option<f64>,
    /// Minimum joint probability of all rows together.
    pub min_joint_mass: f64,
    /// Gradient step size.
    pub learning_rate: f64,
    /// Iteration budget before giving up.
    pub max_iters: usize,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions {
            min_row_mass: None,
            min_joint_mass: 0.8,
            learning_rate: 0.1,
            max_iters: 5000,
        }
    }
}

/// A synthesized gate: symmetric network, label order, and a strength knob.
///
/// The network has `labels.len() + 1` p-bits; the last one is the handle,
/// clamped to +1. `strength` scales the learned couplings at run time —
/// raising it sharpens every probability ratio (doubling squares them).
#[derive(Clone, Debug, PartialEq)]
pub struct GateMatrix {
    /// Learned strength-1 network (handle clamp included).
    pub spec: NetworkSpec,
    /// Label of each non-handle bit, index-aligned.
    pub bit_order: Vec<String>,
    pub strength: f64,
    /// How many leading bits are inputs. Zero for composed gates, whose bits
    /// are all clampable through inverse mode.
    pub input_bits: usize,
}

impl GateMatrix {
    pub fn n_bits(&self) -> usize {
        self.bit_order.len()
    }

    pub fn handle_index(&self) -> usize {
        self.bit_order.len()
    }

    pub fn bit_index(&self, name: &str) -> Result<usize> {
        self.bit_order
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::UnknownBit(name.to_string()))
    }

    /// The runnable network: learned couplings times `strength`.
    pub fn network(&self) -> NetworkSpec {
        self.spec.scaled(self.strength)
    }

    pub fn with_strength(&self, strength: f64) -> GateMatrix {
        GateMatrix {
            strength,
            ..self.clone()
        }
    }

    /// Renames bits (applied simultaneously); used to wire gates together
    /// before [`compose`] merges same-named bits.
    pub fn with_renamed_bits(&self, renames: &[(&str, &str)]) -> Result<GateMatrix> {
        let mut labels = self.bit_order.clone();
        for &(old, new) in renames {
            let idx = self.bit_index(old)?;
            labels[idx] = new.to_string();
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::NameCollision(a.clone()));
            }
        }
        Ok(GateMatrix {
            bit_order: labels,
            ..self.clone()
        })
    }

    /// Exact equilibrium distribution over the 2^n_bits label configurations,
    /// with the handle and any extra clamps (by bit index) applied.
    pub fn exact_distribution(&self, extra_clamps: &[(usize, i8)]) -> Result<Vec<f64>> {
        let mut clamps = vec![(self.handle_index(), 1i8)];
        for &(i, v) in extra_clamps {
            if i >= self.n_bits() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    n: self.n_bits(),
                });
            }
            clamps.push((i, v));
        }
        let net = self.network().with_clamps(clamps)?;
        let table = enumerate(&net)?;
        // Handle is the least significant bit and pinned to +1, so the label
        // configuration β lives at full index 2β + 1.
        Ok((0..1usize << self.n_bits())
            .map(|beta| table.probabilities[2 * beta + 1])
            .collect())
    }
}

/// Learns gate couplings by exact maximum-likelihood gradient ascent.
///
/// Data are the table rows (with the handle at +1); each iteration compares
/// data pair-correlations with the model's, computed exactly by enumeration,
/// and steps every coupling by `learning_rate × (⟨m_i m_j⟩_data −
/// ⟨m_i m_j⟩_model)`. Stops once every row reaches its probability target,
/// the rows jointly reach `min_joint_mass`, and every row sits strictly below
/// every non-row configuration in energy; errors with the achieved masses if
/// the budget runs out first.
pub fn synthesize(table: &TruthTable, options: &SynthOptions) -> Result<GateMatrix> {
    table.validate()?;
    let n_bits = table.n_bits();
    if n_bits > 10 {
        return Err(Error::TooManyBits {
            n: n_bits,
            max: 10,
        });
    }
    if !(options.learning_rate > 0.0) || !options.learning_rate.is_finite() {
        return Err(Error::InvalidParameter("learning rate must be positive".into()));
    }
    let n = n_bits + 1; // + handle
    let handle = n_bits;
    let n_rows = table.rows.len();
    let row_target = options.min_row_mass.unwrap_or(0.6 / n_rows as f64);

    // Data statistics over rows augmented with the +1 handle.
    let mut data_corr = vec![0.0_f64; n * n];
    for row in &table.rows {
        let aug: Vec<f64> = row
            .iter()
            .map(|&v| f64::from(v))
            .chain(std::iter::once(1.0))
            .collect();
        for i in 0..n {
            for j in (i + 1)..n {
                data_corr[i * n + j] += aug[i] * aug[j] / n_rows as f64;
            }
        }
    }

    // Full configuration index of each row: label bits then handle = +1.
    let row_full: Vec<usize> = table
        .row_config_indices()
        .iter()
        .map(|&beta| 2 * beta + 1)
        .collect();

    let mut w = vec![0.0_f64; n * n];
    let mut masses = vec![0.0_f64; n_rows];
    for iter in 0..=options.max_iters {
        let spec =
            NetworkSpec::from_dense_symmetric(n, &w, vec![0.0; n], vec![(handle, 1)])?;
        let energy_table = enumerate(&spec)?;
        for (slot, &alpha) in masses.iter_mut().zip(&row_full) {
            *slot = energy_table.probabilities[alpha];
        }
        let joint: f64 = masses.iter().sum();
        let rows_met = masses.iter().all(|&p| p >= row_target);
        let max_row_energy = row_full
            .iter()
            .map(|&a| energy_table.energies[a])
            .fold(f64::NEG_INFINITY, f64::max);
        let min_other_energy = energy_table
            .energies
            .iter()
            .enumerate()
            .filter(|(a, _)| !row_full.contains(a))
            .map(|(_, &e)| e)
            .fold(f64::INFINITY, f64::min);
        if rows_met && joint >= options.min_joint_mass && max_row_energy < min_other_energy {
            return Ok(GateMatrix {
                spec,
                bit_order: table.labels.clone(),
                strength: 1.0,
                input_bits: table.input_bits,
            });
        }
        if iter == options.max_iters {
            break;
        }
        // Exact model pair-correlations from the enumerated distribution.
        let size = 1usize << n;
        let mut model_corr = vec![0.0_f64; n * n];
        let mut m = vec![0.0_f64; n];
        for alpha in 0..size {
            let p = energy_table.probabilities[alpha];
            if p == 0.0 {
                continue;
            }
            for (k, v) in m.iter_mut().enumerate() {
                *v = if (alpha >> (n - 1 - k)) & 1 == 1 { 1.0 } else { -1.0 };
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    model_corr[i * n + j] += p * m[i] * m[j];
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                w[i * n + j] +=
                    options.learning_rate * (data_corr[i * n + j] - model_corr[i * n + j]);
            }
        }
    }
    Err(Error::SynthesisTargets {
        iters: options.max_iters,
        masses,
    })
}

/// Resolves named clamp assignments to network clamps (handle included).
fn clamps_for(gate: &GateMatrix, assignments: &[(&str, i8)]) -> Result<Vec<(usize, i8)>> {
    let mut clamps = vec![(gate.handle_index(), 1i8)];
    for &(name, value) in assignments {
        let idx = gate.bit_index(name)?;
        if value != -1 && value != 1 {
            return Err(Error::BadClampValue { index: idx, value });
        }
        clamps.push((idx, value));
    }
    Ok(clamps)
}

fn sample_gate(
    gate: &GateMatrix,
    clamps: Vec<(usize, i8)>,
    sweeps: u64,
    seed: u64,
) -> Result<Histogram> {
    let net = gate.network().with_clamps(clamps)?;
    let schedule = UpdateSchedule::random(sweeps, seed);
    let trace = run_chain(&net, &schedule, None, RecordPolicy::PerSweep)?;
    Histogram::from_trace(&trace, &natural_order(gate.n_bits()))
}

/// Feed-forward use: clamp every input, sample, histogram the label bits.
pub fn run_direct(
    gate: &GateMatrix,
    inputs: &[(&str, i8)],
    sweeps: u64,
    seed: u64,
) -> Result<Histogram> {
    for &(name, _) in inputs {
        let idx = gate.bit_index(name)?;
        if idx >= gate.input_bits {
            return Err(Error::InvalidParameter(format!(
                "{name} is an output bit; clamp it with inverse mode"
            )));
        }
    }
    for label in &gate.bit_order[..gate.input_bits] {
        if !inputs.iter().any(|(name, _)| name == label) {
            return Err(Error::MissingBit(label.clone()));
        }
    }
    sample_gate(gate, clamps_for(gate, inputs)?, sweeps, seed)
}

/// Inverted use: clamp some outputs, sample, histogram the label bits; the
/// inputs wander over the assignments consistent with the clamped outputs.
pub fn run_inverse(
    gate: &GateMatrix,
    outputs: &[(&str, i8)],
    sweeps: u64,
    seed: u64,
) -> Result<Histogram> {
    if outputs.is_empty() {
        return Err(Error::InvalidParameter(
            "inverse mode needs at least one clamped output".into(),
        ));
    }
    for &(name, _) in outputs {
        let idx = gate.bit_index(name)?;
        if idx < gate.input_bits {
            return Err(Error::NotAnOutput(name.to_string()));
        }
    }
    sample_gate(gate, clamps_for(gate, outputs)?, sweeps, seed)
}

/// Merges gates into one network: same-named bits (declared in `shared`)
/// become one bit with summed couplings, handles merge into a single handle,
/// and each gate's strength is baked into the merged weights.
pub fn compose(gates: &[&GateMatrix], shared: &[&str]) -> Result<GateMatrix> {
    if gates.is_empty() {
        return Err(Error::InvalidParameter("compose needs at least one gate".into()));
    }
    let mut labels: Vec<String> = Vec::new();
    for gate in gates {
        for label in &gate.bit_order {
            if labels.contains(label) {
                if !shared.iter().any(|s| s == label) {
                    return Err(Error::NameCollision(label.clone()));
                }
            } else {
                labels.push(label.clone());
            }
        }
    }
    let n = labels.len() + 1;
    let handle = labels.len();
    let mut dense = vec![0.0_f64; n * n];
    let mut biases = vec![0.0_f64; n];
    for gate in gates {
        let map: Vec<usize> = gate
            .bit_order
            .iter()
            .map(|l| labels.iter().position(|x| x == l).unwrap())
            .chain(std::iter::once(handle))
            .collect();
        for &(i, j, wv) in &gate.spec.weights {
            if i < j {
                let (a, b) = (map[i].min(map[j]), map[i].max(map[j]));
                dense[a * n + b] += wv * gate.strength;
            }
        }
        for (i, &h) in gate.spec.biases.iter().enumerate() {
            biases[map[i]] += h * gate.strength;
        }
    }
    let spec = NetworkSpec::from_dense_symmetric(n, &dense, biases, vec![(handle, 1)])?;
    Ok(GateMatrix {
        spec,
        bit_order: labels,
        strength: 1.0,
        input_bits: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hist::total_variation;
    use crate::oracle::energy;
    use crate::network::StateVector;

    fn single_bit_table(label: &str) -> TruthTable {
        TruthTable {
            input_bits: 0,
            output_bits: 1,
            rows: vec![vec![1]],
            labels: vec![label.to_string()],
        }
    }

    #[test]
    fn truth_table_fixture_rows_index_to_4_9_17_31() {
        let table = TruthTable::and_or_xnor();
        table.validate().unwrap();
        assert_eq!(table.row_config_indices(), vec![4, 9, 17, 31]);
    }

    #[test]
    fn truth_table_validation_catches_structural_problems() {
        let mut t = TruthTable::and_or_xnor();
        t.rows[0][0] = 0;
        assert!(t.validate().is_err());
        let mut t = TruthTable::and_or_xnor();
        t.rows[1] = t.rows[0].clone();
        assert!(t.validate().is_err()); // duplicate input combination
        let mut t = TruthTable::and_or_xnor();
        t.labels[1] = "A".into();
        assert!(t.validate().is_err());
        let mut t = TruthTable::and_or_xnor();
        t.rows.pop();
        assert!(t.validate().is_err());
    }

    #[test]
    fn bias_only_gate_learns_a_positive_handle_coupling() {
        let gate = synthesize(&single_bit_table("Q"), &SynthOptions::default()).unwrap();
        // One label bit plus handle.
        assert_eq!(gate.spec.n, 2);
        let w = gate
            .spec
            .weights
            .iter()
            .find(|&&(i, j, _)| i == 0 && j == 1)
            .unwrap()
            .2;
        assert!(w > 0.0);
        let dist = gate.exact_distribution(&[]).unwrap();
        assert!(dist[1] >= 0.8, "P(+1) = {}", dist[1]);
        // Strength 5 sharpens the same gate well past 0.99.
        let strong = gate.with_strength(5.0).exact_distribution(&[]).unwrap();
        assert!(strong[1] > 0.99, "P(+1) = {}", strong[1]);
    }

    #[test]
    fn synthesis_reports_achieved_masses_when_budget_is_too_small() {
        let err = synthesize(
            &TruthTable::and_or_xnor(),
            &SynthOptions {
                max_iters: 2,
                ..SynthOptions::default()
            },
        )
        .unwrap_err();
        match err {
            Error::SynthesisTargets { iters, masses } => {
                assert_eq!(iters, 2);
                assert_eq!(masses.len(), 4);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn three_gate_table_peaks_on_its_four_rows() {
        let gate = synthesize(&TruthTable::and_or_xnor(), &SynthOptions::default()).unwrap();
        let dist = gate.exact_distribution(&[]).unwrap();
        let rows = [4usize, 9, 17, 31];
        let joint: f64 = rows.iter().map(|&r| dist[r]).sum();
        assert!(joint >= 0.8, "joint mass {joint}");
        for &r in &rows {
            assert!(dist[r] >= 0.15, "row {r} mass {}", dist[r]);
        }
        // The four highest-probability configurations are exactly the rows.
        let mut order: Vec<usize> = (0..32).collect();
        order.sort_by(|&a, &b| dist[b].partial_cmp(&dist[a]).unwrap());
        let mut top: Vec<usize> = order[..4].to_vec();
        top.sort_unstable();
        assert_eq!(top, rows);
    }

    #[test]
    fn every_row_sits_below_every_non_row_in_energy() {
        let gate = synthesize(&TruthTable::and_or_xnor(), &SynthOptions::default()).unwrap();
        let net = gate.network();
        let e_of = |beta: usize| {
            let mut state = StateVector::from_config_index(5, beta).unwrap().m;
            state.push(1);
            energy(&net, &StateVector::new(state).unwrap()).unwrap()
        };
        let rows = [4usize, 9, 17, 31];
        let worst_row = rows.iter().map(|&r| e_of(r)).fold(f64::NEG_INFINITY, f64::max);
        for beta in 0..32usize {
            if !rows.contains(&beta) {
                assert!(e_of(beta) > worst_row, "config {beta} undercuts a row");
            }
        }
    }

    #[test]
    fn direct_mode_selects_the_matching_row() {
        let gate = synthesize(&TruthTable::and_or_xnor(), &SynthOptions::default()).unwrap();
        let hist = run_direct(&gate, &[("A", 1), ("B", -1)], 200_000, 40).unwrap();
        assert_eq!(hist.mode(), 17);
        let hist = run_direct(&gate, &[("A", 1), ("B", 1)], 200_000, 41).unwrap();
        assert_eq!(hist.mode(), 31);
    }

    #[test]
    fn direct_mode_requires_every_input() {
        let gate = synthesize(&TruthTable::and_or_xnor(), &SynthOptions::default()).unwrap();
        assert!(matches!(
            run_direct(&gate, &[("A", 1)], 100, 1),
            Err(Error::MissingBit(_))
        ));
        assert!(matches!(
            run_direct(&gate, &[("A", 1), ("Q", -1)], 100, 1),
            Err(Error::UnknownBit(_))
        ));
    }

    #[test]
    fn inverse_mode_fluctuates_over_consistent_inputs() {
        let gate = synthesize(&TruthTable::and_or_xnor(), &SynthOptions::default()).unwrap();
        let strong = gate.with_strength(2.0);
        // XNOR = 0 leaves rows 9 (A=0,B=1) and 17 (A=1,B=0).
        let dist = strong.exact_distribution(&[(2, -1)]).unwrap();
        let conditional = dist[9] + dist[17];
        assert!(conditional >= 0.9, "mass on 9+17 = {conditional}");
        // AND = 1 pins the unique row 31.
        let hist = run_inverse(&strong, &[("AND", 1)], 200_000, 42).unwrap();
        assert_eq!(hist.mode(), 31);
    }

    #[test]
    fn inverse_mode_rejects_inputs_and_empty_requests() {
        let gate = synthesize(&TruthTable::and_or_xnor(), &SynthOptions::default()).unwrap();
        assert!(matches!(
            run_inverse(&gate, &[("A", 1)], 100, 1),
            Err(Error::NotAnOutput(_))
        ));
        assert!(run_inverse(&gate, &[], 100, 1).is_err());
    }

    #[test]
    fn sampled_histogram_tracks_the_exact_conditional() {
        let gate = synthesize(&TruthTable::and_or_xnor(), &SynthOptions::default()).unwrap();
        let exact = gate.exact_distribution(&[]).unwrap();
        let net = gate
            .network()
            .with_clamps(vec![(gate.handle_index(), 1)])
            .unwrap();
        let schedule = UpdateSchedule::random(300_000, 7);
        let trace = run_chain(&net, &schedule, None, RecordPolicy::PerSweep).unwrap();
        let hist = Histogram::from_trace(&trace, &natural_order(5)).unwrap();
        let tv = total_variation(&hist.probabilities(), &exact).unwrap();
        assert!(tv < 0.02, "TV = {tv}");
    }

    #[test]
    fn compose_of_one_gate_is_the_identity() {
        let gate = synthesize(&TruthTable::and_or_xnor(), &SynthOptions::default()).unwrap();
        let composed = compose(&[&gate], &[]).unwrap();
        assert_eq!(composed.spec, gate.spec);
        assert_eq!(composed.bit_order, gate.bit_order);
    }

    #[test]
    fn composing_two_bias_gates_sums_their_couplings() {
        let a = synthesize(&single_bit_table("Q"), &SynthOptions::default()).unwrap();
        let b = a.clone();
        let merged = compose(&[&a, &b], &["Q"]).unwrap();
        assert_eq!(merged.spec.n, 2);
        let wa = a.spec.weights.iter().find(|&&(i, j, _)| i < j).unwrap().2;
        let wm = merged
            .spec
            .weights
            .iter()
            .find(|&&(i, j, _)| i < j)
            .unwrap()
            .2;
        assert!((wm - 2.0 * wa).abs() < 1e-15);
    }

    #[test]
    fn undeclared_name_collisions_are_rejected() {
        let a = synthesize(&single_bit_table("Q"), &SynthOptions::default()).unwrap();
        let b = a.clone();
        assert!(matches!(
            compose(&[&a, &b], &[]),
            Err(Error::NameCollision(_))
        ));
    }

    #[test]
    fn renaming_bits_relabels_without_touching_weights() {
        let gate = synthesize(&TruthTable::and_or_xnor(), &SynthOptions::default()).unwrap();
        let renamed = gate.with_renamed_bits(&[("XNOR", "X1"), ("A", "A1")]).unwrap();
        assert_eq!(renamed.spec, gate.spec);
        assert_eq!(renamed.bit_order[0], "A1");
        assert_eq!(renamed.bit_order[2], "X1");
        assert!(gate.with_renamed_bits(&[("A", "B")]).is_err());
        assert!(gate.with_renamed_bits(&[("missing", "Z")]).is_err());
    }

    #[test]
    fn composition_keeps_the_merged_network_symmetric() {
        let x1 = synthesize(&TruthTable::and_or_xnor(), &SynthOptions::default())
            .unwrap()
            .with_renamed_bits(&[("XNOR", "X1"), ("AND", "AND1"), ("OR", "OR1")])
            .unwrap();
        let x2 = x1
            .with_renamed_bits(&[
                ("A", "X1"),
                ("B", "C"),
                ("X1", "X2"),
                ("AND1", "AND2"),
                ("OR1", "OR2"),
            ])
            .unwrap();
        let chained = compose(&[&x1, &x2], &["X1"]).unwrap();
        chained.spec.validate().unwrap();
        assert!(chained.spec.symmetric);
        assert_eq!(chained.spec.n, 10); // 9 distinct labels + handle
    }
}
