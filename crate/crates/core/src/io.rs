//! File formats: JSON for network/model/parameter files, CSV for data inputs
//! and result artifacts.
//!
//! Every emitted artifact starts with a comment header recording the
//! producing command, the seed, a configuration hash, and a format version —
//! and nothing time- or host-dependent, so reruns are byte-identical.

use crate::error::{Error, Result};
use crate::genetic::FamilyTree;
use crate::hardware::{CircuitParams, MagnetParams};
use crate::hist::Histogram;
use crate::logic::{GateMatrix, TruthTable};
use crate::network::NetworkSpec;
use crate::oracle::EnergyTable;
use crate::pimc::QuantumIsingSpec;
use crate::tsp::TspInstance;
use serde::{Deserialize, Serialize};

/// Version tag stamped into artifact headers.
pub const ARTIFACT_VERSION: &str = "pbit-artifact v1";

fn parse_err(context: &str, err: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{context}: {err}"))
}

/// Parses and fully validates a network file. The `symmetric` flag is
/// checked against the actual entries, never trusted.
pub fn parse_network(text: &str) -> Result<NetworkSpec> {
    let spec: NetworkSpec =
        serde_json::from_str(text).map_err(|e| parse_err("network file", e))?;
    spec.validate()?;
    Ok(spec)
}

pub fn serialize_network(spec: &NetworkSpec) -> Result<String> {
    spec.validate()?;
    let mut text =
        serde_json::to_string_pretty(spec).map_err(|e| parse_err("network file", e))?;
    text.push('\n');
    Ok(text)
}

/// On-disk form of a synthesized gate: the strength-1 network (handle clamp
/// included) plus labels, strength, and the input/output split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateFile {
    pub network: NetworkSpec,
    pub bit_order: Vec<String>,
    pub strength: f64,
    pub input_bits: usize,
}

pub fn serialize_gate(gate: &GateMatrix) -> Result<String> {
    gate.spec.validate()?;
    let file = GateFile {
        network: gate.spec.clone(),
        bit_order: gate.bit_order.clone(),
        strength: gate.strength,
        input_bits: gate.input_bits,
    };
    let mut text =
        serde_json::to_string_pretty(&file).map_err(|e| parse_err("gate file", e))?;
    text.push('\n');
    Ok(text)
}

pub fn parse_gate(text: &str) -> Result<GateMatrix> {
    let file: GateFile = serde_json::from_str(text).map_err(|e| parse_err("gate file", e))?;
    file.network.validate()?;
    if file.bit_order.len() + 1 != file.network.n {
        return Err(Error::Parse(format!(
            "gate file: {} labels for a {}-p-bit network (expected one less, for the handle)",
            file.bit_order.len(),
            file.network.n
        )));
    }
    let handle = file.bit_order.len();
    if !file.network.clamps.contains(&(handle, 1)) {
        return Err(Error::Parse(
            "gate file: handle bit is not clamped to +1".into(),
        ));
    }
    if file.input_bits > file.bit_order.len() {
        return Err(Error::Parse(format!(
            "gate file: input_bits {} exceeds bit count {}",
            file.input_bits,
            file.bit_order.len()
        )));
    }
    if !file.strength.is_finite() {
        return Err(Error::NonFinite("gate strength".into()));
    }
    Ok(GateMatrix {
        spec: file.network,
        bit_order: file.bit_order,
        strength: file.strength,
        input_bits: file.input_bits,
    })
}

/// On-disk form of a transverse-field Ising model. `n_replicas` may be
/// omitted and chosen at load time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumModelFile {
    pub n_spins: usize,
    #[serde(rename = "J")]
    pub j: Vec<(usize, usize, f64)>,
    #[serde(default)]
    pub h_z: Option<Vec<f64>>,
    pub gamma: f64,
    pub beta: f64,
    #[serde(default)]
    pub n_replicas: Option<usize>,
}

/// Loads a quantum model; an explicit `replicas` argument overrides the
/// file, and when both are absent the default is 1 for a classical model
/// (`gamma = 0`) and 8 otherwise.
pub fn parse_quantum_model(text: &str, replicas: Option<usize>) -> Result<QuantumIsingSpec> {
    let file: QuantumModelFile =
        serde_json::from_str(text).map_err(|e| parse_err("quantum model file", e))?;
    let n_replicas = replicas
        .or(file.n_replicas)
        .unwrap_or(if file.gamma == 0.0 { 1 } else { 8 });
    let spec = QuantumIsingSpec {
        n_spins: file.n_spins,
        j: file.j,
        h_z: file.h_z.unwrap_or_else(|| vec![0.0; file.n_spins]),
        gamma: file.gamma,
        beta: file.beta,
        n_replicas,
    };
    spec.validate()?;
    Ok(spec)
}

pub fn serialize_quantum_model(q: &QuantumIsingSpec) -> Result<String> {
    q.validate()?;
    let file = QuantumModelFile {
        n_spins: q.n_spins,
        j: q.j.clone(),
        h_z: Some(q.h_z.clone()),
        gamma: q.gamma,
        beta: q.beta,
        n_replicas: Some(q.n_replicas),
    };
    let mut text =
        serde_json::to_string_pretty(&file).map_err(|e| parse_err("quantum model file", e))?;
    text.push('\n');
    Ok(text)
}

pub fn parse_family_tree(text: &str) -> Result<FamilyTree> {
    serde_json::from_str(text).map_err(|e| parse_err("family tree file", e))
}

pub fn serialize_family_tree(tree: &FamilyTree) -> Result<String> {
    let mut text =
        serde_json::to_string_pretty(tree).map_err(|e| parse_err("family tree file", e))?;
    text.push('\n');
    Ok(text)
}

/// A tabulated transistor operating curve for the transfer sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferTable {
    /// Swept input voltages, strictly increasing, V.
    pub v_in: Vec<f64>,
    /// Transistor resistance at each input, Ω.
    pub r_t: Vec<f64>,
}

/// Hardware parameter file; each section is optional and the report covers
/// whatever is present.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct HwParamsFile {
    #[serde(default)]
    pub magnet: Option<MagnetParams>,
    #[serde(default)]
    pub circuit: Option<CircuitParams>,
    #[serde(default)]
    pub transfer: Option<TransferTable>,
    /// Charge drive current for the spin-current estimate, A.
    #[serde(default)]
    pub drive_current: Option<f64>,
}

pub fn parse_hw_params(text: &str) -> Result<HwParamsFile> {
    let file: HwParamsFile =
        serde_json::from_str(text).map_err(|e| parse_err("hardware parameter file", e))?;
    if file.magnet.is_none() && file.circuit.is_none() {
        return Err(Error::Parse(
            "hardware parameter file: needs a magnet or circuit section".into(),
        ));
    }
    if let Some(m) = &file.magnet {
        m.validate()?;
    }
    if let Some(c) = &file.circuit {
        c.validate()?;
    }
    if let Some(t) = &file.transfer {
        if file.circuit.is_none() {
            return Err(Error::Parse(
                "hardware parameter file: a transfer table needs a circuit section".into(),
            ));
        }
        if t.v_in.len() != t.r_t.len() {
            return Err(Error::LengthMismatch {
                expected: t.v_in.len(),
                got: t.r_t.len(),
            });
        }
    }
    Ok(file)
}

/// Data lines of a CSV-ish text: comment (`#`) and blank lines dropped,
/// remaining lines split on commas with surrounding whitespace trimmed.
fn csv_records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((k + 1, line.split(',').map(str::trim).collect()))
        }
    })
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("line {line}: `{field}` is not a number")))
}

/// Parses a truth table: a header line naming the bits, then one 0/1 row per
/// input combination. The first `n_inputs` columns are the gate's inputs.
pub fn parse_truth_table_csv(text: &str, n_inputs: usize) -> Result<TruthTable> {
    let mut records = csv_records(text);
    let (_, labels) = records
        .next()
        .ok_or_else(|| Error::Parse("truth table: empty file".into()))?;
    let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    if n_inputs > labels.len() {
        return Err(Error::Parse(format!(
            "truth table: {n_inputs} input bits but only {} columns",
            labels.len()
        )));
    }
    let mut rows = Vec::new();
    for (line, fields) in records {
        if fields.len() != labels.len() {
            return Err(Error::Parse(format!(
                "line {line}: {} fields, expected {}",
                fields.len(),
                labels.len()
            )));
        }
        let mut row = Vec::with_capacity(fields.len());
        for field in fields {
            row.push(match field {
                "0" => -1i8,
                "1" => 1i8,
                other => {
                    return Err(Error::Parse(format!(
                        "line {line}: `{other}` is not 0 or 1"
                    )))
                }
            });
        }
        rows.push(row);
    }
    let table = TruthTable {
        input_bits: n_inputs,
        output_bits: labels.len() - n_inputs,
        rows,
        labels,
    };
    table.validate()?;
    Ok(table)
}

/// Parses a square distance matrix, one row per line.
pub fn parse_distance_csv(text: &str) -> Result<TspInstance> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, fields) in csv_records(text) {
        let row: Vec<f64> = fields
            .iter()
            .map(|f| parse_f64(f, line))
            .collect::<Result<_>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse(format!(
                    "line {line}: {} fields, expected {}",
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(Error::Parse("distance matrix: empty file".into()));
    }
    if rows[0].len() != n {
        return Err(Error::Parse(format!(
            "distance matrix: {n} rows of {} fields; must be square",
            rows[0].len()
        )));
    }
    let inst = TspInstance {
        n_cities: n,
        distances: rows.into_iter().flatten().collect(),
    };
    inst.validate()?;
    Ok(inst)
}

/// Parses training patterns: one row per pattern, values 0/1 (or ±1),
/// mapped to bipolar.
pub fn parse_rbm_data_csv(text: &str) -> Result<Vec<Vec<i8>>> {
    let mut patterns: Vec<Vec<i8>> = Vec::new();
    for (line, fields) in csv_records(text) {
        let mut row = Vec::with_capacity(fields.len());
        for field in fields {
            row.push(match field {
                "0" | "-1" => -1i8,
                "1" | "+1" => 1i8,
                other => {
                    return Err(Error::Parse(format!(
                        "line {line}: `{other}` is not a binary value"
                    )))
                }
            });
        }
        if let Some(first) = patterns.first() {
            if row.len() != first.len() {
                return Err(Error::Parse(format!(
                    "line {line}: {} fields, expected {}",
                    row.len(),
                    first.len()
                )));
            }
        }
        patterns.push(row);
    }
    if patterns.is_empty() {
        return Err(Error::Parse("training data: empty file".into()));
    }
    Ok(patterns)
}

/// Provenance stamped into every artifact.
#[derive(Clone, Debug, PartialEq)]
pub struct ArtifactMeta {
    /// The subcommand that produced the artifact.
    pub command: String,
    /// RNG seed, when the command uses one.
    pub seed: Option<u64>,
    /// Hash of the fully resolved configuration (inputs plus parameters).
    pub config_hash: String,
}

impl ArtifactMeta {
    fn comment_lines(&self, prefix: &str) -> String {
        let mut out = format!("{prefix} {ARTIFACT_VERSION}\n{prefix} command: {}\n", self.command);
        if let Some(seed) = self.seed {
            out.push_str(&format!("{prefix} seed: {seed}\n"));
        }
        out.push_str(&format!("{prefix} config-hash: {}\n", self.config_hash));
        out
    }
}

/// Assembles a CSV artifact: comment header, column-name row, data rows.
pub fn csv_document<I>(meta: &ArtifactMeta, columns: &str, rows: I) -> String
where
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    let mut out = meta.comment_lines("#");
    out.push_str(columns);
    out.push('\n');
    for row in rows {
        out.push_str(row.as_ref());
        out.push('\n');
    }
    out
}

/// Assembles a gnuplot-compatible data file: same provenance header, then
/// space-separated columns (one `plot "file" using ...` away from a figure).
pub fn gnuplot_document<I>(meta: &ArtifactMeta, columns: &str, rows: I) -> String
where
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    let mut out = meta.comment_lines("#");
    out.push_str(&format!("# columns: {columns}\n"));
    for row in rows {
        out.push_str(row.as_ref().replace(',', " ").as_str());
        out.push('\n');
    }
    out
}

/// Histogram artifact rows, `config_index,count,probability`.
pub fn histogram_rows(hist: &Histogram) -> Vec<String> {
    let probs = hist.probabilities();
    hist.counts
        .iter()
        .enumerate()
        .map(|(alpha, &count)| format!("{alpha},{count},{}", probs[alpha]))
        .collect()
}

/// Enumeration artifact rows, `config_index,energy,probability`.
pub fn energy_table_rows(table: &EnergyTable) -> Vec<String> {
    table
        .energies
        .iter()
        .zip(&table.probabilities)
        .enumerate()
        .map(|(alpha, (&e, &p))| format!("{alpha},{e},{p}"))
        .collect()
}
