//! `pbit` — command-line experiments on probabilistic-bit networks.
//!
//! One binary, eight subcommands sharing the network file format, seeded RNG
//! streams, and CSV artifacts:
//!
//! - `sample`      Markov-chain sampling of a network into a histogram
//! - `enumerate`   exact energies and probabilities by brute force
//! - `synth-gate`  learn an invertible logic gate from a truth table
//! - `genetic`     ancestral sampling of a pedigree, pair correlations
//! - `rbm-train`   contrastive-divergence training with an exact loss curve
//! - `tsp`         simulated-annealing tours over a distance matrix
//! - `pimc`        replica-mapped transverse-field Ising observables
//! - `hw`          magnet/circuit behavioral report
//!
//! Artifacts are CSV with a comment header recording the artifact version,
//! the command, the seed (when one is used), and a hash of the fully
//! resolved configuration; `--plot` additionally writes a gnuplot-ready
//! space-separated copy. Writes go through a temp file and rename, so a
//! crash never leaves a half-written artifact. Exit codes: 0 success,
//! 1 invalid input or usage, 2 runtime failure. All formats and flags are
//! documented in FORMATS.md at the repository root.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};
use pbit_core::io::{
    csv_document, energy_table_rows, gnuplot_document, histogram_rows, parse_distance_csv,
    parse_family_tree, parse_hw_params, parse_network, parse_quantum_model, parse_rbm_data_csv,
    parse_truth_table_csv, serialize_gate, ArtifactMeta,
};
use pbit_core::{
    barrier_and_lifetime, build_genetic_network, capacitive_weights, cd_step,
    conductance_weights, correlate, data_distribution, enumerate, enumerate_directed,
    hardware_transfer_sweep, kl, kl_divergence, natural_order, observables_from_table,
    pimc_map, pinning_currents, run_chains, solve_tsp, synthesize, tsp_encode,
    AnnealSchedule, CorrelationRequest, DecodedTour, Histogram, RbmSpec, RecordPolicy,
    SynthOptions, UpdateSchedule, MAX_ENUM_BITS,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Replica networks up to this many bits are enumerated exactly; larger
/// ones fall back to sampling (a 20-bit table is 16 MB; 24 bits would be
/// a quarter gigabyte).
const PIMC_EXACT_BITS: usize = 20;

// ---------------------------------------------------------------------------
// Command-line surface.

#[derive(Parser)]
#[command(
    name = "pbit",
    version,
    about = "Experiments on networks of probabilistic bits",
    after_help = "File formats, CSV columns, and exit codes are documented in FORMATS.md."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a network and write the configuration histogram.
    Sample(SampleArgs),
    /// Enumerate all configurations: energies and exact probabilities.
    Enumerate(EnumerateArgs),
    /// Synthesize an invertible gate network from a truth table.
    SynthGate(SynthGateArgs),
    /// Sample a pedigree network and report pair correlations.
    Genetic(GeneticArgs),
    /// Train a restricted Boltzmann machine and write its loss curve.
    RbmTrain(RbmTrainArgs),
    /// Anneal traveling-salesman tours over a distance matrix.
    Tsp(TspArgs),
    /// Estimate transverse-field Ising observables via the replica mapping.
    Pimc(PimcArgs),
    /// Report magnet and circuit behavioral quantities.
    Hw(HwArgs),
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ScheduleArg {
    /// Fixed index order within each sweep.
    Sequential,
    /// Uniformly random bit per update.
    Random,
    /// Exponential waiting times with optional stale-synapse reads.
    Poisson,
}

#[derive(Args)]
struct SampleArgs {
    /// Network description file (JSON).
    #[arg(long)]
    network: PathBuf,
    /// Whole-network sweeps per chain.
    #[arg(long, default_value_t = 100_000)]
    sweeps: u64,
    /// RNG seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Update schedule.
    #[arg(long, value_enum, default_value = "random")]
    schedule: ScheduleArg,
    /// Mean stale-synapse delay in update intervals (poisson only).
    #[arg(long, default_value_t = 0.0)]
    delay: f64,
    /// Independent chains pooled into the histogram.
    #[arg(long, default_value_t = 1)]
    chains: u64,
    /// Record every k-th sweep.
    #[arg(long, default_value_t = 1)]
    thin: u64,
    /// Output histogram CSV.
    #[arg(long)]
    out: PathBuf,
    /// Also write a gnuplot-ready data file.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Network description file (JSON).
    #[arg(long)]
    network: PathBuf,
    /// Output energy/probability CSV.
    #[arg(long)]
    out: PathBuf,
    /// Also write a gnuplot-ready data file.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct SynthGateArgs {
    /// Truth table CSV: a header naming the bits, then 0/1 rows.
    #[arg(long)]
    table: PathBuf,
    /// How many leading table columns are gate inputs.
    #[arg(long, default_value_t = 2)]
    inputs: usize,
    /// Coupling strength stored with the synthesized gate.
    #[arg(long, default_value_t = 1.0)]
    strength: f64,
    /// Synthesis iteration budget.
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    /// Output gate network file (JSON).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GeneticArgs {
    /// Family tree file (JSON).
    #[arg(long)]
    tree: PathBuf,
    /// Parent-child coupling weight.
    #[arg(long)]
    w: f64,
    /// Whole-network sweeps.
    #[arg(long, default_value_t = 100_000)]
    sweeps: u64,
    /// Member pairs to correlate, e.g. "C1:C2,M1:C3".
    #[arg(long)]
    pairs: String,
    /// RNG seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output pair/correlation CSV.
    #[arg(long)]
    out: PathBuf,
    /// Also write a gnuplot-ready data file.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct RbmTrainArgs {
    /// Training patterns CSV: one 0/1 row per pattern.
    #[arg(long)]
    data: PathBuf,
    /// Hidden-unit count.
    #[arg(long)]
    hidden: usize,
    /// Gibbs half-step pairs per contrastive-divergence update.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Training steps.
    #[arg(long, default_value_t = 2000)]
    steps: usize,
    /// Learning rate.
    #[arg(long, default_value_t = 0.05)]
    lr: f64,
    /// RNG seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output loss-curve CSV (step, exact KL to the data law).
    #[arg(long)]
    out: PathBuf,
    /// Also write a gnuplot-ready data file.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct TspArgs {
    /// Square distance matrix CSV.
    #[arg(long)]
    distances: PathBuf,
    /// Independent annealing runs.
    #[arg(long, default_value_t = 20)]
    runs: u64,
    /// Gain ramp as "i0,growth,t_eq,stages"; defaults to 0.1,1/0.99,50,600.
    #[arg(long)]
    schedule: Option<String>,
    /// Constraint penalty weight A; defaults to 2·n·B·d_max.
    #[arg(long)]
    penalty: Option<f64>,
    /// Tour length weight B; defaults to 1/d_max.
    #[arg(long)]
    length_weight: Option<f64>,
    /// RNG seed (each run uses its own stream of this seed).
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output per-run tour CSV.
    #[arg(long)]
    out: PathBuf,
    /// Also write a gnuplot-ready data file.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct PimcArgs {
    /// Quantum model file (JSON): couplings, fields, gamma, beta.
    #[arg(long)]
    model: PathBuf,
    /// Replica count; overrides the file and the default of 8.
    #[arg(long)]
    replicas: Option<usize>,
    /// Sweeps when the replica network is too large to enumerate.
    #[arg(long, default_value_t = 200_000)]
    sweeps: u64,
    /// Burn-in snapshots discarded before averaging (sampled path only).
    #[arg(long, default_value_t = 10_000)]
    burn_in: usize,
    /// RNG seed (sampled path only).
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output observable CSV.
    #[arg(long)]
    out: PathBuf,
    /// Also write a gnuplot-ready data file.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct HwArgs {
    /// Hardware parameter file (JSON) with magnet and/or circuit sections.
    #[arg(long)]
    params: PathBuf,
    /// Output report CSV.
    #[arg(long)]
    out: PathBuf,
    /// Also write a gnuplot-ready data file.
    #[arg(long)]
    plot: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Failure plumbing: validation (exit 1) versus runtime (exit 2).

enum Failure {
    Validation(anyhow::Error),
    Runtime(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Runtime(_) => 2,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Validation(e) | Failure::Runtime(e) => e,
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Core errors signal bad input except for an exhausted synthesis budget,
/// which is a legitimate tried-and-failed runtime outcome.
fn core_fail(err: pbit_core::Error) -> Failure {
    match err {
        pbit_core::Error::SynthesisTargets { .. } => Failure::Runtime(err.into()),
        _ => Failure::Validation(err.into()),
    }
}

fn invalid(msg: String) -> Failure {
    Failure::Validation(anyhow!(msg))
}

fn read_input(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Validation(anyhow!("cannot read {}: {e}", path.display())))
}

/// Writes through a sibling temp file and an atomic rename.
fn write_artifact(path: &Path, contents: &str) -> CliResult<()> {
    let attempt = || -> anyhow::Result<()> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(contents.as_bytes())?;
        tmp.persist(path)?;
        Ok(())
    };
    attempt().map_err(|e| Failure::Runtime(anyhow!("cannot write {}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// Configuration hashing: every artifact records a digest of the fully
// resolved configuration — input bytes plus effective parameter values — so
// artifacts from different configurations never masquerade as each other.

struct ConfigHash(Sha256);

impl ConfigHash {
    fn new(command: &str) -> Self {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        h.update([0]);
        ConfigHash(h)
    }

    fn param(&mut self, name: &str, value: impl std::fmt::Display) {
        self.0.update(name.as_bytes());
        self.0.update([b'=']);
        self.0.update(value.to_string().as_bytes());
        self.0.update([0]);
    }

    fn file(&mut self, role: &str, bytes: &str) {
        self.0.update(role.as_bytes());
        self.0.update([b':']);
        self.0.update(bytes.as_bytes());
        self.0.update([0]);
    }

    fn finish(self) -> String {
        hex::encode(&self.0.finalize()[..6])
    }
}

// ---------------------------------------------------------------------------
// Entry point.

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version surface as "errors" but should exit 0;
            // anything else is a usage problem.
            if err.use_stderr() {
                eprint!("{err}");
                return ExitCode::from(1);
            }
            print!("{err}");
            return ExitCode::SUCCESS;
        }
    };
    let outcome = match cli.command {
        Command::Sample(args) => cmd_sample(&args),
        Command::Enumerate(args) => cmd_enumerate(&args),
        Command::SynthGate(args) => cmd_synth_gate(&args),
        Command::Genetic(args) => cmd_genetic(&args),
        Command::RbmTrain(args) => cmd_rbm_train(&args),
        Command::Tsp(args) => cmd_tsp(&args),
        Command::Pimc(args) => cmd_pimc(&args),
        Command::Hw(args) => cmd_hw(&args),
    };
    match outcome {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {:#}", failure.error());
            ExitCode::from(failure.code())
        }
    }
}

/// Writes the CSV artifact and, when requested, its gnuplot twin.
fn emit(
    meta: &ArtifactMeta,
    columns: &str,
    rows: &[String],
    out: &Path,
    plot: Option<&PathBuf>,
) -> CliResult<()> {
    write_artifact(out, &csv_document(meta, columns, rows))?;
    if let Some(plot_path) = plot {
        write_artifact(plot_path, &gnuplot_document(meta, columns, rows))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// sample

fn cmd_sample(args: &SampleArgs) -> CliResult<String> {
    let text = read_input(&args.network)?;
    let spec = parse_network(&text).map_err(core_fail)?;
    if args.delay != 0.0 && args.schedule != ScheduleArg::Poisson {
        return Err(invalid(
            "--delay only applies to the poisson schedule".into(),
        ));
    }
    if args.chains == 0 {
        return Err(invalid("--chains must be at least 1".into()));
    }
    if spec.n > MAX_ENUM_BITS {
        return Err(invalid(format!(
            "histograms cover at most {MAX_ENUM_BITS} bits; this network has {}",
            spec.n
        )));
    }
    let schedule_name = match args.schedule {
        ScheduleArg::Sequential => "sequential",
        ScheduleArg::Random => "random",
        ScheduleArg::Poisson => "poisson",
    };
    let mut hash = ConfigHash::new("sample");
    hash.file("network", &text);
    hash.param("sweeps", args.sweeps);
    hash.param("seed", args.seed);
    hash.param("schedule", schedule_name);
    hash.param("delay", args.delay);
    hash.param("chains", args.chains);
    hash.param("thin", args.thin);
    let meta = ArtifactMeta {
        command: "sample".into(),
        seed: Some(args.seed),
        config_hash: hash.finish(),
    };

    let schedule = match args.schedule {
        ScheduleArg::Sequential => UpdateSchedule::sequential(args.sweeps, args.seed),
        ScheduleArg::Random => UpdateSchedule::random(args.sweeps, args.seed),
        ScheduleArg::Poisson => UpdateSchedule::poisson(args.sweeps, args.delay, args.seed),
    };
    let policy = if args.thin == 1 {
        RecordPolicy::PerSweep
    } else {
        RecordPolicy::Thinned(args.thin)
    };
    let traces = run_chains(&spec, &schedule, None, policy, args.chains).map_err(core_fail)?;
    let order = natural_order(spec.n);
    let mut pooled = Histogram {
        counts: vec![0u64; 1usize << spec.n],
        total: 0,
    };
    for trace in &traces {
        let hist = Histogram::from_trace(trace, &order).map_err(core_fail)?;
        for (slot, count) in pooled.counts.iter_mut().zip(&hist.counts) {
            *slot += count;
        }
        pooled.total += hist.total;
    }
    emit(
        &meta,
        "config_index,count,probability",
        &histogram_rows(&pooled),
        &args.out,
        args.plot.as_ref(),
    )?;

    // Against an exact reference when one is computable: the equilibrium
    // law for symmetric networks, the ancestral law for directed ones.
    let empirical = pooled.probabilities();
    let kl_note = if spec.symmetric {
        enumerate(&spec)
            .and_then(|table| kl_divergence(&empirical, &table))
            .map(|v| format!(" kl={v:.6}"))
            .unwrap_or_default()
    } else {
        enumerate_directed(&spec, &order)
            .and_then(|reference| kl(&empirical, &reference))
            .map(|v| format!(" kl={v:.6}"))
            .unwrap_or_default()
    };
    Ok(format!(
        "sample: n={} schedule={schedule_name} sweeps={} chains={} snapshots={}{kl_note}",
        spec.n, args.sweeps, args.chains, pooled.total
    ))
}

// ---------------------------------------------------------------------------
// enumerate

fn cmd_enumerate(args: &EnumerateArgs) -> CliResult<String> {
    let text = read_input(&args.network)?;
    let spec = parse_network(&text).map_err(core_fail)?;
    let mut hash = ConfigHash::new("enumerate");
    hash.file("network", &text);
    let meta = ArtifactMeta {
        command: "enumerate".into(),
        seed: None,
        config_hash: hash.finish(),
    };
    let table = enumerate(&spec).map_err(core_fail)?;
    emit(
        &meta,
        "config_index,energy,probability",
        &energy_table_rows(&table),
        &args.out,
        args.plot.as_ref(),
    )?;
    let total: f64 = table.probabilities.iter().sum();
    Ok(format!(
        "enumerate: n={} configs={} mode={} total_probability={total}",
        spec.n,
        table.probabilities.len(),
        table.mode()
    ))
}

// ---------------------------------------------------------------------------
// synth-gate

fn cmd_synth_gate(args: &SynthGateArgs) -> CliResult<String> {
    let text = read_input(&args.table)?;
    let table = parse_truth_table_csv(&text, args.inputs).map_err(core_fail)?;
    let mut hash = ConfigHash::new("synth-gate");
    hash.file("table", &text);
    hash.param("inputs", args.inputs);
    hash.param("strength", args.strength);
    hash.param("max_iters", args.max_iters);
    let meta = ArtifactMeta {
        command: "synth-gate".into(),
        seed: None,
        config_hash: hash.finish(),
    };
    let options = SynthOptions {
        max_iters: args.max_iters,
        ..SynthOptions::default()
    };
    let gate = synthesize(&table, &options)
        .map_err(core_fail)?
        .with_strength(args.strength);
    // Gate files are plain JSON with no comment syntax, so the provenance
    // hash is reported in the summary instead of inside the artifact.
    write_artifact(&args.out, &serialize_gate(&gate).map_err(core_fail)?)?;
    let dist = gate.exact_distribution(&[]).map_err(core_fail)?;
    let joint: f64 = table
        .row_config_indices()
        .into_iter()
        .map(|beta| dist[beta])
        .sum();
    Ok(format!(
        "synth-gate: {} bits ({} inputs), {} rows, joint row mass {joint:.4} at strength {} [{}]",
        table.n_bits(),
        table.input_bits,
        table.rows.len(),
        args.strength,
        meta.config_hash
    ))
}

// ---------------------------------------------------------------------------
// genetic

fn cmd_genetic(args: &GeneticArgs) -> CliResult<String> {
    let text = read_input(&args.tree)?;
    let tree = parse_family_tree(&text).map_err(core_fail)?;
    let mut hash = ConfigHash::new("genetic");
    hash.file("tree", &text);
    hash.param("w", args.w);
    hash.param("sweeps", args.sweeps);
    hash.param("pairs", &args.pairs);
    hash.param("seed", args.seed);
    let meta = ArtifactMeta {
        command: "genetic".into(),
        seed: Some(args.seed),
        config_hash: hash.finish(),
    };
    let (spec, names) = build_genetic_network(&tree, args.w).map_err(core_fail)?;
    let mut labels = Vec::new();
    let mut pairs = Vec::new();
    for chunk in args.pairs.split(',') {
        let (a, b) = chunk
            .split_once(':')
            .ok_or_else(|| invalid(format!("pair `{chunk}` is not NAME:NAME")))?;
        let index_of = |name: &str| {
            names
                .iter()
                .position(|n| n == name.trim())
                .ok_or_else(|| invalid(format!("unknown family member `{}`", name.trim())))
        };
        pairs.push((index_of(a)?, index_of(b)?));
        labels.push(format!("{}:{}", a.trim(), b.trim()));
    }
    // Sequential order realizes ancestral sampling on the topologically
    // sorted pedigree: every sweep is one independent draw from the joint.
    let schedule = UpdateSchedule::sequential(args.sweeps, args.seed);
    let trace = pbit_core::run_chain(&spec, &schedule, None, RecordPolicy::PerSweep)
        .map_err(core_fail)?;
    let request = CorrelationRequest {
        pairs,
        window: trace.len(),
    };
    let values = correlate(&trace, &request).map_err(core_fail)?;
    let rows: Vec<String> = labels
        .iter()
        .zip(&values)
        .map(|(label, v)| format!("{label},{v}"))
        .collect();
    emit(
        &meta,
        "pair,correlation",
        &rows,
        &args.out,
        args.plot.as_ref(),
    )?;
    let mut shown = String::new();
    for (label, v) in labels.iter().zip(&values) {
        write!(shown, " {label}={v:.4}").unwrap();
    }
    Ok(format!(
        "genetic: {} members, sweeps={},{shown}",
        names.len(),
        args.sweeps
    ))
}

// ---------------------------------------------------------------------------
// rbm-train

fn cmd_rbm_train(args: &RbmTrainArgs) -> CliResult<String> {
    let text = read_input(&args.data)?;
    let patterns = parse_rbm_data_csv(&text).map_err(core_fail)?;
    let n_visible = patterns[0].len();
    if args.hidden == 0 {
        return Err(invalid("--hidden must be at least 1".into()));
    }
    let mut hash = ConfigHash::new("rbm-train");
    hash.file("data", &text);
    hash.param("hidden", args.hidden);
    hash.param("k", args.k);
    hash.param("steps", args.steps);
    hash.param("lr", args.lr);
    hash.param("seed", args.seed);
    let meta = ArtifactMeta {
        command: "rbm-train".into(),
        seed: Some(args.seed),
        config_hash: hash.finish(),
    };
    let target = data_distribution(&patterns, n_visible).map_err(core_fail)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut rbm = RbmSpec::seeded_init(n_visible, args.hidden, 0.1, &mut rng);
    rbm.cd_steps = args.k;
    rbm.learning_rate = args.lr;
    let loss = |rbm: &RbmSpec| -> CliResult<f64> {
        let marginal = pbit_core::visible_marginal(rbm).map_err(core_fail)?;
        kl(&target, &marginal).map_err(core_fail)
    };
    let mut rows = Vec::with_capacity(args.steps + 1);
    let first = loss(&rbm)?;
    rows.push(format!("0,{first}"));
    let mut last = first;
    for step in 1..=args.steps {
        rbm = cd_step(&rbm, &patterns, &mut rng).map_err(core_fail)?;
        last = loss(&rbm)?;
        rows.push(format!("{step},{last}"));
    }
    emit(&meta, "step,kl", &rows, &args.out, args.plot.as_ref())?;
    Ok(format!(
        "rbm-train: {n_visible} visible, {} hidden, cd-{}: kl {first:.4} -> {last:.4} in {} steps",
        args.hidden, args.k, args.steps
    ))
}

// ---------------------------------------------------------------------------
// tsp

fn parse_anneal_schedule(text: &str) -> CliResult<AnnealSchedule> {
    let fields: Vec<&str> = text.split(',').map(str::trim).collect();
    if fields.len() != 4 {
        return Err(invalid(format!(
            "--schedule needs `i0,growth,t_eq,stages`, got `{text}`"
        )));
    }
    let number = |field: &str, name: &str| {
        field
            .parse::<f64>()
            .map_err(|_| invalid(format!("schedule {name} `{field}` is not a number")))
    };
    let schedule = AnnealSchedule {
        i0_initial: number(fields[0], "i0")?,
        growth: number(fields[1], "growth")?,
        t_eq: fields[2]
            .parse()
            .map_err(|_| invalid(format!("schedule t_eq `{}` is not an integer", fields[2])))?,
        stages: fields[3]
            .parse()
            .map_err(|_| invalid(format!("schedule stages `{}` is not an integer", fields[3])))?,
    };
    schedule.validate().map_err(core_fail)?;
    Ok(schedule)
}

fn cmd_tsp(args: &TspArgs) -> CliResult<String> {
    let text = read_input(&args.distances)?;
    let inst = parse_distance_csv(&text).map_err(core_fail)?;
    if args.runs == 0 {
        return Err(invalid("--runs must be at least 1".into()));
    }
    let schedule = match &args.schedule {
        Some(spec) => parse_anneal_schedule(spec)?,
        None => AnnealSchedule::default(),
    };
    let enc = tsp_encode(&inst, args.penalty, args.length_weight).map_err(core_fail)?;
    let mut hash = ConfigHash::new("tsp");
    hash.file("distances", &text);
    hash.param("runs", args.runs);
    hash.param("i0", schedule.i0_initial);
    hash.param("growth", schedule.growth);
    hash.param("t_eq", schedule.t_eq);
    hash.param("stages", schedule.stages);
    hash.param("penalty", enc.a);
    hash.param("length_weight", enc.b);
    hash.param("seed", args.seed);
    let meta = ArtifactMeta {
        command: "tsp".into(),
        seed: Some(args.seed),
        config_hash: hash.finish(),
    };
    let mut rows = Vec::with_capacity(args.runs as usize);
    let mut n_valid = 0u64;
    let mut best: Option<f64> = None;
    for stream in 0..args.runs {
        let (_, tour) = solve_tsp(&enc, &schedule, args.seed, stream).map_err(core_fail)?;
        match tour {
            DecodedTour::Valid { order, length } => {
                n_valid += 1;
                best = Some(best.map_or(length, |b: f64| b.min(length)));
                let mut label = String::from("0");
                for city in order {
                    write!(label, "-{city}").unwrap();
                }
                rows.push(format!("{label},{length},1"));
            }
            DecodedTour::Invalid { .. } => rows.push("-,,0".into()),
        }
    }
    emit(
        &meta,
        "tour,length,valid",
        &rows,
        &args.out,
        args.plot.as_ref(),
    )?;
    let best_note = match best {
        Some(length) => format!(" best length {length:.6}"),
        None => String::new(),
    };
    Ok(format!(
        "tsp: {} cities, {} runs, {n_valid} valid,{best_note}",
        inst.n_cities, args.runs
    ))
}

// ---------------------------------------------------------------------------
// pimc

fn cmd_pimc(args: &PimcArgs) -> CliResult<String> {
    let text = read_input(&args.model)?;
    let q = parse_quantum_model(&text, args.replicas).map_err(core_fail)?;
    let exact = q.n_bits() <= PIMC_EXACT_BITS;
    let mut hash = ConfigHash::new("pimc");
    hash.file("model", &text);
    hash.param("replicas", q.n_replicas);
    hash.param("method", if exact { "exact" } else { "sampled" });
    if !exact {
        hash.param("sweeps", args.sweeps);
        hash.param("burn_in", args.burn_in);
        hash.param("seed", args.seed);
    }
    let meta = ArtifactMeta {
        command: "pimc".into(),
        seed: if exact { None } else { Some(args.seed) },
        config_hash: hash.finish(),
    };
    let observables = if exact {
        let table = enumerate(&pimc_map(&q).map_err(core_fail)?).map_err(core_fail)?;
        observables_from_table(&q, &table).map_err(core_fail)?
    } else {
        pbit_core::measure(&q, args.sweeps, args.burn_in, args.seed).map_err(core_fail)?
    };
    let mut rows = Vec::new();
    for (i, sz) in observables.sz.iter().enumerate() {
        rows.push(format!("sz[{i}],{sz}"));
    }
    for (&(a, b, _), zz) in q.j.iter().zip(&observables.zz) {
        rows.push(format!("zz[{a}:{b}],{zz}"));
    }
    emit(
        &meta,
        "observable,value",
        &rows,
        &args.out,
        args.plot.as_ref(),
    )?;
    let mut shown = String::new();
    for (&(a, b, _), zz) in q.j.iter().take(4).zip(&observables.zz) {
        write!(shown, " zz[{a}:{b}]={zz:.4}").unwrap();
    }
    if q.j.is_empty() {
        for (i, sz) in observables.sz.iter().take(4).enumerate() {
            write!(shown, " sz[{i}]={sz:.4}").unwrap();
        }
    }
    Ok(format!(
        "pimc: {} spins, {} replicas, {},{shown}",
        q.n_spins,
        q.n_replicas,
        if exact { "exact" } else { "sampled" }
    ))
}

// ---------------------------------------------------------------------------
// hw

fn cmd_hw(args: &HwArgs) -> CliResult<String> {
    let text = read_input(&args.params)?;
    let file = parse_hw_params(&text).map_err(core_fail)?;
    let mut hash = ConfigHash::new("hw");
    hash.file("params", &text);
    let meta = ArtifactMeta {
        command: "hw".into(),
        seed: None,
        config_hash: hash.finish(),
    };
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    if let Some(magnet) = &file.magnet {
        let barrier = barrier_and_lifetime(magnet).map_err(core_fail)?;
        rows.push(format!("barrier_energy,{},J", barrier.barrier_joules));
        rows.push(format!("barrier,{},kT", barrier.barrier_kt));
        rows.push(format!("lifetime,{},s", barrier.lifetime_seconds));
        let pinning = pinning_currents(magnet, file.drive_current).map_err(core_fail)?;
        rows.push(format!("pinning_current_pma,{},A", pinning.i_pma));
        rows.push(format!("pinning_current_ima,{},A", pinning.i_ima));
        if let Some(i_spin) = pinning.i_spin {
            rows.push(format!("spin_current,{i_spin},A"));
        }
        notes.push(format!(
            "barrier {:.2} kT, lifetime {:.3e} s",
            barrier.barrier_kt, barrier.lifetime_seconds
        ));
    }
    if let Some(circuit) = &file.circuit {
        if !circuit.c.is_empty() {
            let weights = capacitive_weights(circuit).map_err(core_fail)?;
            for (j, w) in weights.exact.iter().enumerate() {
                rows.push(format!("capacitive_weight_exact[{j}],{w},dimensionless"));
            }
            for (j, w) in weights.approximate.iter().enumerate() {
                rows.push(format!("capacitive_weight_ideal[{j}],{w},dimensionless"));
            }
            rows.push(format!(
                "capacitive_weight_error,{},dimensionless",
                weights.max_rel_err
            ));
            rows.push(format!(
                "capacitive_approx_valid,{},bool",
                u8::from(weights.approx_valid)
            ));
            notes.push(format!(
                "{} capacitive weights ({})",
                weights.exact.len(),
                if weights.approx_valid {
                    "ideal within 1%"
                } else {
                    "ideal off by >1%"
                }
            ));
        }
        if !circuit.g.is_empty() {
            let weights = conductance_weights(circuit).map_err(core_fail)?;
            for (j, w) in weights.exact.iter().enumerate() {
                rows.push(format!("conductance_weight_exact[{j}],{w},dimensionless"));
            }
            for (j, w) in weights.approximate.iter().enumerate() {
                rows.push(format!("conductance_weight_ideal[{j}],{w},dimensionless"));
            }
            rows.push(format!(
                "conductance_weight_error,{},dimensionless",
                weights.max_rel_err
            ));
            rows.push(format!(
                "conductance_approx_valid,{},bool",
                u8::from(weights.approx_valid)
            ));
            notes.push(format!("{} conductance weights", weights.exact.len()));
        }
        if let Some(transfer) = &file.transfer {
            let fit = hardware_transfer_sweep(circuit, &transfer.v_in, &transfer.r_t)
                .map_err(core_fail)?;
            if let (Some(v_0), Some(v_mid)) = (fit.v_0, fit.v_mid) {
                rows.push(format!("transfer_v0,{v_0},V"));
                rows.push(format!("transfer_v_mid,{v_mid},V"));
                rows.push(format!("transfer_residual,{},V", fit.residual));
                notes.push(format!("transfer v0 {v_0:.4} V"));
            } else {
                notes.push("degenerate transfer sweep".into());
            }
            rows.push(format!(
                "transfer_degenerate,{},bool",
                u8::from(fit.degenerate)
            ));
        }
    }
    emit(
        &meta,
        "quantity,value,unit",
        &rows,
        &args.out,
        args.plot.as_ref(),
    )?;
    Ok(format!("hw: {}", notes.join(", ")))
}
