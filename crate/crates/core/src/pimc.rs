//! Path-integral mapping: a transverse-field Ising model becomes a classical
//! network of replicated spins whose equilibrium averages estimate the
//! quantum thermal averages.
//!
//! The quantum Hamiltonian is `H = -Σ J_ij σz_i σz_j - Σ h_i σz_i -
//! Γ Σ σx_i`. With `R` replicas at inverse temperature `β`, replica `k`
//! carries the z-couplings scaled by `β/R`, and each spin is coupled to its
//! own copy in the next replica around a ring with weight `½ ln coth(βΓ/R)`.
//! The approximation tightens as `R` grows; `R = 1` with `Γ = 0` is the
//! plain classical model at inverse temperature `β`.

use crate::error::{Error, Result};
use crate::network::{NetworkSpec, StateVector};
use crate::oracle::{magnetization, pair_correlation, EnergyTable};
use crate::rng::chain_rng;
use crate::sampler::{random_scan_sweep, run_chain, Compiled, RecordPolicy, SampleTrace, UpdateSchedule};

/// A transverse-field Ising model plus its discretization settings.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumIsingSpec {
    pub n_spins: usize,
    /// z-couplings, one entry per unordered spin pair.
    pub j: Vec<(usize, usize, f64)>,
    /// Longitudinal fields.
    pub h_z: Vec<f64>,
    /// Transverse field strength; zero means classical.
    pub gamma: f64,
    pub beta: f64,
    pub n_replicas: usize,
}

impl QuantumIsingSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_spins == 0 {
            return Err(Error::EmptyNetwork);
        }
        if self.h_z.len() != self.n_spins {
            return Err(Error::BiasLength {
                expected: self.n_spins,
                got: self.h_z.len(),
            });
        }
        if self.h_z.iter().any(|h| !h.is_finite()) {
            return Err(Error::NonFinite("longitudinal field".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &(i, j, jv) in &self.j {
            if i >= self.n_spins {
                return Err(Error::IndexOutOfRange { index: i, n: self.n_spins });
            }
            if j >= self.n_spins {
                return Err(Error::IndexOutOfRange { index: j, n: self.n_spins });
            }
            if i == j {
                return Err(Error::DiagonalWeight { i });
            }
            if !jv.is_finite() {
                return Err(Error::NonFinite(format!("coupling ({i}, {j})")));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::DuplicateWeight { i, j });
            }
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::InvalidParameter(
                "inverse temperature must be positive and finite".into(),
            ));
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidParameter(
                "transverse field must be >= 0 and finite".into(),
            ));
        }
        if self.n_replicas == 0 {
            return Err(Error::InvalidParameter(
                "need at least one replica".into(),
            ));
        }
        if self.gamma == 0.0 && self.n_replicas > 1 {
            return Err(Error::ZeroGammaReplicas {
                n_replicas: self.n_replicas,
            });
        }
        if self.gamma > 0.0 && self.n_replicas < 2 {
            return Err(Error::InvalidParameter(
                "a nonzero transverse field needs at least two replicas".into(),
            ));
        }
        Ok(())
    }

    pub fn n_bits(&self) -> usize {
        self.n_spins * self.n_replicas
    }

    /// Network index of `spin` inside `replica`.
    pub fn replica_index(&self, replica: usize, spin: usize) -> usize {
        replica * self.n_spins + spin
    }
}

/// Compiles the replicated classical network.
///
/// The two-replica ring visits each unordered replica pair twice, so those
/// couplings accumulate to twice the single-link weight — that is the
/// correct ring energy, not a special case.
pub fn pimc_map(q: &QuantumIsingSpec) -> Result<NetworkSpec> {
    q.validate()?;
    let n = q.n_spins;
    let r = q.n_replicas;
    let nt = n * r;
    let mut dense = vec![0.0_f64; nt * nt];
    let add = |d: &mut Vec<f64>, i: usize, j: usize, v: f64| {
        let (lo, hi) = (i.min(j), i.max(j));
        d[lo * nt + hi] += v;
    };
    let slice_scale = q.beta / r as f64;
    for k in 0..r {
        for &(i, j, jv) in &q.j {
            add(&mut dense, k * n + i, k * n + j, slice_scale * jv);
        }
    }
    if r > 1 {
        let j_perp = 0.5 * (1.0 / (q.beta * q.gamma / r as f64).tanh()).ln();
        for k in 0..r {
            for i in 0..n {
                add(&mut dense, k * n + i, ((k + 1) % r) * n + i, j_perp);
            }
        }
    }
    let mut biases = vec![0.0_f64; nt];
    for k in 0..r {
        for i in 0..n {
            biases[k * n + i] = slice_scale * q.h_z[i];
        }
    }
    NetworkSpec::from_dense_symmetric(nt, &dense, biases, Vec::new())
}

/// Replica-averaged estimates of the quantum observables.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplicaObservables {
    /// `⟨σz_i⟩` per spin.
    pub sz: Vec<f64>,
    /// `⟨σz_i σz_j⟩` per entry of the `QuantumIsingSpec` coupling list, in order.
    pub zz: Vec<f64>,
}

/// Observables from an exact enumeration of the mapped network.
pub fn observables_from_table(
    q: &QuantumIsingSpec,
    table: &EnergyTable,
) -> Result<ReplicaObservables> {
    q.validate()?;
    let nt = q.n_bits();
    if table.n != nt {
        return Err(Error::LengthMismatch {
            expected: nt,
            got: table.n,
        });
    }
    let r = q.n_replicas as f64;
    let mut sz = vec![0.0_f64; q.n_spins];
    for (i, slot) in sz.iter_mut().enumerate() {
        for k in 0..q.n_replicas {
            *slot += magnetization(&table.probabilities, nt, q.replica_index(k, i))? / r;
        }
    }
    let mut zz = vec![0.0_f64; q.j.len()];
    for (slot, &(i, j, _)) in zz.iter_mut().zip(&q.j) {
        for k in 0..q.n_replicas {
            *slot += pair_correlation(
                &table.probabilities,
                nt,
                q.replica_index(k, i),
                q.replica_index(k, j),
            )? / r;
        }
    }
    Ok(ReplicaObservables { sz, zz })
}

/// Observables from sampled snapshots, discarding the first `burn_in`.
pub fn observables_from_trace(
    q: &QuantumIsingSpec,
    trace: &SampleTrace,
    burn_in: usize,
) -> Result<ReplicaObservables> {
    q.validate()?;
    let nt = q.n_bits();
    if trace.n_bits() != nt {
        return Err(Error::LengthMismatch {
            expected: nt,
            got: trace.n_bits(),
        });
    }
    if burn_in >= trace.len() {
        return Err(Error::WindowTooLarge {
            window: burn_in,
            len: trace.len(),
        });
    }
    let kept = (trace.len() - burn_in) as f64;
    let r = q.n_replicas as f64;
    let mut sz = vec![0.0_f64; q.n_spins];
    let mut zz = vec![0.0_f64; q.j.len()];
    for t in burn_in..trace.len() {
        for (i, slot) in sz.iter_mut().enumerate() {
            for k in 0..q.n_replicas {
                *slot += f64::from(trace.bit(t, q.replica_index(k, i)));
            }
        }
        for (slot, &(i, j, _)) in zz.iter_mut().zip(&q.j) {
            for k in 0..q.n_replicas {
                *slot += f64::from(
                    trace.bit(t, q.replica_index(k, i)) * trace.bit(t, q.replica_index(k, j)),
                );
            }
        }
    }
    for v in sz.iter_mut().chain(zz.iter_mut()) {
        *v /= kept * r;
    }
    Ok(ReplicaObservables { sz, zz })
}

/// Maps, samples with a random-scan chain, and averages observables.
pub fn measure(
    q: &QuantumIsingSpec,
    sweeps: u64,
    burn_in: usize,
    seed: u64,
) -> Result<ReplicaObservables> {
    let spec = pimc_map(q)?;
    let schedule = UpdateSchedule::random(sweeps, seed);
    let trace = run_chain(&spec, &schedule, None, RecordPolicy::PerSweep)?;
    observables_from_trace(q, &trace, burn_in)
}

/// Anneals the transverse field down a schedule and reads out a classical
/// configuration by majority vote across replicas (ties break to +1).
///
/// `gammas` must be positive and strictly decreasing; the model is remapped
/// at each stage while the replicated state persists, so the chain cools
/// through progressively stiffer replica couplings.
pub fn quantum_anneal(
    q: &QuantumIsingSpec,
    gammas: &[f64],
    sweeps_per_stage: u64,
    seed: u64,
) -> Result<Vec<i8>> {
    q.validate()?;
    if q.n_replicas < 2 {
        return Err(Error::InvalidParameter(
            "annealing the transverse field needs at least two replicas".into(),
        ));
    }
    if gammas.is_empty() {
        return Err(Error::BadGammaSchedule("empty schedule".into()));
    }
    for pair in gammas.windows(2) {
        if !(pair[1] < pair[0]) {
            return Err(Error::BadGammaSchedule(
                "transverse field must strictly decrease".into(),
            ));
        }
    }
    if !gammas.iter().all(|g| g.is_finite() && *g > 0.0) {
        return Err(Error::BadGammaSchedule(
            "transverse field must stay positive".into(),
        ));
    }
    if sweeps_per_stage == 0 {
        return Err(Error::InvalidSchedule("sweeps_per_stage must be >= 1".into()));
    }
    let nt = q.n_bits();
    let mut rng = chain_rng(seed, 0);
    let mut state = StateVector::uniform_random(nt, &mut rng);
    let mut epoch = 0u64;
    for &gamma in gammas {
        let stage = QuantumIsingSpec {
            gamma,
            ..q.clone()
        };
        let spec = pimc_map(&stage)?;
        let compiled = Compiled::new(&spec);
        for _ in 0..sweeps_per_stage {
            random_scan_sweep(&compiled, nt, &mut state.m, &mut rng, 1.0, &mut epoch);
        }
    }
    let mut config = vec![0i8; q.n_spins];
    for (i, slot) in config.iter_mut().enumerate() {
        let vote: i32 = (0..q.n_replicas)
            .map(|k| i32::from(state.m[q.replica_index(k, i)]))
            .sum();
        *slot = if vote >= 0 { 1 } else { -1 };
    }
    Ok(config)
}
