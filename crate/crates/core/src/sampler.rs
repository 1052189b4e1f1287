//! Stochastic-unit updates and the three chain schedulers.
//!
//! The update rule is `m = sgn(tanh(I) - r)` with `r` uniform on [-1, 1),
//! which flips a bit to +1 with probability `(1 + tanh I)/2`. Chains differ
//! only in who gets updated when: a fixed 0..n scan, uniformly random picks,
//! or independent Poisson clocks with an optional stale-synapse delay.

use std::collections::VecDeque;

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::{NetworkSpec, StateVector};
use crate::rng::{chain_rng, uniform_pm1};

/// Who gets updated when.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleMode {
    /// Visit indices 0..n in order, once per sweep.
    SequentialScan,
    /// n uniform picks among the unclamped indices per sweep.
    RandomScan,
    /// Every free bit carries an independent rate-1 Poisson clock; events fire
    /// in continuous time and read the network state as it was `synapse_delay`
    /// time units earlier.
    PoissonAsync,
}

/// A complete run request: scheduler, length, delay, and RNG seed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpdateSchedule {
    pub mode: ScheduleMode,
    /// Number of sweeps; one sweep is n updates (sequential: one visit per
    /// bit; poisson-async: one event per free bit on average).
    pub sweeps: u64,
    /// Staleness of the state read by poisson-async updates, in units of the
    /// mean per-bit flip-attempt interval. Zero reads the live state.
    pub synapse_delay: f64,
    /// Master seed; chain k draws from stream k of this seed.
    pub seed: u64,
}

impl UpdateSchedule {
    pub fn sequential(sweeps: u64, seed: u64) -> Self {
        UpdateSchedule {
            mode: ScheduleMode::SequentialScan,
            sweeps,
            synapse_delay: 0.0,
            seed,
        }
    }

    pub fn random(sweeps: u64, seed: u64) -> Self {
        UpdateSchedule {
            mode: ScheduleMode::RandomScan,
            sweeps,
            synapse_delay: 0.0,
            seed,
        }
    }

    pub fn poisson(sweeps: u64, synapse_delay: f64, seed: u64) -> Self {
        UpdateSchedule {
            mode: ScheduleMode::PoissonAsync,
            sweeps,
            synapse_delay,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 {
            return Err(Error::InvalidSchedule("sweeps must be >= 1".into()));
        }
        if !self.synapse_delay.is_finite() || self.synapse_delay < 0.0 {
            return Err(Error::InvalidSchedule(
                "synapse_delay must be finite and >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// Which states a run keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordPolicy {
    /// One snapshot at the end of every sweep.
    PerSweep,
    /// One snapshot after every single update.
    PerEvent,
    /// One snapshot at the end of every k-th sweep.
    Thinned(u64),
}

impl RecordPolicy {
    fn validate(&self) -> Result<()> {
        if let RecordPolicy::Thinned(0) = self {
            return Err(Error::InvalidSchedule("thinning factor must be >= 1".into()));
        }
        Ok(())
    }
}

/// Time-ordered record of configurations, bit-packed (bit = 1 means +1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleTrace {
    n: usize,
    stride: usize,
    words: Vec<u64>,
    len: usize,
    pub record_policy: RecordPolicy,
    pub seed: u64,
}

impl SampleTrace {
    fn with_capacity(n: usize, snapshots: usize, record_policy: RecordPolicy, seed: u64) -> Self {
        let stride = n.div_ceil(64);
        SampleTrace {
            n,
            stride,
            words: Vec::with_capacity(snapshots.saturating_mul(stride)),
            len: 0,
            record_policy,
            seed,
        }
    }

    fn push(&mut self, m: &[i8]) {
        debug_assert_eq!(m.len(), self.n);
        let base = self.words.len();
        self.words.resize(base + self.stride, 0);
        for (i, &v) in m.iter().enumerate() {
            if v == 1 {
                self.words[base + i / 64] |= 1u64 << (i % 64);
            }
        }
        self.len += 1;
    }

    /// Number of recorded snapshots.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of p-bits per snapshot.
    pub fn n_bits(&self) -> usize {
        self.n
    }

    /// Value of p-bit `i` in snapshot `t`, as -1 or +1.
    pub fn bit(&self, t: usize, i: usize) -> i8 {
        debug_assert!(t < self.len && i < self.n);
        let word = self.words[t * self.stride + i / 64];
        if (word >> (i % 64)) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    /// Unpacks snapshot `t`; the epoch field carries the snapshot ordinal.
    pub fn state(&self, t: usize) -> StateVector {
        let m = (0..self.n).map(|i| self.bit(t, i)).collect();
        StateVector {
            m,
            epoch: t as u64,
        }
    }
}

/// Bipolar stochastic-unit update: `sgn(tanh(input) - r)` with `sgn(0) = +1`.
///
/// For `r` uniform on [-1, 1) this returns +1 with probability
/// `(1 + tanh input)/2`, so large positive inputs pin the bit to +1 and
/// large negative inputs to -1.
pub fn bsn_update_bipolar(input: f64, r: f64) -> i8 {
    debug_assert!((-1.0..1.0).contains(&r));
    if input.tanh() - r >= 0.0 {
        1
    } else {
        -1
    }
}

/// Binary-variable form of the same unit: `Θ(σ(2·input) - r0)` with `Θ(0) = 1`
/// and `σ` the logistic function.
///
/// Because `σ(2I) = (1 + tanh I)/2`, this returns 1 with exactly the same
/// probability that [`bsn_update_bipolar`] returns +1.
pub fn bsn_update_binary(input: f64, r0: f64) -> u8 {
    debug_assert!((0.0..1.0).contains(&r0));
    let p_one = 0.5 * (1.0 + input.tanh());
    u8::from(p_one - r0 >= 0.0)
}

/// Synapse input `I_i = h_i + Σ_j w_ij m_j` for p-bit `i` in the given state.
///
/// Walks the sparse entry list; chain runners precompile the adjacency
/// instead of calling this per update.
pub fn synapse_input(spec: &NetworkSpec, state: &StateVector, i: usize) -> Result<f64> {
    if i >= spec.n {
        return Err(Error::IndexOutOfRange { index: i, n: spec.n });
    }
    if state.len() != spec.n {
        return Err(Error::LengthMismatch {
            expected: spec.n,
            got: state.len(),
        });
    }
    let mut input = spec.biases[i];
    for &(row, j, w) in &spec.weights {
        if row == i {
            input += w * f64::from(state.m[j]);
        }
    }
    Ok(input)
}

/// Precompiled network view used by the inner loops.
pub(crate) struct Compiled {
    pub rows: Vec<Vec<(usize, f64)>>,
    pub biases: Vec<f64>,
    pub free: Vec<usize>,
}

impl Compiled {
    pub fn new(spec: &NetworkSpec) -> Self {
        Compiled {
            rows: spec.rows(),
            biases: spec.biases.clone(),
            free: spec.free_indices(),
        }
    }

    #[inline]
    pub fn input(&self, m: &[i8], i: usize) -> f64 {
        let mut input = self.biases[i];
        for &(j, w) in &self.rows[i] {
            input += w * f64::from(m[j]);
        }
        input
    }
}

/// One random-scan sweep: n uniform picks among the free bits, with every
/// weight and bias multiplied by `scale`. Shared with the annealer.
pub(crate) fn random_scan_sweep(
    c: &Compiled,
    n: usize,
    m: &mut [i8],
    rng: &mut ChaCha8Rng,
    scale: f64,
    epoch: &mut u64,
) {
    use rand::Rng;
    if c.free.is_empty() {
        return;
    }
    for _ in 0..n {
        let i = c.free[rng.random_range(0..c.free.len())];
        let input = scale * c.input(m, i);
        let r = uniform_pm1(rng);
        m[i] = bsn_update_bipolar(input, r);
        *epoch += 1;
    }
}

/// Initial state for a chain: the caller's, or a uniform draw; clamps applied.
fn initial_state(
    spec: &NetworkSpec,
    init: Option<&StateVector>,
    rng: &mut ChaCha8Rng,
) -> Result<StateVector> {
    let mut state = match init {
        Some(s) => {
            if s.len() != spec.n {
                return Err(Error::LengthMismatch {
                    expected: spec.n,
                    got: s.len(),
                });
            }
            StateVector::new(s.m.clone())?
        }
        None => StateVector::uniform_random(spec.n, rng),
    };
    state.apply_clamps(spec);
    Ok(state)
}

/// Runs a single chain on RNG stream 0. See [`run_chain_stream`].
pub fn run_chain(
    spec: &NetworkSpec,
    schedule: &UpdateSchedule,
    init: Option<&StateVector>,
    policy: RecordPolicy,
) -> Result<SampleTrace> {
    run_chain_stream(spec, schedule, init, policy, 0)
}

/// Runs `n_chains` independent chains on streams 0..n_chains of the same seed.
///
/// Chain k's trace is bit-identical to running it alone on stream k, so
/// results never depend on how many chains were requested.
pub fn run_chains(
    spec: &NetworkSpec,
    schedule: &UpdateSchedule,
    init: Option<&StateVector>,
    policy: RecordPolicy,
    n_chains: u64,
) -> Result<Vec<SampleTrace>> {
    (0..n_chains)
        .map(|k| run_chain_stream(spec, schedule, init, policy, k))
        .collect()
}

/// Runs one chain on an explicit RNG stream of the schedule's seed.
pub fn run_chain_stream(
    spec: &NetworkSpec,
    schedule: &UpdateSchedule,
    init: Option<&StateVector>,
    policy: RecordPolicy,
    stream: u64,
) -> Result<SampleTrace> {
    use rand::Rng;

    spec.validate()?;
    schedule.validate()?;
    policy.validate()?;

    let mut rng = chain_rng(schedule.seed, stream);
    let c = Compiled::new(spec);
    let mut state = initial_state(spec, init, &mut rng)?;
    let sweeps = schedule.sweeps;

    let snapshots = match policy {
        RecordPolicy::PerSweep => sweeps as usize,
        RecordPolicy::Thinned(k) => (sweeps / k) as usize,
        RecordPolicy::PerEvent => (sweeps as usize).saturating_mul(c.free.len().max(1)),
    };
    let mut trace = SampleTrace::with_capacity(spec.n, snapshots, policy, schedule.seed);

    let record_sweep = |trace: &mut SampleTrace, sweep: u64, m: &[i8]| match policy {
        RecordPolicy::PerSweep => trace.push(m),
        RecordPolicy::Thinned(k) => {
            if sweep % k == 0 {
                trace.push(m)
            }
        }
        RecordPolicy::PerEvent => {}
    };

    match schedule.mode {
        ScheduleMode::SequentialScan => {
            let clamp = spec.clamp_of();
            for sweep in 1..=sweeps {
                for i in 0..spec.n {
                    if clamp[i].is_some() {
                        continue;
                    }
                    let input = c.input(&state.m, i);
                    let r = uniform_pm1(&mut rng);
                    state.m[i] = bsn_update_bipolar(input, r);
                    state.epoch += 1;
                    if policy == RecordPolicy::PerEvent {
                        trace.push(&state.m);
                    }
                }
                record_sweep(&mut trace, sweep, &state.m);
            }
        }
        ScheduleMode::RandomScan => {
            for sweep in 1..=sweeps {
                if policy == RecordPolicy::PerEvent {
                    if !c.free.is_empty() {
                        for _ in 0..spec.n {
                            let i = c.free[rng.random_range(0..c.free.len())];
                            let input = c.input(&state.m, i);
                            let r = uniform_pm1(&mut rng);
                            state.m[i] = bsn_update_bipolar(input, r);
                            state.epoch += 1;
                            trace.push(&state.m);
                        }
                    }
                } else {
                    random_scan_sweep(&c, spec.n, &mut state.m, &mut rng, 1.0, &mut state.epoch);
                }
                record_sweep(&mut trace, sweep, &state.m);
            }
        }
        ScheduleMode::PoissonAsync => {
            let n_free = c.free.len();
            let delay = schedule.synapse_delay;
            let rate = n_free as f64;
            // The state each update reads: everything that happened up to
            // `delay` time units ago. Younger events wait in the queue.
            let mut delayed = state.m.clone();
            let mut pending: VecDeque<(f64, usize, i8)> = VecDeque::new();
            let mut t = 0.0_f64;
            for sweep in 1..=sweeps {
                // One sweep = one event per free bit on average (rate n_free
                // for one unit of time).
                for _ in 0..n_free {
                    let u: f64 = rng.random();
                    t += -(1.0 - u).ln() / rate;
                    while pending
                        .front()
                        .is_some_and(|&(te, _, _)| te <= t - delay)
                    {
                        let (_, idx, val) = pending.pop_front().unwrap();
                        delayed[idx] = val;
                    }
                    let i = c.free[rng.random_range(0..n_free)];
                    let input = c.input(&delayed, i);
                    let r = uniform_pm1(&mut rng);
                    let v = bsn_update_bipolar(input, r);
                    state.m[i] = v;
                    state.epoch += 1;
                    pending.push_back((t, i, v));
                    if policy == RecordPolicy::PerEvent {
                        trace.push(&state.m);
                    }
                }
                record_sweep(&mut trace, sweep, &state.m);
            }
        }
    }
    Ok(trace)
}
