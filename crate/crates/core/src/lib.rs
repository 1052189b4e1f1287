//! Simulation engine for networks of probabilistic bits.
//!
//! A p-bit is a stochastic unit that fluctuates between -1 and +1 with a
//! probability steered by its input: `m = sgn(tanh(I) - r)` with `r` uniform
//! on [-1, 1). Wire such units together through a weighted synapse
//! `I_i = h_i + Σ_j w_ij m_j` and a symmetric network equilibrates to a
//! Boltzmann distribution, a directed acyclic one realizes ancestral
//! (Bayesian-network) sampling. On top of that substrate this crate provides:
//!
//! - chain schedulers (sequential, random-scan, Poisson-asynchronous with a
//!   stale-synapse delay) with bit-packed, seed-reproducible traces;
//! - exact brute-force enumeration of energies and probabilities at desk
//!   scale, the ground truth for every statistical test;
//! - synthesis of invertible logic gates by exact maximum-likelihood
//!   learning, runnable forward (clamp inputs) or backward (clamp outputs);
//! - pedigree-style directed networks and time-averaged correlation
//!   estimation, plus a small bipolar restricted Boltzmann machine trained
//!   by contrastive divergence;
//! - simulated annealing with a geometric gain schedule, a traveling-salesman
//!   encoding, and a replica (path-integral) mapping of transverse-field
//!   Ising models with quantum annealing on top;
//! - behavioral formulas for a magnet/transistor hardware p-bit: barrier
//!   lifetime, voltage divider, scaled stochastic output, synapse weight
//!   matrices, and pinning currents.

pub mod anneal;
pub mod error;
pub mod genetic;
pub mod hardware;
pub mod hist;
pub mod io;
pub mod logic;
pub mod network;
pub mod oracle;
pub mod pimc;
pub mod rbm;
pub mod rng;
pub mod sampler;
pub mod tsp;

pub use anneal::{anneal, anneal_stream, AnnealResult, AnnealSchedule};
pub use error::{Error, Result};
pub use genetic::{build_genetic_network, correlate, CorrelationRequest, FamilyTree};
pub use hardware::{
    barrier_and_lifetime, capacitive_weights, conductance_weights, fit_transfer,
    hardware_transfer_sweep, mean_output_voltage, mtj_divider, pinning_currents, scaled_bsn,
    BarrierLifetime, CircuitParams, MagnetParams, PinningCurrents, TransferFit, WeightModel,
};
pub use hist::{total_variation, Histogram};
pub use logic::{compose, run_direct, run_inverse, synthesize, GateMatrix, SynthOptions, TruthTable};
pub use network::{natural_order, state_index, NetworkSpec, StateVector, MAX_ENUM_BITS};
pub use oracle::{
    energy, enumerate, enumerate_directed, kl, kl_divergence, magnetization, pair_correlation,
    EnergyTable,
};
pub use pimc::{
    measure, observables_from_table, observables_from_trace, pimc_map, quantum_anneal,
    QuantumIsingSpec, ReplicaObservables,
};
pub use rbm::{
    bars_and_stripes_2x2, cd_step, data_distribution, exact_gradient_step, joint_distribution,
    visible_marginal, RbmSpec,
};
pub use sampler::{
    bsn_update_binary, bsn_update_bipolar, run_chain, run_chain_stream, run_chains, synapse_input,
    RecordPolicy, SampleTrace, ScheduleMode, UpdateSchedule,
};
pub use tsp::{
    brute_force_optimum, decode_tour, solve_tsp, tsp_encode, DecodedTour, TspEncoding, TspInstance,
};
