//! Simulated annealing on a symmetric network by inverse-temperature ramp.
//!
//! Instead of rescaling a temperature, the annealer multiplies every weight
//! and bias by a gain `I0` that grows geometrically: low gain lets the chain
//! hop between basins, high gain freezes it into a minimum. Energies are
//! always reported for the *unscaled* network, so traces from different
//! schedules are comparable.

use crate::error::{Error, Result};
use crate::network::{NetworkSpec, StateVector};
use crate::rng::chain_rng;
use crate::sampler::{random_scan_sweep, Compiled};

/// Geometric gain ramp: `stages` stages of `t_eq` random-scan sweeps each,
/// starting at gain `i0_initial` and multiplying by `growth` after each stage.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnealSchedule {
    pub i0_initial: f64,
    pub growth: f64,
    pub t_eq: u64,
    pub stages: usize,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        AnnealSchedule {
            i0_initial: 0.1,
            growth: 1.0 / 0.99,
            t_eq: 50,
            stages: 600,
        }
    }
}

impl AnnealSchedule {
    pub fn validate(&self) -> Result<()> {
        if !(self.i0_initial > 0.0) || !self.i0_initial.is_finite() {
            return Err(Error::InvalidSchedule(
                "initial gain must be positive and finite".into(),
            ));
        }
        if !(self.growth > 0.0) || !self.growth.is_finite() {
            return Err(Error::InvalidSchedule(
                "gain growth factor must be positive and finite".into(),
            ));
        }
        if self.t_eq == 0 {
            return Err(Error::InvalidSchedule("t_eq must be >= 1".into()));
        }
        if self.stages == 0 {
            return Err(Error::InvalidSchedule("stages must be >= 1".into()));
        }
        Ok(())
    }
}

/// Outcome of one annealing run.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnealResult {
    /// Lowest-energy state observed anywhere in the run.
    pub best_state: StateVector,
    pub best_energy: f64,
    /// Best energy observed up to and including each stage (non-increasing).
    pub stage_best: Vec<f64>,
}

/// Anneals on RNG stream 0. See [`anneal_stream`].
pub fn anneal(spec: &NetworkSpec, schedule: &AnnealSchedule, seed: u64) -> Result<AnnealResult> {
    anneal_stream(spec, schedule, seed, 0)
}

/// Runs the gain ramp on one RNG stream and returns the best state seen.
///
/// The energy of every visited state is checked after each sweep, so the
/// result is the minimum over the whole trajectory, not the final state —
/// a late-stage fluctuation cannot lose an earlier, better minimum.
pub fn anneal_stream(
    spec: &NetworkSpec,
    schedule: &AnnealSchedule,
    seed: u64,
    stream: u64,
) -> Result<AnnealResult> {
    spec.validate()?;
    if !spec.symmetric {
        return Err(Error::NotSymmetric);
    }
    schedule.validate()?;
    let compiled = Compiled::new(spec);
    let pairs: Vec<(usize, usize, f64)> = spec
        .weights
        .iter()
        .filter(|&&(i, j, _)| i < j)
        .copied()
        .collect();
    let energy_of = |m: &[i8]| -> f64 {
        let mut e = 0.0;
        for &(i, j, w) in &pairs {
            e -= w * f64::from(m[i]) * f64::from(m[j]);
        }
        for (i, &h) in spec.biases.iter().enumerate() {
            e -= h * f64::from(m[i]);
        }
        e
    };

    let mut rng = chain_rng(seed, stream);
    let mut state = StateVector::uniform_random(spec.n, &mut rng);
    state.apply_clamps(spec);
    let mut epoch = 0u64;
    let mut best_state = state.clone();
    let mut best_energy = energy_of(&state.m);
    let mut stage_best = Vec::with_capacity(schedule.stages);
    let mut gain = schedule.i0_initial;
    for _ in 0..schedule.stages {
        for _ in 0..schedule.t_eq {
            random_scan_sweep(&compiled, spec.n, &mut state.m, &mut rng, gain, &mut epoch);
            let e = energy_of(&state.m);
            if e < best_energy {
                best_energy = e;
                best_state = StateVector {
                    m: state.m.clone(),
                    epoch,
                };
            }
        }
        stage_best.push(best_energy);
        gain *= schedule.growth;
    }
    Ok(AnnealResult {
        best_state,
        best_energy,
        stage_best,
    })
}
