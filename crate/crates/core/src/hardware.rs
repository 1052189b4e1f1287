//! Behavioral models of a hardware p-bit built from a low-barrier nanomagnet
//! in an MTJ (magnetic tunnel junction) stack: thermal stability and
//! fluctuation lifetime, the drive currents that pin the magnet, the
//! transistor/MTJ voltage divider that reads it out, analog weight mappings,
//! and a tanh fit that extracts the transfer scale from a measured sweep.
//!
//! Everything is in SI units: fields in tesla, magnetization in A/m, volume
//! in m³, energies in joules, resistance in ohms, capacitance in farads,
//! conductance in siemens.

use crate::error::{Error, Result};
use crate::sampler::bsn_update_bipolar;
use serde::{Deserialize, Serialize};

/// Physical constants (SI, 2019 exact definitions).
pub mod constants {
    /// Elementary charge, C.
    pub const Q_E: f64 = 1.602_176_634e-19;
    /// Reduced Planck constant, J·s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Boltzmann constant, J/K.
    pub const K_B: f64 = 1.380_649e-23;
}

use constants::{HBAR, K_B, Q_E};

/// The free-layer nanomagnet and its thermal environment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagnetParams {
    /// Effective anisotropy field, T. Zero for a circular low-barrier magnet.
    pub h_k: f64,
    /// Demagnetizing field (in-plane geometry), T.
    pub h_d: f64,
    /// Saturation magnetization, A/m.
    pub m_s: f64,
    /// Free-layer volume, m³.
    pub volume: f64,
    /// Gilbert damping.
    pub alpha: f64,
    /// Temperature, K.
    pub temperature: f64,
    /// Attempt time of thermally activated switching, s.
    pub attempt_time: f64,
    /// Interface spin polarization, 0..=1.
    pub polarization: f64,
}

impl MagnetParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("m_s", self.m_s),
            ("volume", self.volume),
            ("alpha", self.alpha),
            ("temperature", self.temperature),
            ("attempt_time", self.attempt_time),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite"
                )));
            }
        }
        for (name, v) in [("h_k", self.h_k), ("h_d", self.h_d)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be >= 0 and finite"
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.polarization) {
            return Err(Error::InvalidParameter(
                "polarization must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// Thermal stability of a magnet and the fluctuation timescale it implies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BarrierLifetime {
    /// Energy barrier `H_K · M_s · V / 2`, J.
    pub barrier_joules: f64,
    /// The same barrier in units of k_B·T.
    pub barrier_kt: f64,
    /// Mean dwell time `attempt_time × exp(barrier_kt)`, s.
    pub lifetime_seconds: f64,
}

/// Barrier height and thermally activated lifetime of the free layer.
///
/// A stable memory magnet (barrier ≈ 40 k_B·T) dwells for years; shaving the
/// barrier to ~14 k_B·T brings the lifetime down to about a millisecond, and
/// a near-zero barrier fluctuates at the attempt time itself — that regime
/// is what makes the device a usable random bit.
pub fn barrier_and_lifetime(p: &MagnetParams) -> Result<BarrierLifetime> {
    p.validate()?;
    let barrier_joules = 0.5 * p.h_k * p.m_s * p.volume;
    let barrier_kt = barrier_joules / (K_B * p.temperature);
    Ok(BarrierLifetime {
        barrier_joules,
        barrier_kt,
        lifetime_seconds: p.attempt_time * barrier_kt.exp(),
    })
}

/// Currents that pin a fluctuating magnet to one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PinningCurrents {
    /// Spin current pinning a zero-barrier perpendicular magnet,
    /// `2 (q/ħ) α k_B T`, A.
    pub i_pma: f64,
    /// Spin current pinning a zero-barrier in-plane magnet,
    /// `2 (q/ħ) α H_D M_s V`, A.
    pub i_ima: f64,
    /// Spin current `polarization × drive` delivered by the given charge
    /// drive current, A.
    pub i_spin: Option<f64>,
}

/// Pinning scales for both magnet geometries, and the spin current a charge
/// drive current delivers through the interface polarization.
///
/// The in-plane pin current exceeds the perpendicular one by the ratio of
/// the demagnetizing energy `H_D M_s V` to the thermal energy `k_B T`, which
/// is why perpendicular zero-barrier magnets take far less current to steer.
pub fn pinning_currents(p: &MagnetParams, drive_current: Option<f64>) -> Result<PinningCurrents> {
    p.validate()?;
    if let Some(i_d) = drive_current {
        if !i_d.is_finite() {
            return Err(Error::NonFinite("drive current".into()));
        }
    }
    let i_pma = 2.0 * (Q_E / HBAR) * p.alpha * K_B * p.temperature;
    let i_ima = 2.0 * (Q_E / HBAR) * p.alpha * p.h_d * p.m_s * p.volume;
    Ok(PinningCurrents {
        i_pma,
        i_ima,
        i_spin: drive_current.map(|i_d| p.polarization * i_d),
    })
}

/// The read-out and coupling circuit around one p-bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    /// Supply voltage, V.
    pub v_dd: f64,
    /// Transfer scale of the synapse input, V.
    pub v_0: f64,
    /// MTJ parallel resistance, Ω.
    pub r_p: f64,
    /// MTJ antiparallel resistance, Ω.
    pub r_ap: f64,
    /// Input-node self (load) capacitance, F.
    pub c_0: f64,
    /// Coupling capacitances into the input node, F.
    pub c: Vec<f64>,
    /// Input-node self conductance, S.
    pub g_0: f64,
    /// Coupling conductances into the input node, S.
    pub g: Vec<f64>,
}

impl CircuitParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("v_dd", self.v_dd),
            ("v_0", self.v_0),
            ("r_p", self.r_p),
            ("r_ap", self.r_ap),
            ("c_0", self.c_0),
            ("g_0", self.g_0),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite"
                )));
            }
        }
        if self.r_ap <= self.r_p {
            return Err(Error::InvalidParameter(
                "r_ap must exceed r_p".into(),
            ));
        }
        for (name, list) in [("c", &self.c), ("g", &self.g)] {
            for (k, &v) in list.iter().enumerate() {
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "{name}[{k}] must be >= 0 and finite"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Midpoint-referenced output of the transistor/MTJ voltage divider:
/// `(v_dd/2) (r_transistor - r_mtj) / (r_transistor + r_mtj)`.
///
/// Zero when the branch resistances match; swapping them flips the sign.
pub fn mtj_divider(v_dd: f64, r_transistor: f64, r_mtj: f64) -> Result<f64> {
    for (name, v) in [
        ("v_dd", v_dd),
        ("r_transistor", r_transistor),
        ("r_mtj", r_mtj),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "{name} must be positive and finite"
            )));
        }
    }
    Ok(0.5 * v_dd * (r_transistor - r_mtj) / (r_transistor + r_mtj))
}

/// Mean divider output when the MTJ fluctuates evenly between its parallel
/// and antiparallel resistances, as a function of the transistor operating
/// resistance. Sweeping the transistor traces out the device's sigmoid.
pub fn mean_output_voltage(c: &CircuitParams, r_transistor: f64) -> Result<f64> {
    c.validate()?;
    Ok(0.5
        * (mtj_divider(c.v_dd, r_transistor, c.r_p)?
            + mtj_divider(c.v_dd, r_transistor, c.r_ap)?))
}

/// One stochastic output sample of a hardware p-bit: the core update rule on
/// the normalized input `v_in / v_0`, scaled to rail voltages `±v_dd/2`.
/// Invariant under scaling `v_in` and `v_0` together.
pub fn scaled_bsn(v_in: f64, v_0: f64, v_dd: f64, r: f64) -> f64 {
    0.5 * v_dd * f64::from(bsn_update_bipolar(v_in / v_0, r))
}

/// An analog weight row realized by physical coupling elements.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightModel {
    /// Exact divider weights `(v_dd / 2 v_0) · x_j / (x_0 + Σ x)`.
    pub exact: Vec<f64>,
    /// Idealized weights `(v_dd / 2 v_0) · x_j / x_0`, which ignore the
    /// loading of the summing node by the coupling elements.
    pub approximate: Vec<f64>,
    /// Worst relative error of the approximation, `Σx / (x_0 + Σx)` — the
    /// same for every element of the row.
    pub max_rel_err: f64,
    /// Whether the idealization is within 1%.
    pub approx_valid: bool,
}

fn divider_weights(v_dd: f64, v_0: f64, x_0: f64, x: &[f64]) -> WeightModel {
    let gain = 0.5 * v_dd / v_0;
    let total: f64 = x.iter().sum();
    let exact = x.iter().map(|&xj| gain * xj / (x_0 + total)).collect();
    let approximate = x.iter().map(|&xj| gain * xj / x_0).collect();
    let max_rel_err = total / (x_0 + total);
    WeightModel {
        exact,
        approximate,
        max_rel_err,
        approx_valid: max_rel_err < 0.01,
    }
}

/// Weights realized by the capacitive voltage divider `c` against `c_0`.
pub fn capacitive_weights(c: &CircuitParams) -> Result<WeightModel> {
    c.validate()?;
    Ok(divider_weights(c.v_dd, c.v_0, c.c_0, &c.c))
}

/// Weights realized by the resistive (conductance) divider `g` against `g_0`.
pub fn conductance_weights(c: &CircuitParams) -> Result<WeightModel> {
    c.validate()?;
    Ok(divider_weights(c.v_dd, c.v_0, c.g_0, &c.g))
}

/// Result of fitting `v_out = (v_dd/2) tanh((v_in - v_mid) / v_0)` to a
/// measured sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferFit {
    /// Fitted transfer scale, in the sweep's input units.
    pub v_0: Option<f64>,
    /// Fitted input offset of the sigmoid's midpoint.
    pub v_mid: Option<f64>,
    /// RMS output residual of the fit over all points, output units.
    pub residual: f64,
    /// True when the sweep carries no usable sigmoid (flat, saturated
    /// everywhere, or sloping the wrong way); `v_0`/`v_mid` are `None`.
    pub degenerate: bool,
}

/// Extracts the transfer scale from measured input/output voltage pairs.
///
/// Points are linearized through `atanh(2 v_out / v_dd)` and fitted by least
/// squares; saturated points (normalized output within 0.1% of the rails)
/// are excluded from the fit but still counted in the residual. Inputs must
/// be strictly increasing.
pub fn fit_transfer(inputs: &[f64], outputs: &[f64], v_dd: f64) -> Result<TransferFit> {
    if inputs.len() != outputs.len() {
        return Err(Error::LengthMismatch {
            expected: inputs.len(),
            got: outputs.len(),
        });
    }
    if inputs.len() < 3 {
        return Err(Error::InvalidParameter(
            "a sweep needs at least three points".into(),
        ));
    }
    if !(v_dd > 0.0) || !v_dd.is_finite() {
        return Err(Error::InvalidParameter("v_dd must be positive and finite".into()));
    }
    if inputs.iter().chain(outputs).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("sweep point".into()));
    }
    for pair in inputs.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::NonMonotoneTable);
        }
    }
    // Usable points: unsaturated normalized outputs.
    let mut xs = Vec::new(); // atanh-linearized outputs
    let mut ys = Vec::new(); // inputs
    for (&v_in, &v_out) in inputs.iter().zip(outputs) {
        let y = 2.0 * v_out / v_dd;
        if y.abs() < 0.999 {
            xs.push(y.atanh());
            ys.push(v_in);
        }
    }
    let spread = xs
        .iter()
        .fold(0.0_f64, |a, &x| a.max(x.abs()));
    let degenerate_fit = TransferFit {
        v_0: None,
        v_mid: None,
        residual: f64::NAN,
        degenerate: true,
    };
    if xs.len() < 2 || spread < 0.05 {
        return Ok(degenerate_fit);
    }
    // Least squares of input against linearized output: the slope is v_0.
    let n = xs.len() as f64;
    let mean_x: f64 = xs.iter().sum::<f64>() / n;
    let mean_y: f64 = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(&ys) {
        sxx += (x - mean_x).powi(2);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Ok(degenerate_fit);
    }
    let v_0 = sxy / sxx;
    if !(v_0 > 0.0) || !v_0.is_finite() {
        return Ok(degenerate_fit);
    }
    let v_mid = mean_y - v_0 * mean_x;
    let mut sq = 0.0;
    for (&v_in, &v_out) in inputs.iter().zip(outputs) {
        let model = 0.5 * v_dd * ((v_in - v_mid) / v_0).tanh();
        sq += (v_out - model).powi(2);
    }
    Ok(TransferFit {
        v_0: Some(v_0),
        v_mid: Some(v_mid),
        residual: (sq / inputs.len() as f64).sqrt(),
        degenerate: false,
    })
}

/// Characterizes a p-bit from a tabulated transistor curve `r_t(v_in)`.
///
/// For each sweep point the mean divider output over an even R_P/R_AP dwell
/// is computed from the circuit, then the resulting sigmoid is fitted by
/// [`fit_transfer`]. The resistance table may be flat (the fit comes back
/// degenerate) but must not change direction; the fit targets the
/// non-inverting arrangement, so a decreasing table also reports degenerate.
pub fn hardware_transfer_sweep(
    c: &CircuitParams,
    v_in: &[f64],
    r_t: &[f64],
) -> Result<TransferFit> {
    c.validate()?;
    if v_in.len() != r_t.len() {
        return Err(Error::LengthMismatch {
            expected: v_in.len(),
            got: r_t.len(),
        });
    }
    for (k, &r) in r_t.iter().enumerate() {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "r_t[{k}] must be positive and finite"
            )));
        }
    }
    let increasing = r_t.windows(2).all(|p| p[1] >= p[0]);
    let decreasing = r_t.windows(2).all(|p| p[1] <= p[0]);
    if !increasing && !decreasing {
        return Err(Error::NonMonotoneTable);
    }
    let outputs: Vec<f64> = r_t
        .iter()
        .map(|&r| mean_output_voltage(c, r))
        .collect::<Result<_>>()?;
    fit_transfer(v_in, &outputs, c.v_dd)
}
