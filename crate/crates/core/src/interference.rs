//! Closed-form efficiency and fidelity for the interference-based (IB) scheme
//! and its feedback variant (IBF).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{Bounded, Evaluation, Flags};
use crate::params::{eta_prime, CavitySet, DetectionChain, EmitterParams};

/// Below this γ′T_d the window ratio switches to its series expansion.
const SMALL_WINDOW: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferenceConfig {
    /// Detection window T_d, seconds.
    pub detection_time: f64,
    /// Spin-flip / feedback time δt, seconds.
    pub delta_t: f64,
    /// Optical frequency difference Δ between the emitters.
    pub delta: f64,
    /// Relative initialization phase φ.
    pub phi_init: f64,
    /// Relative propagation phase ϕ.
    pub phi_prop: f64,
}

impl InterferenceConfig {
    pub fn new(detection_time: f64, delta_t: f64) -> Self {
        Self { detection_time, delta_t, delta: 0.0, phi_init: 0.0, phi_prop: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.detection_time >= 0.0) {
            return Err(Error::domain(format!(
                "detection_time must be >= 0, got {}",
                self.detection_time
            )));
        }
        if !(self.delta_t >= 0.0) || self.delta_t.is_infinite() {
            return Err(Error::domain(format!("delta_t must be finite and >= 0, got {}", self.delta_t)));
        }
        Ok(())
    }

    fn has_mismatch(&self) -> bool {
        self.delta != 0.0 || self.phi_init != 0.0 || self.phi_prop != 0.0
    }
}

/// Emission-line FWHM Γ′ = γ′ + 2γ*.
pub fn emission_fwhm(cavity: &CavitySet, emitter: &EmitterParams) -> f64 {
    cavity.gamma_prime + 2.0 * emitter.gamma_star
}

/// (1 − e^{−bT}) / (1 − e^{−aT}), continuous at T = 0 where it tends to b/a.
fn window_ratio(a: f64, b: f64, t: f64) -> f64 {
    if a * t < SMALL_WINDOW && b * t < SMALL_WINDOW {
        (b / a) * (1.0 - 0.5 * (b - a) * t)
    } else {
        (-b * t).exp_m1() / (-a * t).exp_m1()
    }
}

/// 1 − e^{−zT} without cancellation for small |z|T.
fn one_minus_exp_neg(z: Complex64, t: f64) -> Complex64 {
    if t.is_infinite() {
        return Complex64::new(1.0, 0.0);
    }
    let (x, y) = (z.re * t, z.im * t);
    let half = (0.5 * y).sin();
    let re = -((-x).exp_m1() * y.cos() - 2.0 * half * half);
    let im = (-x).exp() * y.sin();
    Complex64::new(re, im)
}

pub fn ib_efficiency(cfg: &InterferenceConfig, cavity: &CavitySet, det: &DetectionChain) -> f64 {
    let ep = eta_prime(cavity, det);
    let w = -(-cavity.gamma_prime * cfg.detection_time).exp_m1();
    0.5 * ep * ep * w * w
}

/// T_IB = 2T_d + δt; the same expression holds for IBF.
pub fn interference_gate_time(cfg: &InterferenceConfig) -> f64 {
    2.0 * cfg.detection_time + cfg.delta_t
}

/// C̃_IB(T_d)/(1 − e^{−γ′T_d}).
fn ib_overlap(cfg: &InterferenceConfig, cavity: &CavitySet, emitter: &EmitterParams) -> f64 {
    let gs = emitter.spin_dephasing();
    let a = cavity.gamma_prime;
    let b = emission_fwhm(cavity, emitter) + gs;
    (a / b) * (-2.0 * gs * cfg.delta_t).exp() * window_ratio(a, b, cfg.detection_time)
}

pub fn ib_fidelity(cfg: &InterferenceConfig, cavity: &CavitySet, emitter: &EmitterParams) -> f64 {
    let c = ib_overlap(cfg, cavity, emitter);
    0.5 * (1.0 + c * c)
}

pub fn ibf_efficiency(cfg: &InterferenceConfig, cavity: &CavitySet, det: &DetectionChain) -> f64 {
    let ep = eta_prime(cavity, det);
    let gp = cavity.gamma_prime;
    let t = cfg.detection_time;
    ep * ep * (-gp * cfg.delta_t).exp() * -(-2.0 * gp * t).exp_m1() * -(-gp * t).exp_m1()
}

/// C̃_IBF(T_d)/(1 − e^{−γ′T_d}).
fn ibf_overlap(cfg: &InterferenceConfig, cavity: &CavitySet, emitter: &EmitterParams) -> f64 {
    let gs = emitter.spin_dephasing();
    let a = cavity.gamma_prime;
    let b = emission_fwhm(cavity, emitter) + gs;
    let decay = (-cfg.delta_t * (2.0 * emitter.gamma_star + gs)).exp();
    (a / b) * decay * window_ratio(a, b, cfg.detection_time)
}

pub fn ibf_fidelity(cfg: &InterferenceConfig, cavity: &CavitySet, emitter: &EmitterParams) -> f64 {
    0.5 * (1.0 + ibf_overlap(cfg, cavity, emitter))
}

/// IBF fidelity with frequency mismatch Δ and phase errors φ, ϕ.
///
/// Spin dephasing is excluded from this form, so any nonzero γ*_s is refused.
pub fn ibf_fidelity_mismatch(
    cfg: &InterferenceConfig,
    cavity: &CavitySet,
    emitter: &EmitterParams,
) -> Result<f64> {
    let gs = emitter.spin_dephasing();
    if gs.abs() > 0.0 {
        return Err(Error::Unsupported(format!(
            "frequency-mismatch IBF fidelity requires zero spin dephasing (got {gs:e} rad/s)"
        )));
    }
    let gp = cavity.gamma_prime;
    let t = cfg.detection_time;
    let z = Complex64::new(emission_fwhm(cavity, emitter), cfg.delta);
    let phase = Complex64::from_polar(1.0, cfg.phi_init + cfg.phi_prop);
    let flip = (-cfg.delta_t * Complex64::new(2.0 * emitter.gamma_star, cfg.delta)).exp();
    let window = if gp * t < SMALL_WINDOW && z.norm() * t < SMALL_WINDOW {
        (z / gp) * (1.0 - 0.5 * (z - gp) * t)
    } else {
        one_minus_exp_neg(z, t) / -(-gp * t).exp_m1()
    };
    let c = gp / z * flip * window * phase;
    Ok(0.5 * (1.0 + c.re))
}

fn check_inputs(cfg: &InterferenceConfig, cavity: &CavitySet, emitter: &EmitterParams) -> Result<()> {
    cfg.validate()?;
    emitter.validate()?;
    if !(cavity.gamma_prime > 0.0) {
        return Err(Error::domain("gamma_prime must be > 0"));
    }
    Ok(())
}

pub fn evaluate_ib(
    cfg: &InterferenceConfig,
    emitter: &EmitterParams,
    cavity: &CavitySet,
    det: &DetectionChain,
) -> Result<Evaluation> {
    check_inputs(cfg, cavity, emitter)?;
    if cfg.has_mismatch() {
        return Err(Error::Unsupported(
            "the IB closed form has no frequency-mismatch or phase-error terms".into(),
        ));
    }
    Ok(Evaluation::from_bounded(
        Bounded::new(ib_fidelity(cfg, cavity, emitter)),
        Bounded::new(ib_efficiency(cfg, cavity, det)),
        interference_gate_time(cfg),
        Flags::default(),
    ))
}

/// IBF metrics; switches to the mismatch form whenever Δ, φ or ϕ is nonzero.
pub fn evaluate_ibf(
    cfg: &InterferenceConfig,
    emitter: &EmitterParams,
    cavity: &CavitySet,
    det: &DetectionChain,
) -> Result<Evaluation> {
    check_inputs(cfg, cavity, emitter)?;
    let fidelity = if cfg.has_mismatch() {
        ibf_fidelity_mismatch(cfg, cavity, emitter)?
    } else {
        ibf_fidelity(cfg, cavity, emitter)
    };
    Ok(Evaluation::from_bounded(
        Bounded::new(fidelity),
        Bounded::new(ibf_efficiency(cfg, cavity, det)),
        interference_gate_time(cfg),
        Flags::default(),
    ))
}
