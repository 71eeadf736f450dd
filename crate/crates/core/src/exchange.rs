//! Virtual-photon exchange gates: simple (VP) and Raman (RVP).

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{Bounded, Evaluation, Flag, Flags};
use crate::params::EmitterParams;

/// Ω/Δ above which the RVP adiabatic-elimination picture is flagged.
pub const RABI_RATIO_WARN: f64 = 0.1;
/// Ω/Δ above which RVP is refused.
pub const RABI_RATIO_MAX: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExchangeConfig {
    /// Optical-transition detuning Δ_ε between the emitters.
    pub delta_eps: f64,
    /// Difference of ground and excited splittings δ_eg.
    pub delta_eg: f64,
    /// Two-photon resonance error δ_ε (RVP).
    pub two_photon_error: f64,
    /// Cavity detuning Δ (RVP).
    pub cavity_detuning: f64,
    /// Raman Rabi frequency Ω (RVP).
    pub rabi: f64,
    /// g/κ, checked against the strong-coupling boundary.
    pub g_over_kappa: f64,
    /// Decoherence rate of the RVP shelving levels; 1/T2e when unset.
    pub shelving_decoherence: Option<f64>,
}

impl Default for ExchangeConfig {
    fn default() -> Self {
        let detuning = TAU * 10e9;
        Self {
            delta_eps: 0.0,
            delta_eg: TAU * 1.62e9,
            two_photon_error: 0.0,
            cavity_detuning: detuning,
            rabi: 0.1 * detuning,
            g_over_kappa: 0.008,
            shelving_decoherence: None,
        }
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) {
        return Err(Error::domain(format!("{name} must be > 0, got {v}")));
    }
    Ok(())
}

/// T_VP = 2π/(γ√C).
pub fn vp_gate_time(c: f64, gamma: f64) -> Result<f64> {
    check_positive("cooperativity", c)?;
    check_positive("gamma", gamma)?;
    Ok(TAU / (gamma * c.sqrt()))
}

pub fn vp_fidelity(cfg: &ExchangeConfig, c: f64, emitter: &EmitterParams, t_vp: f64) -> Result<Bounded> {
    check_positive("cooperativity", c)?;
    if cfg.delta_eg == 0.0 || cfg.delta_eg.is_nan() {
        return Err(Error::domain("delta_eg must be nonzero"));
    }
    let detuning = (t_vp * cfg.delta_eps / TAU).powi(2) + (TAU / (t_vp * cfg.delta_eg)).powi(2) - 12.0 / c;
    let f = 1.0
        - TAU / c.sqrt()
        - emitter.spin_decoherence() * t_vp
        - 0.58 * t_vp * emitter.gamma_star
        - 6.0 * PI * PI / 32.0 * detuning;
    Ok(Bounded::new(f))
}

/// C_eff = C/[1 + 0.7(T1h/T2h − 1)].
pub fn effective_cooperativity(c: f64, t1h: f64, t2h: f64) -> Result<f64> {
    check_positive("T1h", t1h)?;
    check_positive("T2h", t2h)?;
    if t2h > 2.0 * t1h * (1.0 + 1e-12) {
        return Err(Error::domain(format!("T2h = {t2h:e} exceeds 2 T1h = {:e}", 2.0 * t1h)));
    }
    Ok(c / (1.0 + 0.7 * (t1h / t2h - 1.0)))
}

/// T_RVP = (Δ/Ω)²·2π/(γ√C_eff).
pub fn rvp_gate_time(c_eff: f64, gamma: f64, delta_over_rabi: f64) -> Result<f64> {
    if !(delta_over_rabi >= 1.0) {
        return Err(Error::domain(format!("Delta/Omega must be >= 1, got {delta_over_rabi}")));
    }
    Ok(delta_over_rabi * delta_over_rabi * vp_gate_time(c_eff, gamma)?)
}

/// Upper bound on the RVP fidelity.
pub fn rvp_fidelity(cfg: &ExchangeConfig, c_eff: f64, emitter: &EmitterParams, t_rvp: f64) -> Result<Bounded> {
    check_positive("effective cooperativity", c_eff)?;
    let detuning_ratio = if cfg.delta_eps == 0.0 {
        0.0
    } else if cfg.cavity_detuning == 0.0 {
        return Err(Error::domain("cavity detuning is zero while delta_eps is not"));
    } else {
        (cfg.delta_eps / cfg.cavity_detuning).powi(2)
    };
    let gamma = cfg.shelving_decoherence.unwrap_or_else(|| emitter.spin_decoherence());
    let bracket = (t_rvp * cfg.two_photon_error / TAU).powi(2) + detuning_ratio - 18.0 / c_eff;
    Ok(Bounded::new(1.0 - TAU / c_eff.sqrt() - gamma * t_rvp - PI * PI / 8.0 * bracket))
}

pub fn evaluate_vp(cfg: &ExchangeConfig, c: f64, emitter: &EmitterParams) -> Result<Evaluation> {
    emitter.validate()?;
    let t = vp_gate_time(c, emitter.gamma)?;
    let f = vp_fidelity(cfg, c, emitter, t)?;
    let mut flags = Flags::new();
    flags.set_if(t > emitter.t1_optical(), Flag::VpTimeExceedsT1h);
    flags.set_if(cfg.g_over_kappa > 1.0, Flag::StrongCoupling);
    Ok(Evaluation::from_bounded(f, Bounded::new(1.0), t, flags))
}

pub fn evaluate_rvp(cfg: &ExchangeConfig, c: f64, emitter: &EmitterParams) -> Result<Evaluation> {
    emitter.validate()?;
    check_positive("rabi", cfg.rabi)?;
    check_positive("cavity_detuning", cfg.cavity_detuning.abs())?;
    let ratio = cfg.rabi / cfg.cavity_detuning.abs();
    if ratio > RABI_RATIO_MAX {
        return Err(Error::domain(format!(
            "Omega/Delta = {ratio} exceeds {RABI_RATIO_MAX}; the dispersive picture does not hold"
        )));
    }
    let (t1h, t2h) = (emitter.t1_optical(), emitter.t2_optical());
    let c_eff = effective_cooperativity(c, t1h, t2h)?;
    let t = rvp_gate_time(c_eff, emitter.gamma, 1.0 / ratio)?;
    let f = rvp_fidelity(cfg, c_eff, emitter, t)?;
    let mut flags = Flags::new();
    flags.set_if(ratio > RABI_RATIO_WARN, Flag::RamanRabiRatio);
    flags.set_if(c_eff > c, Flag::EffectiveCooperativityAboveC);
    Ok(Evaluation::from_bounded(f, Bounded::new(1.0), t, flags))
}
