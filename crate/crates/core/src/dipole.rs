//! Deterministic proximity gates: magnetic dipole gates in the ground (MDG)
//! and excited (MDE) manifolds, and the electric dipole (ED) gate.
//!
//! Rabi frequencies, spin splittings and the ED shift Δν enter pulse times
//! as plain numbers (T = π/Ω with Ω in Hz), without a 2π factor.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{Bounded, Evaluation, Flag, Flags};
use crate::params::{EmitterParams, PhysConsts, G_ELECTRON, G_HOLE};

/// Second-order coefficient a = [32(2 − √2) − π²]/64.
pub fn second_order_coefficient() -> f64 {
    (32.0 * (2.0 - std::f64::consts::SQRT_2) - PI * PI) / 64.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Manifold {
    /// Passive = nuclear spins, active = electron spins of the ground state.
    Ground,
    /// Passive = electron spins, active = hole spins of the bound exciton.
    Excited,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipoleConfig {
    /// Emitter separation r, metres.
    pub distance: f64,
    /// π-pulse Rabi frequency Ω.
    pub rabi: f64,
    /// Splitting of the nearest unwanted transition, same convention as Ω.
    pub splitting: f64,
    /// g_z of the active manifold.
    pub g_par: f64,
    /// g_x = g_y of the active manifold.
    pub g_perp: f64,
    /// Fractions of the active→passive decay assigned to γ_1↑ and γ_1↓.
    pub branching: [f64; 2],
}

impl DipoleConfig {
    /// Ground-state gate: Ω = 0.7 MHz against a 2.1 MHz nuclear splitting.
    pub fn mdg_default() -> Self {
        Self {
            distance: 10e-9,
            rabi: 0.7e6,
            splitting: 2.1e6,
            g_par: G_ELECTRON,
            g_perp: G_ELECTRON,
            branching: [0.9, 0.1],
        }
    }

    /// Excited-state gate: Ω = 500 MHz against the 2.25 GHz electron splitting.
    pub fn mde_default() -> Self {
        Self {
            distance: 10e-9,
            rabi: 500e6,
            splitting: 2.25e9,
            g_par: G_HOLE,
            g_perp: G_HOLE,
            branching: [0.9, 0.1],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.distance > 0.0) {
            return Err(Error::domain(format!("distance must be > 0, got {}", self.distance)));
        }
        if !(self.rabi > 0.0) {
            return Err(Error::domain(format!("rabi must be > 0, got {}", self.rabi)));
        }
        if !(self.splitting >= 0.0) {
            return Err(Error::domain(format!("splitting must be >= 0, got {}", self.splitting)));
        }
        let [up, dn] = self.branching;
        if !(up >= 0.0 && dn >= 0.0 && up + dn <= 1.0 + 1e-12) {
            return Err(Error::domain(format!("branching fractions {up}, {dn} must be >= 0 and sum to <= 1")));
        }
        Ok(())
    }
}

/// Decay and dephasing rates entering the magnetic-dipole fidelity, 1/s.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DipoleRates {
    pub gamma_1_up: f64,
    pub gamma_1_dn: f64,
    /// Passive spin decay.
    pub gamma_2: f64,
    /// Active spin decay.
    pub gamma_3: f64,
    /// Passive spin dephasing.
    pub gamma_4: f64,
    /// Active spin dephasing.
    pub gamma_5: f64,
}

impl DipoleRates {
    fn validate(&self) -> Result<()> {
        let all = [self.gamma_1_up, self.gamma_1_dn, self.gamma_2, self.gamma_3, self.gamma_4, self.gamma_5];
        if all.iter().any(|r| !(*r >= 0.0)) {
            return Err(Error::domain(format!("dipole rates must be >= 0, got {all:?}")));
        }
        Ok(())
    }
}

/// Dipolar coupling energies, joules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub jz: f64,
    pub jx: f64,
    pub jy: f64,
}

/// J_z = μ0(μB g_z)²/(8πr³); J_x = J_y = μ0(μB g_⊥)²/(16πr³).
pub fn dipolar_coupling(cfg: &DipoleConfig, k: &PhysConsts) -> Result<Couplings> {
    if !(cfg.distance > 0.0) {
        return Err(Error::domain(format!("distance must be > 0, got {}", cfg.distance)));
    }
    let r3 = cfg.distance.powi(3);
    let jz = k.mu0 * (k.mu_b * cfg.g_par).powi(2) / (8.0 * PI * r3);
    let jt = k.mu0 * (k.mu_b * cfg.g_perp).powi(2) / (16.0 * PI * r3);
    Ok(Couplings { jz, jx: jt, jy: jt })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdTimes {
    /// Passive→active transfer, π/Ω.
    pub t_act: f64,
    /// Ising interaction, ħπ/(4J_z).
    pub t_int: f64,
    /// 2·t_act + t_int.
    pub total: f64,
}

pub fn md_times(cfg: &DipoleConfig, jz: f64, k: &PhysConsts) -> Result<MdTimes> {
    if !(cfg.rabi > 0.0) {
        return Err(Error::domain(format!("rabi must be > 0, got {}", cfg.rabi)));
    }
    if !(jz > 0.0) {
        return Err(Error::domain(format!("J_z must be > 0, got {jz}")));
    }
    let t_act = PI / cfg.rabi;
    let t_int = k.hbar * PI / (4.0 * jz);
    Ok(MdTimes { t_act, t_int, total: 2.0 * t_act + t_int })
}

pub fn md_fidelity(rates: &DipoleRates, times: &MdTimes, j: &Couplings) -> Result<Bounded> {
    if !(j.jz > 0.0) {
        return Err(Error::domain("J_z must be > 0"));
    }
    let r = rates;
    let g1 = r.gamma_1_up + r.gamma_1_dn;
    let transfer = times.t_act * (7.0 / 8.0 * g1 + 13.0 / 16.0 * (r.gamma_2 + r.gamma_3) + 0.5 * (r.gamma_4 + r.gamma_5));
    let interaction = times.t_int * (g1 + 0.75 * r.gamma_3 + 0.5 * r.gamma_5);
    let transverse = second_order_coefficient() * ((j.jx + j.jy) / j.jz).powi(2);
    Ok(Bounded::new(1.0 - transfer - interaction - transverse))
}

/// Error from driving the unwanted detuned transition during a π pulse,
/// (π/2)² exp[−(π/2)(Δ/Ω)²].
pub fn offresonant_infidelity(rabi: f64, splitting: f64) -> f64 {
    let ratio = splitting / rabi;
    FRAC_PI_2 * FRAC_PI_2 * (-FRAC_PI_2 * ratio * ratio).exp()
}

/// Ground-manifold rates: electron-spin relaxation 1/T1e feeds γ_1 (split by
/// `branching`) and γ_3; γ_5 is the electron spin dephasing. The nuclear
/// passive rates are inputs and raise a flag while both are zero.
pub fn mdg_rates(emitter: &EmitterParams, cfg: &DipoleConfig, nuclear_decay: f64, nuclear_dephasing: f64) -> (DipoleRates, Flags) {
    let relax = 1.0 / emitter.t1_spin;
    let mut flags = Flags::new();
    flags.set_if(nuclear_decay == 0.0 && nuclear_dephasing == 0.0, Flag::PassiveRatesUnset);
    let rates = DipoleRates {
        gamma_1_up: cfg.branching[0] * relax,
        gamma_1_dn: cfg.branching[1] * relax,
        gamma_2: nuclear_decay,
        gamma_3: relax,
        gamma_4: nuclear_dephasing,
        gamma_5: emitter.spin_dephasing(),
    };
    (rates, flags)
}

/// Excited-manifold rates: the optical decay γ feeds γ_1, the hole-spin
/// lifetime sets γ_3, electron-spin rates fill the passive slots. γ_5 has no
/// measured value and is dropped with a flag.
pub fn mde_rates(emitter: &EmitterParams, cfg: &DipoleConfig, hole_spin_lifetime: f64) -> (DipoleRates, Flags) {
    let mut flags = Flags::new();
    flags.insert(Flag::Gamma5Dropped);
    let rates = DipoleRates {
        gamma_1_up: cfg.branching[0] * emitter.gamma,
        gamma_1_dn: cfg.branching[1] * emitter.gamma,
        gamma_2: 1.0 / emitter.t1_spin,
        gamma_3: 1.0 / hole_spin_lifetime,
        gamma_4: emitter.spin_dephasing(),
        gamma_5: 0.0,
    };
    (rates, flags)
}

/// Magnetic-dipole gate metrics; the off-resonant π-pulse error is included.
pub fn evaluate_md(cfg: &DipoleConfig, rates: &DipoleRates, k: &PhysConsts, flags: Flags) -> Result<Evaluation> {
    cfg.validate()?;
    rates.validate()?;
    let j = dipolar_coupling(cfg, k)?;
    let times = md_times(cfg, j.jz, k)?;
    let f = md_fidelity(rates, &times, &j)?;
    let f = Bounded::new(f.raw - offresonant_infidelity(cfg.rabi, cfg.splitting));
    Ok(Evaluation::from_bounded(f, Bounded::new(1.0), times.total, flags))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdConfig {
    /// Permanent-dipole change Δμ_T, C·m.
    pub delta_mu: f64,
    pub refractive_index: f64,
    /// μ̂·μ̂ − 3(μ̂·r̂)(μ̂·r̂); 1 for parallel dipoles perpendicular to r̂.
    pub orientation_factor: f64,
    /// Control-pulse Rabi frequency Ω_c.
    pub rabi_control: f64,
    /// Error δν on the frequency shift, Hz.
    pub delta_nu_error: f64,
}

/// Δμ_T from the y-component alone.
pub const DELTA_MU_Y: f64 = 49e-31;
/// Δμ_T with both components.
pub const DELTA_MU_FULL: f64 = 55e-31;
pub const SILICON_INDEX: f64 = 3.45;

impl Default for EdConfig {
    fn default() -> Self {
        Self {
            delta_mu: DELTA_MU_Y,
            refractive_index: SILICON_INDEX,
            orientation_factor: 1.0,
            // Δ_e/4 for the 2.25 GHz electron splitting.
            rabi_control: 2.25e9 / 4.0,
            delta_nu_error: 0.0,
        }
    }
}

impl EdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.orientation_factor.abs() <= 2.0) {
            return Err(Error::domain(format!(
                "orientation factor must satisfy |k| <= 2, got {}",
                self.orientation_factor
            )));
        }
        if !(self.refractive_index > 0.0) {
            return Err(Error::domain("refractive index must be > 0"));
        }
        if !(self.rabi_control > 0.0) {
            return Err(Error::domain("rabi_control must be > 0"));
        }
        Ok(())
    }
}

/// Δν = Δμ_T² κ_orient / (4π n² ε0 h r³), signed, in Hz.
pub fn ed_frequency_shift(cfg: &EdConfig, r: f64, k: &PhysConsts) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("distance must be > 0, got {r}")));
    }
    let eps = cfg.refractive_index * cfg.refractive_index;
    Ok(cfg.delta_mu * cfg.delta_mu * cfg.orientation_factor / (4.0 * PI * eps * k.eps0 * k.h * r.powi(3)))
}

/// Separation at which |Δν| reaches `shift` Hz.
pub fn ed_distance_for_shift(cfg: &EdConfig, shift: f64, k: &PhysConsts) -> Result<f64> {
    let at_one = ed_frequency_shift(cfg, 1.0, k)?.abs();
    if !(shift > 0.0) || at_one == 0.0 {
        return Err(Error::domain("shift and orientation factor must be nonzero"));
    }
    Ok((at_one / shift).cbrt())
}

/// T_ED = 2π/Ω_c + 3π√3/Δν.
pub fn ed_gate_time(cfg: &EdConfig, delta_nu: f64) -> Result<f64> {
    let dn = delta_nu.abs();
    if !(dn > 0.0) {
        return Err(Error::domain("frequency shift must be nonzero"));
    }
    if !(cfg.rabi_control > 0.0) {
        return Err(Error::domain("rabi_control must be > 0"));
    }
    Ok(2.0 * PI / cfg.rabi_control + 3.0 * PI * 3f64.sqrt() / dn)
}

/// F_ED = 1 − (T/80)(42γ + 25γ* + 25χ) − (43π²/128)(δν/Δν)², χ = 1/T2e.
pub fn ed_fidelity(emitter: &EmitterParams, t_ed: f64, delta_nu: f64, delta_nu_error: f64) -> Result<Bounded> {
    let dn = delta_nu.abs();
    if !(dn > 0.0) {
        return Err(Error::domain("frequency shift must be nonzero"));
    }
    let rates = 42.0 * emitter.gamma + 25.0 * emitter.gamma_star + 25.0 * emitter.spin_decoherence();
    let detuning = 43.0 * PI * PI / 128.0 * (delta_nu_error / dn).powi(2);
    Ok(Bounded::new(1.0 - t_ed / 80.0 * rates - detuning))
}

pub fn evaluate_ed(cfg: &EdConfig, distance: f64, emitter: &EmitterParams, k: &PhysConsts) -> Result<Evaluation> {
    cfg.validate()?;
    emitter.validate()?;
    let dn = ed_frequency_shift(cfg, distance, k)?;
    let t = ed_gate_time(cfg, dn)?;
    let f = ed_fidelity(emitter, t, dn, cfg.delta_nu_error)?;
    Ok(Evaluation::from_bounded(f, Bounded::new(1.0), t, Flags::new()))
}
