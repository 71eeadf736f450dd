//! Cavity-assisted photon-scattering (SB) gate.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{Bounded, Evaluation, Flag, Flags};
use crate::params::{DetectionChain, EmitterParams};
use crate::sweep::golden::{golden_section_max, DEFAULT_TOL};

/// Decades searched on either side of the closed-form σ_p.
const SEARCH_DECADES: f64 = 2.0;

/// How σ_p is chosen when evaluating the gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaMode {
    /// Use `ScatteringConfig::sigma_p` as given.
    Fixed,
    /// The closed-form optimum.
    #[default]
    Closed,
    /// Golden-section maximization of the fidelity.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringConfig {
    /// Photon spectral standard deviation σ_p.
    pub sigma_p: f64,
    /// Mean cavity-photon detuning δ_p.
    pub delta_p: f64,
    pub delta_eps_a: f64,
    pub delta_eps_b: f64,
    pub g_over_kappa: f64,
    pub sigma_mode: SigmaMode,
}

impl ScatteringConfig {
    pub fn new(g_over_kappa: f64) -> Self {
        Self {
            sigma_p: f64::NAN,
            delta_p: 0.0,
            delta_eps_a: 0.0,
            delta_eps_b: 0.0,
            g_over_kappa,
            sigma_mode: SigmaMode::Closed,
        }
    }

    pub fn with_sigma(self, sigma_p: f64) -> Self {
        Self { sigma_p, sigma_mode: SigmaMode::Fixed, ..self }
    }

    /// 11 − 20(2g/κ)² + 12(2g/κ)⁴.
    fn bandwidth_bracket(&self) -> f64 {
        let x2 = (2.0 * self.g_over_kappa).powi(2);
        11.0 - 20.0 * x2 + 12.0 * x2 * x2
    }
}

/// 8π√(2 ln 2): T_SB·σ_p.
fn time_bandwidth() -> f64 {
    8.0 * PI * (2.0 * LN_2).sqrt()
}

/// T_SB = 8π√(2 ln 2)/σ_p, twice the photon's temporal FWHM.
pub fn sb_gate_time(sigma_p: f64) -> Result<f64> {
    if !(sigma_p > 0.0) {
        return Err(Error::domain(format!("sigma_p must be > 0, got {sigma_p}")));
    }
    Ok(time_bandwidth() / sigma_p)
}

fn check_c(c: f64) -> Result<()> {
    if !(c > 0.0) || c.is_nan() {
        return Err(Error::domain(format!("cooperativity must be > 0, got {c}")));
    }
    Ok(())
}

pub fn sb_efficiency(
    cfg: &ScatteringConfig,
    c: f64,
    emitter: &EmitterParams,
    det: &DetectionChain,
) -> Result<Bounded> {
    check_c(c)?;
    let mut raw = 1.0 - 5.0 / (2.0 * c);
    if cfg.delta_eps_a != cfg.delta_eps_b {
        let d = cfg.delta_eps_a - cfg.delta_eps_b;
        raw -= d * d / (2.0 * emitter.gamma * emitter.gamma * c);
    }
    Ok(Bounded::new(raw * det.eta_d))
}

/// The six infidelity terms subtracted from 1, in source order: optical
/// dephasing, finite cooperativity, spin decoherence over T_SB, the two
/// detuning terms, and the photon-bandwidth term.
pub fn sb_infidelity_terms(cfg: &ScatteringConfig, c: f64, emitter: &EmitterParams) -> Result<[f64; 6]> {
    check_c(c)?;
    let t_sb = sb_gate_time(cfg.sigma_p)?;
    let g = emitter.gamma;
    let gc2 = 4.0 * g * g * c * c;
    let x2 = (2.0 * cfg.g_over_kappa).powi(2);
    let (da, db, dp) = (cfg.delta_eps_a, cfg.delta_eps_b, cfg.delta_p);
    Ok([
        11.0 * emitter.gamma_star / (8.0 * g * c),
        11.0 / (16.0 * c * c),
        emitter.spin_decoherence() * t_sb,
        (-11.0 + 10.0 * x2) * dp * (da + db) / gc2,
        (41.0 * da * da - 38.0 * da * db + 41.0 * db * db) / (4.0 * gc2),
        cfg.bandwidth_bracket() * (dp * dp + cfg.sigma_p * cfg.sigma_p) / gc2,
    ])
}

pub fn sb_fidelity(cfg: &ScatteringConfig, c: f64, emitter: &EmitterParams) -> Result<Bounded> {
    let terms = sb_infidelity_terms(cfg, c, emitter)?;
    Ok(Bounded::new(1.0 - terms.iter().sum::<f64>()))
}

/// Closed-form bandwidth σ_p = 2∛(4π√(2 ln 2) Γγ²C² / bracket).
///
/// Returns zero, flagged, when the ground state does not decohere.
pub fn sb_sigma_opt_closed(c: f64, emitter: &EmitterParams, g_over_kappa: f64) -> Result<(f64, Flags)> {
    check_c(c)?;
    let bracket = ScatteringConfig::new(g_over_kappa).bandwidth_bracket();
    if !(bracket > 0.0) {
        return Err(Error::domain(format!(
            "11 - 20(2g/kappa)^2 + 12(2g/kappa)^4 = {bracket} must be > 0 (g/kappa = {g_over_kappa})"
        )));
    }
    let big_gamma = emitter.spin_decoherence();
    let mut flags = Flags::new();
    flags.set_if(big_gamma == 0.0, Flag::SigmaDegenerate);
    let g = emitter.gamma;
    let inner = 4.0 * PI * (2.0 * LN_2).sqrt() * big_gamma * g * g * c * c / bracket;
    Ok((2.0 * inner.cbrt(), flags))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaOptimum {
    pub sigma_p: f64,
    pub fidelity: Bounded,
    pub flags: Flags,
}

/// Numerically maximize the fidelity over σ_p, searching two decades either
/// side of the closed form.
pub fn sb_sigma_opt_numeric(c: f64, emitter: &EmitterParams, cfg: &ScatteringConfig) -> Result<SigmaOptimum> {
    let (closed, flags) = sb_sigma_opt_closed(c, emitter, cfg.g_over_kappa)?;
    if flags.contains(Flag::SigmaDegenerate) {
        return Err(Error::domain(
            "no ground-state decoherence: the fidelity increases without bound as sigma_p -> 0",
        ));
    }
    let span = 10f64.powf(SEARCH_DECADES);
    sb_sigma_opt_numeric_in(c, emitter, cfg, (closed / span, closed * span))
}

/// As [`sb_sigma_opt_numeric`] over an explicit bracket.
pub fn sb_sigma_opt_numeric_in(
    c: f64,
    emitter: &EmitterParams,
    cfg: &ScatteringConfig,
    bracket: (f64, f64),
) -> Result<SigmaOptimum> {
    check_c(c)?;
    if !(bracket.0 > 0.0) {
        return Err(Error::domain("sigma_p bracket must be positive"));
    }
    // Maximize −(sum of infidelity terms): same argmax as F, without the
    // cancellation in 1 − ε.
    let objective = |sigma: f64| {
        let probe = ScatteringConfig { sigma_p: sigma, ..*cfg };
        sb_infidelity_terms(&probe, c, emitter).map_or(f64::NAN, |t| -t.iter().sum::<f64>())
    };
    let best = golden_section_max(objective, bracket, DEFAULT_TOL)?;
    let mut flags = Flags::new();
    flags.set_if(best.at_edge, Flag::OptimumAtBracketEdge);
    Ok(SigmaOptimum {
        sigma_p: best.argmax,
        fidelity: Bounded::new(1.0 + best.value),
        flags,
    })
}

/// SB metrics at cooperativity `c`, resolving σ_p per `cfg.sigma_mode`.
pub fn evaluate_sb(
    cfg: &ScatteringConfig,
    c: f64,
    emitter: &EmitterParams,
    det: &DetectionChain,
) -> Result<Evaluation> {
    emitter.validate()?;
    let mut flags = Flags::new();
    let sigma_p = match cfg.sigma_mode {
        SigmaMode::Fixed => cfg.sigma_p,
        SigmaMode::Closed => {
            let (s, f) = sb_sigma_opt_closed(c, emitter, cfg.g_over_kappa)?;
            flags.extend(&f);
            s
        }
        SigmaMode::Numeric => {
            let opt = sb_sigma_opt_numeric(c, emitter, cfg)?;
            flags.extend(&opt.flags);
            opt.sigma_p
        }
    };
    if flags.contains(Flag::SigmaDegenerate) {
        return Err(Error::domain(
            "closed-form sigma_p is zero without ground-state decoherence; supply sigma_p explicitly",
        ));
    }
    let resolved = ScatteringConfig { sigma_p, ..*cfg };
    Ok(Evaluation::from_bounded(
        sb_fidelity(&resolved, c, emitter)?,
        sb_efficiency(&resolved, c, emitter, det)?,
        sb_gate_time(sigma_p)?,
        flags,
    ))
}
