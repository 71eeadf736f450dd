//! Photon-count decomposition of the IB and IBF entanglement protocols.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interference::InterferenceConfig;
use crate::linalg::CMat;
use crate::params::{CavitySet, DetectionChain, EmitterParams};

use super::conditional::{conditional_map, integrated_propagator, ConditionalState, DetectionDelay, Detector};
use super::liouvillian::{
    both, build_liouvillian, ket, transition, LiouvillianModel, SpinDephasing, Superoperator, DIM, DOWN, EXCITED,
    LEVELS, UP,
};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OracleOptions {
    pub spin_dephasing: SpinDephasing,
    pub delay: DetectionDelay,
    /// Common phase θ of the IB initial superposition (|↑⟩ + e^{iθ}|e⟩)/√2.
    pub init_phase: f64,
    /// Swap the roles of the two detectors (symmetry check).
    pub swap_detectors: bool,
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Σ_n Tr ρ_n.
    pub efficiency: f64,
    /// ¼ Σ_n ⟨ψ_n|ρ_n|ψ_n⟩ / Tr ρ_n; `None` when some pattern never occurs.
    pub fidelity: Option<f64>,
    pub states: Vec<ConditionalState>,
}

/// X on one emitter: |↑⟩ ↔ |↓⟩, |e⟩ fixed.
fn spin_x() -> CMat {
    transition(UP, DOWN) + transition(DOWN, UP) + transition(EXCITED, EXCITED)
}

/// Optical π pulse on one emitter: |↓⟩ ↔ |e⟩, |↑⟩ fixed.
fn optical_pi() -> CMat {
    transition(DOWN, EXCITED) + transition(EXCITED, DOWN) + transition(UP, UP)
}

/// Instantaneous spin flip on both emitters.
pub fn spin_flip(rho: &CMat) -> CMat {
    Superoperator::unitary(&both(&spin_x())).apply(rho)
}

/// (|↓↑⟩ ± |↑↓⟩)/√2.
pub fn bell(sign: f64) -> DVector<Complex64> {
    let mut v = DVector::zeros(DIM);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    v[ket(DOWN, UP)] = Complex64::new(h, 0.0);
    v[ket(UP, DOWN)] = Complex64::new(sign * h, 0.0);
    v
}

/// ψ+ when both windows clicked the same detector, ψ− otherwise.
pub fn target_for(pattern: &[Detector]) -> DVector<Complex64> {
    let same = pattern.windows(2).all(|w| w[0] == w[1]);
    bell(if same { 1.0 } else { -1.0 })
}

fn detector_maps(model: &LiouvillianModel, t_d: f64, delay: DetectionDelay) -> Result<[Superoperator; 2]> {
    match delay {
        DetectionDelay::Zero => {
            let phi = integrated_propagator(&model.no_jump, t_d)?;
            Ok(model.detectors.clone().map(|s| Superoperator::new(&s.matrix * &phi.matrix)))
        }
        DetectionDelay::UntilWindowEnd => Ok([
            conditional_map(&model.no_jump, &model.detectors[0], (0.0, t_d), delay)?,
            conditional_map(&model.no_jump, &model.detectors[1], (0.0, t_d), delay)?,
        ]),
    }
}

fn check(cfg: &InterferenceConfig) -> Result<()> {
    cfg.validate()?;
    if !cfg.detection_time.is_finite() {
        return Err(Error::domain("the oracle needs a finite detection time"));
    }
    if cfg.delta != 0.0 || cfg.phi_init != 0.0 || cfg.phi_prop != 0.0 {
        return Err(Error::Unsupported("the oracle models identical, phase-locked emitters only".into()));
    }
    Ok(())
}

/// Two detection windows around `between`, collecting all four click patterns.
fn two_windows(
    rho0: &CMat,
    maps: &[Superoperator; 2],
    between: &Superoperator,
    swap: bool,
) -> OracleResult {
    let order = if swap { [Detector::Minus, Detector::Plus] } else { Detector::BOTH };
    let mut states = Vec::with_capacity(4);
    for (i1, d1) in Detector::BOTH.into_iter().enumerate() {
        let mid = between.apply(&maps[order[i1].index()].apply(rho0));
        for (i2, d2) in Detector::BOTH.into_iter().enumerate() {
            let rho = maps[order[i2].index()].apply(&mid);
            states.push(ConditionalState { rho, pattern: vec![d1, d2] });
        }
    }
    let efficiency = states.iter().map(ConditionalState::trace).sum();
    let fidelity = if states.iter().all(|s| s.trace() > 0.0) {
        Some(states.iter().map(|s| s.overlap(&target_for(&s.pattern)) / s.trace()).sum::<f64>() / 4.0)
    } else {
        None
    };
    OracleResult { efficiency, fidelity, states }
}

/// Feedback protocol: |ee⟩, click, spin flip, wait δt, click.
pub fn simulate_ibf(
    emitter: &EmitterParams,
    cavity: &CavitySet,
    det: &DetectionChain,
    cfg: &InterferenceConfig,
    opts: &OracleOptions,
) -> Result<OracleResult> {
    check(cfg)?;
    let model = build_liouvillian(emitter, cavity, det, opts.spin_dephasing);
    let maps = detector_maps(&model, cfg.detection_time, opts.delay)?;
    let flip = Superoperator::unitary(&both(&spin_x()));
    let between = flip.then(&model.no_jump.exp(cfg.delta_t)?);
    let mut rho0 = CMat::zeros(DIM, DIM);
    rho0[(ket(EXCITED, EXCITED), ket(EXCITED, EXCITED))] = Complex64::new(1.0, 0.0);
    Ok(two_windows(&rho0, &maps, &between, opts.swap_detectors))
}

/// Two-round protocol: (|↑⟩ + e^{iθ}|e⟩)/√2 on each emitter, click, wait δt,
/// spin flip, optical π pulse, click.
pub fn simulate_ib(
    emitter: &EmitterParams,
    cavity: &CavitySet,
    det: &DetectionChain,
    cfg: &InterferenceConfig,
    opts: &OracleOptions,
) -> Result<OracleResult> {
    check(cfg)?;
    let model = build_liouvillian(emitter, cavity, det, opts.spin_dephasing);
    let maps = detector_maps(&model, cfg.detection_time, opts.delay)?;
    let between = model
        .no_jump
        .exp(cfg.delta_t)?
        .then(&Superoperator::unitary(&both(&spin_x())))
        .then(&Superoperator::unitary(&both(&optical_pi())));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut single = DVector::<Complex64>::zeros(LEVELS);
    single[UP] = Complex64::new(h, 0.0);
    single[EXCITED] = Complex64::from_polar(h, opts.init_phase);
    let psi = single.kronecker(&single);
    let rho0 = &psi * psi.adjoint();
    Ok(two_windows(&rho0, &maps, &between, opts.swap_detectors))
}
