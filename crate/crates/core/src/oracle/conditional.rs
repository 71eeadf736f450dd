//! Detector-conditioned propagation over a detection window.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{expm, hermitian_eigenvalues, hermiticity_defect, trace, CMat};

use super::liouvillian::Superoperator;

/// What happens between the photon emission and the end of its window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetectionDelay {
    /// The click is registered at the emission time (δt_d = 0); no
    /// post-jump evolution inside the window.
    #[default]
    Zero,
    /// The post-jump state keeps evolving under L_c until the window closes.
    UntilWindowEnd,
}

/// Upper-right block of exp([[A, B], [0, C]]·τ) = ∫₀^τ e^{A(τ−t)} B e^{Ct} dt.
fn van_loan(a: &CMat, b: &CMat, c: &CMat, tau: f64) -> Result<CMat> {
    let n = a.nrows();
    let mut block = CMat::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(a);
    block.view_mut((0, n), (n, n)).copy_from(b);
    block.view_mut((n, n), (n, n)).copy_from(c);
    let e = expm(&(block * Complex64::new(tau, 0.0)))?;
    Ok(e.view((0, n), (n, n)).into_owned())
}

/// ∫₀^τ e^{L_c t} dt.
pub fn integrated_propagator(l_c: &Superoperator, tau: f64) -> Result<Superoperator> {
    let n = l_c.dim();
    Ok(Superoperator::new(van_loan(&CMat::zeros(n, n), &CMat::identity(n, n), &l_c.matrix, tau)?))
}

fn check_window(t_a: f64, t_b: f64) -> Result<f64> {
    if !(t_b >= t_a) || !(t_b - t_a).is_finite() {
        return Err(Error::domain(format!("detection window [{t_a}, {t_b}] must be finite and ordered")));
    }
    Ok(t_b - t_a)
}

/// The map ρ ↦ ∫ (post-jump propagation) S e^{L_c(t − t_a)} ρ dt over [t_a, t_b].
pub fn conditional_map(
    l_c: &Superoperator,
    s: &Superoperator,
    (t_a, t_b): (f64, f64),
    delay: DetectionDelay,
) -> Result<Superoperator> {
    let tau = check_window(t_a, t_b)?;
    match delay {
        DetectionDelay::Zero => {
            let phi = integrated_propagator(l_c, tau)?;
            Ok(Superoperator::new(&s.matrix * &phi.matrix))
        }
        DetectionDelay::UntilWindowEnd => Ok(Superoperator::new(van_loan(&l_c.matrix, &s.matrix, &l_c.matrix, tau)?)),
    }
}

/// Unnormalized state conditioned on one detection in `window`.
pub fn conditional_integral(
    l_c: &Superoperator,
    s: &Superoperator,
    window: (f64, f64),
    rho_in: &CMat,
    delay: DetectionDelay,
) -> Result<CMat> {
    Ok(conditional_map(l_c, s, window, delay)?.apply(rho_in))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detector {
    Plus,
    Minus,
}

impl Detector {
    pub const BOTH: [Detector; 2] = [Detector::Plus, Detector::Minus];

    pub fn index(self) -> usize {
        match self {
            Detector::Plus => 0,
            Detector::Minus => 1,
        }
    }
}

/// An unnormalized conditional density operator and the clicks that produced it.
#[derive(Debug, Clone)]
pub struct ConditionalState {
    pub rho: CMat,
    /// One detector per detection window, in time order.
    pub pattern: Vec<Detector>,
}

impl ConditionalState {
    pub fn trace(&self) -> f64 {
        trace(&self.rho).re
    }

    /// ⟨ψ|ρ|ψ⟩ for a normalized ket `psi`.
    pub fn overlap(&self, psi: &nalgebra::DVector<Complex64>) -> f64 {
        (psi.adjoint() * &self.rho * psi)[(0, 0)].re
    }

    /// Hermitian, PSD to the numerical floor (relative to the trace), and
    /// trace in [0, 1].
    pub fn is_physical(&self) -> bool {
        let t = self.trace();
        let tol = 1e-10 * t.abs().max(f64::MIN_POSITIVE);
        if hermiticity_defect(&self.rho) > tol {
            return false;
        }
        let lowest = hermitian_eigenvalues(&self.rho).first().copied().unwrap_or(0.0);
        lowest >= -tol && t >= -1e-12 && t <= 1.0 + 1e-10
    }
}
