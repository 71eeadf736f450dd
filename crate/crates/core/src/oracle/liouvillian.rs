//! Two-emitter Liouville space: operators, superoperators and the Lindblad
//! generator with its detector-resolved decomposition.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::Result;
use crate::linalg::{expm, CMat};
use crate::params::{eta_prime, CavitySet, DetectionChain, EmitterParams};

pub const UP: usize = 0;
pub const DOWN: usize = 1;
pub const EXCITED: usize = 2;
pub const LEVELS: usize = 3;
/// Hilbert-space dimension of the emitter pair.
pub const DIM: usize = LEVELS * LEVELS;
/// Liouville-space dimension.
pub const LDIM: usize = DIM * DIM;

/// Basis index of |a⟩_A ⊗ |b⟩_B.
pub fn ket(a: usize, b: usize) -> usize {
    a * LEVELS + b
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// |i⟩⟨j| on a single emitter.
pub fn transition(i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(LEVELS, LEVELS);
    m[(i, j)] = one();
    m
}

/// Lowering operator |↓⟩⟨e| of one emitter.
pub fn lowering() -> CMat {
    transition(DOWN, EXCITED)
}

pub fn projector(level: usize) -> CMat {
    transition(level, level)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emitter {
    A,
    B,
}

/// Embed a single-emitter operator into the pair space.
pub fn on(emitter: Emitter, op: &CMat) -> CMat {
    let id = CMat::identity(LEVELS, LEVELS);
    match emitter {
        Emitter::A => op.kronecker(&id),
        Emitter::B => id.kronecker(op),
    }
}

/// Apply the same single-emitter operator to both emitters.
pub fn both(op: &CMat) -> CMat {
    op.kronecker(op)
}

/// Column-stacked vectorisation.
pub fn vec(rho: &CMat) -> DVector<Complex64> {
    DVector::from_column_slice(rho.as_slice())
}

pub fn unvec(v: &DVector<Complex64>, n: usize) -> CMat {
    CMat::from_column_slice(n, n, v.as_slice())
}

/// Linear map on density operators, acting on column-stacked vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    pub matrix: CMat,
}

impl Superoperator {
    pub fn new(matrix: CMat) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Side of the density operators this map acts on.
    pub fn hilbert_dim(&self) -> usize {
        (self.dim() as f64).sqrt().round() as usize
    }

    pub fn identity(hilbert_dim: usize) -> Self {
        let n = hilbert_dim * hilbert_dim;
        Self::new(CMat::identity(n, n))
    }

    pub fn zero(hilbert_dim: usize) -> Self {
        let n = hilbert_dim * hilbert_dim;
        Self::new(CMat::zeros(n, n))
    }

    /// ρ ↦ AρB, i.e. (Bᵀ ⊗ A) on vec(ρ).
    pub fn sandwich(a: &CMat, b: &CMat) -> Self {
        Self::new(b.transpose().kronecker(a))
    }

    /// ρ ↦ cρc†.
    pub fn jump(c: &CMat) -> Self {
        Self::sandwich(c, &c.adjoint())
    }

    /// ρ ↦ UρU†.
    pub fn unitary(u: &CMat) -> Self {
        Self::jump(u)
    }

    /// Lindblad dissipator D[c]ρ = cρc† − ½{c†c, ρ}.
    pub fn dissipator(c: &CMat) -> Self {
        let n = c.nrows();
        let id = CMat::identity(n, n);
        let cdc = c.adjoint() * c;
        let half = Complex64::new(0.5, 0.0);
        let anti = Self::sandwich(&cdc, &id).matrix + Self::sandwich(&id, &cdc).matrix;
        Self::new(Self::jump(c).matrix - anti * half)
    }

    pub fn apply(&self, rho: &CMat) -> CMat {
        unvec(&(&self.matrix * vec(rho)), rho.nrows())
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Superoperator) -> Superoperator {
        Self::new(&next.matrix * &self.matrix)
    }

    pub fn exp(&self, t: f64) -> Result<Superoperator> {
        Ok(Self::new(expm(&(&self.matrix * Complex64::new(t, 0.0)))?))
    }

    pub fn add(&self, other: &Superoperator) -> Superoperator {
        Self::new(&self.matrix + &other.matrix)
    }

    pub fn sub(&self, other: &Superoperator) -> Superoperator {
        Self::new(&self.matrix - &other.matrix)
    }
}

/// Operator form of the electron-spin pure dephasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpinDephasing {
    /// √γ*_s |↑⟩⟨↑| and √γ*_s |↓⟩⟨↓| per emitter: ↑–↓ coherence decays at
    /// γ*_s and each ground–excited coherence at γ*_s/2.
    #[default]
    Projectors,
    /// √(γ*_s/2)(|↑⟩⟨↑| − |↓⟩⟨↓|): same ↑–↓ decay, but only γ*_s/4 on the
    /// ground–excited coherences.
    PauliZ,
}

/// Lindblad generator of the emitter pair behind a 50:50 beam splitter.
#[derive(Debug, Clone)]
pub struct LiouvillianModel {
    pub full: Superoperator,
    /// `full` without the detected-photon recycling terms.
    pub no_jump: Superoperator,
    /// Jump superoperators of the `+` and `−` detectors.
    pub detectors: [Superoperator; 2],
}

pub fn build_liouvillian(
    emitter: &EmitterParams,
    cavity: &CavitySet,
    det: &DetectionChain,
    spin: SpinDephasing,
) -> LiouvillianModel {
    let gp = cavity.gamma_prime;
    let ep = eta_prime(cavity, det);
    let gs = emitter.spin_dephasing().max(0.0);
    let s = lowering();
    let (sa, sb) = (on(Emitter::A, &s), on(Emitter::B, &s));
    let root = |x: f64| Complex64::new(x.sqrt(), 0.0);

    let d_plus = (&sa + &sb) * root(ep * gp / 2.0);
    let d_minus = (&sa - &sb) * root(ep * gp / 2.0);

    let mut channels = vec![d_plus.clone(), d_minus.clone()];
    for which in [Emitter::A, Emitter::B] {
        channels.push(on(which, &s) * root((1.0 - ep) * gp));
        channels.push(on(which, &projector(EXCITED)) * root(2.0 * emitter.gamma_star));
        match spin {
            SpinDephasing::Projectors => {
                channels.push(on(which, &projector(UP)) * root(gs));
                channels.push(on(which, &projector(DOWN)) * root(gs));
            }
            SpinDephasing::PauliZ => {
                let z = projector(UP) - projector(DOWN);
                channels.push(on(which, &z) * root(gs / 2.0));
            }
        }
    }
    let mut full = Superoperator::zero(DIM);
    for c in &channels {
        full = full.add(&Superoperator::dissipator(c));
    }
    let detectors = [Superoperator::jump(&d_plus), Superoperator::jump(&d_minus)];
    let no_jump = full.sub(&detectors[0]).sub(&detectors[1]);
    LiouvillianModel { full, no_jump, detectors }
}
