//! Shared result types: gate metrics and validity flags.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A fidelity or efficiency from a perturbative formula that may leave [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounded {
    pub raw: f64,
}

impl Bounded {
    pub fn new(raw: f64) -> Self {
        Self { raw }
    }

    pub fn value(self) -> f64 {
        self.raw.clamp(0.0, 1.0)
    }

    pub fn clamped(self) -> bool {
        !(0.0..=1.0).contains(&self.raw)
    }
}

/// Validity markers attached to an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    FidelityClamped,
    EfficiencyClamped,
    /// Optimal photon bandwidth collapsed to zero (no spin decoherence).
    SigmaDegenerate,
    /// Golden-section argmax landed on a bracket edge.
    OptimumAtBracketEdge,
    /// Excited-state spin dephasing terms omitted (no measured value).
    Gamma5Dropped,
    /// Passive-qubit nuclear decay/dephasing rates left at zero.
    PassiveRatesUnset,
    VpTimeExceedsT1h,
    StrongCoupling,
    /// Raman Rabi frequency is above 0.1 of the cavity detuning.
    RamanRabiRatio,
    /// T2h > T1h makes the effective cooperativity exceed C.
    EffectiveCooperativityAboveC,
}

impl Flag {
    pub fn token(self) -> &'static str {
        match self {
            Flag::FidelityClamped => "fidelity_clamped",
            Flag::EfficiencyClamped => "efficiency_clamped",
            Flag::SigmaDegenerate => "sigma_degenerate",
            Flag::OptimumAtBracketEdge => "optimum_at_bracket_edge",
            Flag::Gamma5Dropped => "gamma5_dropped",
            Flag::PassiveRatesUnset => "passive_rates_unset",
            Flag::VpTimeExceedsT1h => "vp_time_exceeds_t1h",
            Flag::StrongCoupling => "strong_coupling",
            Flag::RamanRabiRatio => "raman_rabi_ratio",
            Flag::EffectiveCooperativityAboveC => "ceff_above_c",
        }
    }

    pub const ALL: [Flag; 10] = [
        Flag::FidelityClamped,
        Flag::EfficiencyClamped,
        Flag::SigmaDegenerate,
        Flag::OptimumAtBracketEdge,
        Flag::Gamma5Dropped,
        Flag::PassiveRatesUnset,
        Flag::VpTimeExceedsT1h,
        Flag::StrongCoupling,
        Flag::RamanRabiRatio,
        Flag::EffectiveCooperativityAboveC,
    ];

    pub fn from_token(token: &str) -> Option<Flag> {
        Flag::ALL.into_iter().find(|f| f.token() == token)
    }
}

/// Ordered set of flags; renders as a `;`-separated token list.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Flags(BTreeSet<Flag>);

impl Flags {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, flag: Flag) {
        self.0.insert(flag);
    }

    pub fn set_if(&mut self, cond: bool, flag: Flag) {
        if cond {
            self.insert(flag);
        }
    }

    pub fn contains(&self, flag: Flag) -> bool {
        self.0.contains(&flag)
    }

    pub fn extend(&mut self, other: &Flags) {
        self.0.extend(other.0.iter().copied());
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Flag> + '_ {
        self.0.iter().copied()
    }

    pub fn parse(s: &str) -> Option<Flags> {
        let mut out = Flags::new();
        for tok in s.split(';').filter(|t| !t.is_empty()) {
            out.insert(Flag::from_token(tok)?);
        }
        Some(out)
    }
}

impl fmt::Display for Flags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, flag) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            f.write_str(flag.token())?;
        }
        Ok(())
    }
}

/// Fidelity, efficiency and duration of one gate or entanglement attempt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateMetrics {
    pub fidelity: f64,
    pub efficiency: f64,
    /// Seconds.
    pub gate_time: f64,
}

/// Metrics plus the flags raised while computing them.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub metrics: GateMetrics,
    pub flags: Flags,
}

impl Evaluation {
    /// Clamp both figures into [0, 1], flagging any that had to move.
    pub fn from_bounded(fidelity: Bounded, efficiency: Bounded, gate_time: f64, mut flags: Flags) -> Self {
        flags.set_if(fidelity.clamped(), Flag::FidelityClamped);
        flags.set_if(efficiency.clamped(), Flag::EfficiencyClamped);
        Self {
            metrics: GateMetrics {
                fidelity: fidelity.value(),
                efficiency: efficiency.value(),
                gate_time,
            },
            flags,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_render_and_parse() {
        let mut f = Flags::new();
        assert_eq!(f.to_string(), "");
        f.insert(Flag::StrongCoupling);
        f.insert(Flag::FidelityClamped);
        assert_eq!(f.to_string(), "fidelity_clamped;strong_coupling");
        assert_eq!(Flags::parse(&f.to_string()), Some(f));
        assert_eq!(Flags::parse("nope"), None);
    }

    #[test]
    fn bounded_clamps() {
        assert_eq!(Bounded::new(-0.2).value(), 0.0);
        assert!(Bounded::new(-0.2).clamped());
        assert!(!Bounded::new(1.0).clamped());
    }
}
