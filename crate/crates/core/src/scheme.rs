//! The eight gate schemes and a single evaluation entry point.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dipole::{evaluate_ed, evaluate_md, mde_rates, mdg_rates};
use crate::error::{Error, Result};
use crate::exchange::{evaluate_rvp, evaluate_vp};
use crate::interference::{evaluate_ib, evaluate_ibf};
use crate::metrics::Evaluation;
use crate::scattering::evaluate_sb;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Interference-based (two rounds, no feedback).
    Ib,
    /// Interference-based with feedback.
    Ibf,
    /// Cavity-assisted photon scattering.
    Sb,
    /// Magnetic dipole, ground-state manifold.
    Mdg,
    /// Magnetic dipole, excited-state manifold.
    Mde,
    /// Electric dipole.
    Ed,
    /// Virtual-photon exchange.
    Vp,
    /// Raman virtual-photon exchange.
    Rvp,
}

impl Scheme {
    pub const ALL: [Scheme; 8] = [
        Scheme::Ib,
        Scheme::Ibf,
        Scheme::Sb,
        Scheme::Mdg,
        Scheme::Mde,
        Scheme::Ed,
        Scheme::Vp,
        Scheme::Rvp,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Scheme::Ib => "ib",
            Scheme::Ibf => "ibf",
            Scheme::Sb => "sb",
            Scheme::Mdg => "mdg",
            Scheme::Mde => "mde",
            Scheme::Ed => "ed",
            Scheme::Vp => "vp",
            Scheme::Rvp => "rvp",
        }
    }

    /// Config path prefixes this scheme reads.
    fn inputs(self) -> &'static [&'static str] {
        match self {
            Scheme::Ib | Scheme::Ibf => &["emitter.", "cavity.", "detection.", "scheme.interference."],
            Scheme::Sb => &["emitter.", "cavity.", "detection.", "scheme.scattering."],
            Scheme::Mdg => &[
                "emitter.t1_spin",
                "emitter.t2_spin",
                "scheme.dipole.distance",
                "scheme.dipole.nuclear_",
                "scheme.mdg.",
            ],
            // γ enters through the anchored bare rate.
            Scheme::Mde => &[
                "emitter.",
                "cavity.gamma_prime",
                "cavity.purcell",
                "scheme.dipole.distance",
                "scheme.dipole.hole_spin_lifetime",
                "scheme.mde.",
            ],
            Scheme::Ed => &["emitter.", "cavity.gamma_prime", "cavity.purcell", "scheme.dipole.distance", "scheme.ed."],
            Scheme::Vp | Scheme::Rvp => &["emitter.", "cavity.", "scheme.exchange."],
        }
    }

    /// Whether changing the value at `path` (a full path) can change this scheme's metrics.
    pub fn depends_on(self, path: &str) -> bool {
        self.inputs().iter().any(|p| path.starts_with(p))
    }

    /// True for the heralded optical schemes, which report a detection efficiency.
    pub fn is_heralded(self) -> bool {
        matches!(self, Scheme::Ib | Scheme::Ibf | Scheme::Sb)
    }

    pub fn evaluate(self, cfg: &Config) -> Result<Evaluation> {
        let p = &cfg.preset;
        let c = p.cavity.cooperativity;
        match self {
            Scheme::Ib => evaluate_ib(&cfg.interference, &p.emitter, &p.cavity, &p.detection),
            Scheme::Ibf => evaluate_ibf(&cfg.interference, &p.emitter, &p.cavity, &p.detection),
            Scheme::Sb => evaluate_sb(&cfg.scattering, c, &p.emitter, &p.detection),
            Scheme::Mdg => {
                let (rates, flags) = mdg_rates(&p.emitter, &cfg.mdg, cfg.nuclear_decay, cfg.nuclear_dephasing);
                evaluate_md(&cfg.mdg, &rates, &cfg.consts, flags)
            }
            Scheme::Mde => {
                let (rates, flags) = mde_rates(&p.emitter, &cfg.mde, cfg.hole_spin_lifetime);
                evaluate_md(&cfg.mde, &rates, &cfg.consts, flags)
            }
            Scheme::Ed => evaluate_ed(&cfg.ed, cfg.distance, &p.emitter, &cfg.consts),
            Scheme::Vp => evaluate_vp(&cfg.exchange, c, &p.emitter),
            Scheme::Rvp => evaluate_rvp(&cfg.exchange, c, &p.emitter),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|x| x.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::config(
                    "scheme",
                    format!("unknown scheme `{s}` (expected ib, ibf, sb, mdg, mde, ed, vp or rvp)"),
                )
            })
    }
}
