//! Efficiency, fidelity and gate-time models for two-qubit gates between
//! T centers in silicon, with a Liouvillian oracle for the heralded schemes.

pub mod config;
pub mod dipole;
pub mod error;
pub mod exchange;
pub mod interference;
pub mod linalg;
pub mod metrics;
pub mod oracle;
pub mod params;
pub mod scattering;
pub mod scheme;
pub mod sweep;
pub mod table;

pub use config::{Config, ConfigTree};
pub use error::{Error, Result};
pub use metrics::{Evaluation, Flag, Flags, GateMetrics};
pub use scheme::Scheme;
