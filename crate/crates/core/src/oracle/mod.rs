//! Liouville-space photon-count decomposition used to check the closed forms
//! of the interference schemes.

pub mod conditional;
pub mod liouvillian;
pub mod protocol;
pub mod report;

pub use conditional::{conditional_integral, conditional_map, ConditionalState, DetectionDelay, Detector};
pub use liouvillian::{build_liouvillian, LiouvillianModel, SpinDephasing, Superoperator};
pub use protocol::{simulate_ib, simulate_ibf, spin_flip, OracleOptions, OracleResult};
pub use report::{check_interference, check_scattering, Check, CheckReport, Grid};
