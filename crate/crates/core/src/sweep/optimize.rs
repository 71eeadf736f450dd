//! 1-D maximization of a gate metric over one config path.

use std::str::FromStr;
use std::sync::Mutex;

use serde_json::Value;

use super::exec::{evaluate_at, with_overrides, Scale};
use super::golden::{golden_section_max, DEFAULT_TOL};
use crate::config::ConfigTree;
use crate::error::{Error, Result};
use crate::metrics::{Evaluation, Flag};
use crate::scheme::Scheme;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Objective {
    #[default]
    Fidelity,
    Efficiency,
}

impl Objective {
    pub fn of(self, e: &Evaluation) -> f64 {
        match self {
            Objective::Fidelity => e.metrics.fidelity,
            Objective::Efficiency => e.metrics.efficiency,
        }
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fidelity" => Ok(Objective::Fidelity),
            "efficiency" => Ok(Objective::Efficiency),
            other => Err(Error::config("objective", format!("expected fidelity or efficiency, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeSpec {
    pub scheme: Scheme,
    pub path: String,
    pub bracket: (f64, f64),
    /// Log scale searches in ln(value).
    pub scale: Scale,
    pub objective: Objective,
    pub overrides: Vec<(String, Value)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub path: String,
    pub argmax: f64,
    /// Metrics at the argmax; carries `optimum_at_bracket_edge` when set.
    pub evaluation: Evaluation,
    pub iterations: usize,
}

pub fn optimize(spec: &OptimizeSpec, base: &ConfigTree) -> Result<Optimum> {
    let tree = with_overrides(base, &spec.overrides)?;
    let path = tree.canonical_path(&spec.path)?;
    let (lo, hi) = spec.bracket;
    super::exec::Range::new(lo, hi, 2, spec.scale)?;
    let paths = [path.clone()];
    let (to_x, from_x): (fn(f64) -> f64, fn(f64) -> f64) = match spec.scale {
        Scale::Linear => (|v| v, |x| x),
        Scale::Log => (f64::ln, f64::exp),
    };
    let first_error = Mutex::new(None);
    let objective = |x: f64| match evaluate_at(spec.scheme, &tree, &paths, &[from_x(x)]) {
        Ok(e) => spec.objective.of(&e),
        Err(err) => {
            first_error.lock().unwrap().get_or_insert(err);
            f64::NAN
        }
    };
    let best = golden_section_max(objective, (to_x(lo), to_x(hi)), DEFAULT_TOL);
    if let Some(err) = first_error.into_inner().unwrap() {
        return Err(err);
    }
    let best = best?;
    let argmax = from_x(best.argmax);
    let mut evaluation = evaluate_at(spec.scheme, &tree, &paths, &[argmax])?;
    evaluation.flags.set_if(best.at_edge, Flag::OptimumAtBracketEdge);
    Ok(Optimum { path, argmax, evaluation, iterations: best.iterations })
}
