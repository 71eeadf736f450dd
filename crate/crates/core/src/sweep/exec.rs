//! 1-D and 2-D grids over config paths, evaluated sequentially or on a
//! rayon pool.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ConfigTree;
use crate::error::{Error, Result};
use crate::metrics::Evaluation;
use crate::scheme::Scheme;

/// Environment variable capping the number of sweep worker threads.
pub const THREADS_ENV: &str = "TQGATE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" | "lin" => Ok(Scale::Linear),
            "log" => Ok(Scale::Log),
            other => Err(Error::config("scale", format!("expected linear or log, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub scale: Scale,
}

impl Range {
    pub fn new(from: f64, to: f64, points: usize, scale: Scale) -> Result<Self> {
        let r = Self { from, to, points, scale };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::config("points", format!("need at least 2 points, got {}", self.points)));
        }
        if !(self.from.is_finite() && self.to.is_finite() && self.from < self.to) {
            return Err(Error::config(
                "range",
                format!("need finite from < to, got {} .. {}", self.from, self.to),
            ));
        }
        if self.scale == Scale::Log && !(self.from > 0.0) {
            return Err(Error::config("range", format!("log scale needs from > 0, got {}", self.from)));
        }
        Ok(())
    }

    /// Grid values; both endpoints are reproduced exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.from;
                }
                if i == n - 1 {
                    return self.to;
                }
                let t = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.from + t * (self.to - self.from),
                    Scale::Log => self.from * (self.to / self.from).powf(t),
                }
            })
            .collect()
    }
}

/// A config path swept over a range.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub path: String,
    pub range: Range,
}

impl Axis {
    pub fn new(path: impl Into<String>, range: Range) -> Self {
        Self { path: path.into(), range }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub scheme: Scheme,
    pub axis: Axis,
    /// Inner axis of a 2-D grid.
    pub axis2: Option<Axis>,
    /// Applied to the base tree before the grid.
    pub overrides: Vec<(String, Value)>,
}

impl SweepSpec {
    pub fn new(scheme: Scheme, axis: Axis) -> Self {
        Self { scheme, axis, axis2: None, overrides: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// One value per axis, in file units.
    pub params: Vec<f64>,
    pub evaluation: Evaluation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub scheme: Scheme,
    /// Full paths of the swept axes.
    pub axes: Vec<String>,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecutionMode {
    Sequential,
    /// Work-stealing over grid points; `threads` caps the pool size.
    /// Runs sequentially when built without the `parallel` feature.
    Parallel { threads: Option<usize> },
}

impl ExecutionMode {
    /// Parallel when available, capped by `TQGATE_THREADS` if set.
    pub fn from_env() -> Result<Self> {
        if !cfg!(feature = "parallel") {
            return Ok(ExecutionMode::Sequential);
        }
        let threads = std::env::var(THREADS_ENV).ok().map(|s| parse_threads(&s)).transpose()?;
        Ok(ExecutionMode::Parallel { threads })
    }
}

fn parse_threads(s: &str) -> Result<usize> {
    match s.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(Error::config(THREADS_ENV, format!("expected a positive integer, got `{s}`"))),
    }
}

/// Map `f` over `items`, preserving order.
pub fn map_points<T, R, F>(items: &[T], mode: ExecutionMode, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        ExecutionMode::Sequential => Ok(items.iter().map(f).collect()),
        ExecutionMode::Parallel { threads } => parallel_map(items, threads, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, R, F>(items: &[T], threads: Option<usize>, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    match threads {
        None => Ok(items.par_iter().map(f).collect()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Numerical(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(|| items.par_iter().map(f).collect()))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, R, F>(items: &[T], _threads: Option<usize>, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    Ok(items.iter().map(f).collect())
}

/// Prefix an error with the grid point it came from, keeping its kind.
pub(crate) fn at_point(err: Error, point: &str) -> Error {
    match err {
        Error::Domain(m) => Error::Domain(format!("{point}: {m}")),
        Error::Unsupported(m) => Error::Unsupported(format!("{point}: {m}")),
        Error::Numerical(m) => Error::Numerical(format!("{point}: {m}")),
        Error::Config { path, message } => Error::Config { path, message: format!("{point}: {message}") },
    }
}

pub(crate) fn describe(paths: &[String], values: &[f64]) -> String {
    paths
        .iter()
        .zip(values)
        .map(|(p, v)| format!("{p}={v:e}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Evaluate one scheme with the given paths set on a copy of `base`.
pub fn evaluate_at(scheme: Scheme, base: &ConfigTree, paths: &[String], values: &[f64]) -> Result<Evaluation> {
    let run = || {
        let mut tree = base.clone();
        for (p, v) in paths.iter().zip(values) {
            tree.set_f64(p, *v)?;
        }
        scheme.evaluate(&tree.resolve()?)
    };
    run().map_err(|e| at_point(e, &describe(paths, values)))
}

pub(crate) fn with_overrides(base: &ConfigTree, overrides: &[(String, Value)]) -> Result<ConfigTree> {
    let mut tree = base.clone();
    for (k, v) in overrides {
        tree.set(k, v.clone())?;
    }
    Ok(tree)
}

pub fn run_sweep(spec: &SweepSpec, base: &ConfigTree) -> Result<SweepResult> {
    run_sweep_with(spec, base, ExecutionMode::from_env()?)
}

pub fn run_sweep_with(spec: &SweepSpec, base: &ConfigTree, mode: ExecutionMode) -> Result<SweepResult> {
    let tree = with_overrides(base, &spec.overrides)?;
    let mut axes = vec![tree.canonical_path(&spec.axis.path)?];
    spec.axis.range.validate()?;
    let mut grid: Vec<Vec<f64>> = spec.axis.range.values().into_iter().map(|v| vec![v]).collect();
    if let Some(inner) = &spec.axis2 {
        inner.range.validate()?;
        let p = tree.canonical_path(&inner.path)?;
        if p == axes[0] {
            return Err(Error::config(inner.path.clone(), "both axes name the same path"));
        }
        axes.push(p);
        let inner_values = inner.range.values();
        grid = grid
            .into_iter()
            .flat_map(|outer| inner_values.iter().map(move |v| vec![outer[0], *v]))
            .collect();
    }
    // Surface config errors once, before the grid runs.
    tree.resolve()?;
    let results = map_points(&grid, mode, |point| evaluate_at(spec.scheme, &tree, &axes, point))?;
    let rows = grid
        .into_iter()
        .zip(results)
        .map(|(params, ev)| ev.map(|evaluation| SweepRow { params, evaluation }))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { scheme: spec.scheme, axes, rows })
}
