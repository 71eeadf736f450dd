//! Several schemes on a shared axis.

use super::exec::{evaluate_at, map_points, Axis, ExecutionMode};
use crate::config::ConfigTree;
use crate::error::Result;
use crate::metrics::Evaluation;
use crate::scheme::Scheme;

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeColumn {
    pub scheme: Scheme,
    /// One evaluation per axis value.
    pub rows: Vec<Evaluation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// Full path of the axis.
    pub axis: String,
    pub values: Vec<f64>,
    pub columns: Vec<SchemeColumn>,
    /// Schemes left out because the axis does not enter them.
    pub skipped: Vec<(Scheme, String)>,
}

pub fn compare_schemes(schemes: &[Scheme], axis: &Axis, base: &ConfigTree) -> Result<Comparison> {
    compare_schemes_with(schemes, axis, base, ExecutionMode::from_env()?)
}

pub fn compare_schemes_with(
    schemes: &[Scheme],
    axis: &Axis,
    base: &ConfigTree,
    mode: ExecutionMode,
) -> Result<Comparison> {
    axis.range.validate()?;
    let path = base.canonical_path(&axis.path)?;
    base.resolve()?;
    let values = axis.range.values();
    let mut kept = Vec::new();
    let mut skipped = Vec::new();
    for &s in schemes {
        if kept.contains(&s) {
            continue;
        }
        if s.depends_on(&path) {
            kept.push(s);
        } else {
            skipped.push((s, format!("{s} does not depend on {path}")));
        }
    }
    let jobs: Vec<(Scheme, f64)> = kept.iter().flat_map(|&s| values.iter().map(move |&v| (s, v))).collect();
    let paths = [path.clone()];
    let mut results = map_points(&jobs, mode, |(s, v)| evaluate_at(*s, base, &paths, &[*v]))?.into_iter();
    let mut columns = Vec::with_capacity(kept.len());
    for scheme in kept {
        let rows = results.by_ref().take(values.len()).collect::<Result<Vec<_>>>()?;
        columns.push(SchemeColumn { scheme, rows });
    }
    Ok(Comparison { axis: path, values, columns, skipped })
}
