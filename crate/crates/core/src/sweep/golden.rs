//! Golden-section maximization of a unimodal 1-D objective.

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 200;

/// Inverse golden ratio, (√5 − 1)/2.
const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenMax {
    pub argmax: f64,
    pub value: f64,
    /// The maximum sits on a bracket edge, so the true optimum may lie outside.
    pub at_edge: bool,
    pub iterations: usize,
}

/// Maximize `f` on `[lo, hi]` until the bracket is narrower than `tol·|x|`.
pub fn golden_section_max<F>(f: F, bracket: (f64, f64), tol: f64) -> Result<GoldenMax>
where
    F: FnMut(f64) -> f64,
{
    golden_section_max_iter(f, bracket, tol, DEFAULT_MAX_ITER)
}

pub fn golden_section_max_iter<F>(
    mut f: F,
    (lo, hi): (f64, f64),
    tol: f64,
    max_iter: usize,
) -> Result<GoldenMax>
where
    F: FnMut(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be > 0, got {tol}")));
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iterations = 0;
    // Absolute floor keeps the stopping rule meaningful for an argmax at 0.
    let floor = tol * (hi - lo) * f64::EPSILON;
    while (b - a) > (tol * 0.5 * (a.abs() + b.abs())).max(floor) {
        if iterations == max_iter {
            return Err(Error::Numerical(format!(
                "golden-section search did not converge in {max_iter} iterations (bracket [{a:e}, {b:e}])"
            )));
        }
        iterations += 1;
        if !(fc.is_finite() && fd.is_finite()) {
            return Err(Error::Numerical(format!("objective not finite near x = {c:e}")));
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let (mut argmax, mut value) = if fc >= fd { (c, fc) } else { (d, fd) };
    let (f_lo, f_hi) = (f(lo), f(hi));
    let width = hi - lo;
    let near_lo = argmax - lo <= 1e-6 * width;
    let near_hi = hi - argmax <= 1e-6 * width;
    let mut at_edge = false;
    if near_lo || f_lo > value {
        at_edge = true;
        if f_lo >= value {
            (argmax, value) = (lo, f_lo);
        }
    }
    if near_hi || f_hi > value {
        at_edge = true;
        if f_hi >= value {
            (argmax, value) = (hi, f_hi);
        }
    }
    Ok(GoldenMax { argmax, value, at_edge, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parabola() {
        let r = golden_section_max(|x| -(x - 3.0) * (x - 3.0), (0.0, 10.0), 1e-9).unwrap();
        assert!((r.argmax - 3.0).abs() <= 3e-9, "{}", r.argmax);
        assert!(!r.at_edge);
    }

    #[test]
    fn increasing_objective_hits_edge() {
        let r = golden_section_max(|x| x, (0.0, 1.0), 1e-9).unwrap();
        assert!(r.at_edge);
        assert_eq!(r.argmax, 1.0);
        let r = golden_section_max(|x| -x, (2.0, 5.0), 1e-9).unwrap();
        assert!(r.at_edge);
        assert_eq!(r.argmax, 2.0);
    }

    #[test]
    fn iteration_cap() {
        let r = golden_section_max_iter(|x| -(x - 3.0).powi(2), (0.0, 10.0), 1e-12, 5);
        assert!(matches!(r, Err(Error::Numerical(_))));
    }

    #[test]
    fn bad_bracket() {
        assert!(golden_section_max(|x| x, (1.0, 1.0), 1e-9).is_err());
        assert!(golden_section_max(|x| x, (0.0, f64::INFINITY), 1e-9).is_err());
    }

    proptest! {
        #[test]
        fn finds_interior_peak(peak in 0.01f64..0.99, scale in 1e-6f64..1e6) {
            let (lo, hi) = (0.0, scale);
            let x0 = peak * scale;
            let r = golden_section_max(|x| -((x - x0) / scale).powi(2), (lo, hi), 1e-9).unwrap();
            prop_assert!((r.argmax - x0).abs() <= 1e-9 * x0 + 1e-7 * scale, "{} vs {}", r.argmax, x0);
        }
    }
}
