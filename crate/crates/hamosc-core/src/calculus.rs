//! Adaptive quadrature and trend certification for integral criteria.
//!
//! Every oscillation test ultimately asks whether some scalar quantity built
//! from integrals of the coefficients grows without bound. We evaluate the
//! quantity on a fixed checkpoint grid over a finite horizon and certify
//! divergence only when the sampled trace clears a threshold, is strictly
//! increasing near the end, and has at least doubled since the midpoint.
//! Quantities that diverge too slowly to clear those gates are reported as
//! not certified rather than guessed at.

use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix};

/// Adaptive Simpson quadrature settings.
#[derive(Debug, Clone)]
pub struct Quadrature {
    /// Width of the top-level panels before any adaptive splitting.
    pub base_step: f64,
    /// Absolute tolerance per component and panel.
    pub atol: f64,
    /// Relative tolerance per component and panel.
    pub rtol: f64,
    /// Recursion depth limit inside one panel.
    pub max_depth: u32,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            base_step: 0.25,
            atol: 1e-10,
            rtol: 1e-10,
            max_depth: 12,
        }
    }
}

impl Quadrature {
    /// Integrates a vector-valued function over `[a, b]`. The flag is false
    /// when some panel hit the depth limit before meeting tolerance.
    pub fn integrate_vec<F>(&self, mut f: F, a: f64, b: f64, dim: usize) -> Result<(Vec<f64>, bool)>
    where
        F: FnMut(f64) -> Result<Vec<f64>>,
    {
        let mut total = vec![0.0; dim];
        let mut converged = true;
        if a == b {
            return Ok((total, converged));
        }
        let span = b - a;
        let panels = (span.abs() / self.base_step).ceil().max(1.0) as usize;
        let width = span / panels as f64;
        for p in 0..panels {
            let x0 = a + p as f64 * width;
            let x1 = if p + 1 == panels { b } else { x0 + width };
            let xm = 0.5 * (x0 + x1);
            let f0 = f(x0)?;
            let fm = f(xm)?;
            let f1 = f(x1)?;
            if f0.len() != dim || fm.len() != dim || f1.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: f0.len(),
                    context: "quadrature integrand",
                });
            }
            let whole = simpson(x1 - x0, &f0, &fm, &f1);
            let ok = self.refine(&mut f, x0, x1, &f0, &fm, &f1, &whole, self.max_depth, &mut total)?;
            converged &= ok;
        }
        Ok((total, converged))
    }

    /// Scalar convenience wrapper.
    pub fn integrate_scalar<F>(&self, mut f: F, a: f64, b: f64) -> Result<(f64, bool)>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let (v, ok) = self.integrate_vec(|t| f(t).map(|x| vec![x]), a, b, 1)?;
        Ok((v[0], ok))
    }

    /// Entrywise integral of a matrix-valued function.
    pub fn integrate_matrix<F>(
        &self,
        mut f: F,
        a: f64,
        b: f64,
        n: usize,
    ) -> Result<(ComplexMatrix, bool)>
    where
        F: FnMut(f64) -> Result<ComplexMatrix>,
    {
        let dim = 2 * n * n;
        let (flat, ok) = self.integrate_vec(
            |t| {
                let m = f(t)?;
                if m.dim() != n {
                    return Err(Error::DimensionMismatch {
                        left: n,
                        right: m.dim(),
                        context: "matrix integrand",
                    });
                }
                let mut v = Vec::with_capacity(dim);
                for z in m.entries() {
                    v.push(z.re);
                    v.push(z.im);
                }
                Ok(v)
            },
            a,
            b,
            dim,
        )?;
        let mut m = ComplexMatrix::zeros(n)?;
        for j in 0..n {
            for k in 0..n {
                let idx = 2 * (j * n + k);
                m[(j, k)] = c64(flat[idx], flat[idx + 1]);
            }
        }
        Ok((m, ok))
    }

    /// Cumulative integrals from `points[0]` to every point, in order.
    /// The first returned value is zero.
    pub fn cumulative_scalar<F>(&self, mut f: F, points: &[f64]) -> Result<(Vec<f64>, bool)>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let mut out = Vec::with_capacity(points.len());
        let mut acc = 0.0;
        let mut converged = true;
        out.push(0.0);
        for w in points.windows(2) {
            let (piece, ok) = self.integrate_scalar(&mut f, w[0], w[1])?;
            acc += piece;
            converged &= ok;
            out.push(acc);
        }
        Ok((out, converged))
    }

    /// Cumulative entrywise matrix integrals from `points[0]` to every point.
    pub fn cumulative_matrix<F>(
        &self,
        mut f: F,
        points: &[f64],
        n: usize,
    ) -> Result<(Vec<ComplexMatrix>, bool)>
    where
        F: FnMut(f64) -> Result<ComplexMatrix>,
    {
        let mut out = Vec::with_capacity(points.len());
        let mut acc = ComplexMatrix::zeros(n)?;
        let mut converged = true;
        out.push(acc.clone());
        for w in points.windows(2) {
            let (piece, ok) = self.integrate_matrix(&mut f, w[0], w[1], n)?;
            acc = &acc + &piece;
            converged &= ok;
            out.push(acc.clone());
        }
        Ok((out, converged))
    }

    #[allow(clippy::too_many_arguments)]
    fn refine<F>(
        &self,
        f: &mut F,
        x0: f64,
        x1: f64,
        f0: &[f64],
        fm: &[f64],
        f1: &[f64],
        whole: &[f64],
        depth: u32,
        total: &mut [f64],
    ) -> Result<bool>
    where
        F: FnMut(f64) -> Result<Vec<f64>>,
    {
        let xm = 0.5 * (x0 + x1);
        let xl = 0.5 * (x0 + xm);
        let xr = 0.5 * (xm + x1);
        let fl = f(xl)?;
        let fr = f(xr)?;
        let left = simpson(xm - x0, f0, &fl, fm);
        let right = simpson(x1 - xm, fm, &fr, f1);
        let within = whole.iter().enumerate().all(|(i, w)| {
            let s2 = left[i] + right[i];
            (s2 - w).abs() <= 15.0 * (self.atol + self.rtol * s2.abs())
        });
        if within || depth == 0 {
            for i in 0..total.len() {
                let s2 = left[i] + right[i];
                total[i] += s2 + (s2 - whole[i]) / 15.0;
            }
            return Ok(within || depth > 0);
        }
        let ok_l = self.refine(f, x0, xm, f0, &fl, fm, &left, depth - 1, total)?;
        let ok_r = self.refine(f, xm, x1, fm, &fr, f1, &right, depth - 1, total)?;
        Ok(ok_l && ok_r)
    }
}

fn simpson(h: f64, f0: &[f64], fm: &[f64], f1: &[f64]) -> Vec<f64> {
    (0..f0.len())
        .map(|i| h / 6.0 * (f0[i] + 4.0 * fm[i] + f1[i]))
        .collect()
}

// ---------------------------------------------------------------------------
// Trend certification
// ---------------------------------------------------------------------------

/// Outcome of sampling a scalar quantity on the checkpoint grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    /// All divergence gates passed: the quantity is certified to grow
    /// without bound as far as the horizon can tell.
    DivergesToPlusInfinity,
    /// At least one gate failed; the quantity looks bounded or grows too
    /// slowly to certify within the horizon.
    NotCertified,
    /// The trace contained non-finite values or could not be evaluated.
    Undetermined,
}

/// Horizon and gate settings for trend certification.
#[derive(Debug, Clone)]
pub struct TrendConfig {
    /// Length of the observation interval past the initial time.
    pub horizon: f64,
    /// Divergence threshold; `None` selects `50 * (1 + |value at t0|)`.
    pub theta: Option<f64>,
    /// Number of trailing checkpoints that must be strictly increasing.
    pub window: usize,
    /// Number of checkpoints on the grid.
    pub count: usize,
}

impl Default for TrendConfig {
    fn default() -> Self {
        Self {
            horizon: 200.0,
            theta: None,
            window: 8,
            count: 64,
        }
    }
}

impl TrendConfig {
    /// Checkpoint grid: `count` points strictly after `t0`, ending exactly
    /// at `t0 + horizon`.
    pub fn grid(&self, t0: f64) -> Vec<f64> {
        let dt = self.horizon / self.count as f64;
        (1..=self.count).map(|k| t0 + k as f64 * dt).collect()
    }

    /// Threshold, resolved against the quantity's initial value.
    pub fn resolve_theta(&self, value_at_t0: f64) -> f64 {
        self.theta
            .unwrap_or_else(|| 50.0 * (1.0 + value_at_t0.abs()))
    }
}

/// Verdict on one sampled trace, with a human-readable account of the gates.
#[derive(Debug, Clone)]
pub struct TrendReport {
    pub trend: Trend,
    pub theta: f64,
    pub detail: String,
}

/// Applies the three divergence gates to a sampled trace.
///
/// The gates: the final value reaches `theta`; the last `window` checkpoints
/// are strictly increasing; and the final value is at least twice the value
/// at the midpoint checkpoint (skipped when the midpoint is not positive).
pub fn certify_trend(values: &[f64], theta: f64, window: usize) -> TrendReport {
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return TrendReport {
            trend: Trend::Undetermined,
            theta,
            detail: "trace contains non-finite values".into(),
        };
    }
    let last = *values.last().expect("nonempty");
    let mut failures = Vec::new();

    if last < theta {
        failures.push(format!("final value {last:.6e} below threshold {theta:.3e}"));
    }
    let w = window.min(values.len().saturating_sub(1));
    let tail_increasing = values[values.len() - 1 - w..]
        .windows(2)
        .all(|p| p[1] > p[0]);
    if !tail_increasing {
        failures.push(format!("not strictly increasing over final {w} checkpoints"));
    }
    let mid = values[(values.len() - 1) / 2];
    let slack = 1e-9 * (1.0 + last.abs());
    if mid > 0.0 && last + slack < 2.0 * mid {
        failures.push(format!(
            "final value {last:.6e} has not doubled since midpoint {mid:.6e}"
        ));
    }

    if failures.is_empty() {
        TrendReport {
            trend: Trend::DivergesToPlusInfinity,
            theta,
            detail: format!(
                "reached {last:.6e} (threshold {theta:.3e}), increasing over the final {w} checkpoints, doubled since midpoint"
            ),
        }
    } else {
        TrendReport {
            trend: Trend::NotCertified,
            theta,
            detail: failures.join("; "),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;

    #[test]
    fn sine_integral_is_exact() {
        let q = Quadrature::default();
        let (v, ok) = q.integrate_scalar(|t| Ok(t.sin()), 0.0, std::f64::consts::PI).unwrap();
        assert!(ok);
        assert!((v - 2.0).abs() < 1e-10);
    }

    #[test]
    fn arctangent_integral() {
        let q = Quadrature::default();
        let (v, ok) = q
            .integrate_scalar(|t| Ok(4.0 / (1.0 + t * t)), 0.0, 1.0)
            .unwrap();
        assert!(ok);
        assert!((v - std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn matrix_integral_entrywise() {
        let q = Quadrature::default();
        let (m, ok) = q
            .integrate_matrix(
                |t| {
                    ComplexMatrix::from_rows(&[
                        vec![c64(t, 0.0), c64(0.0, t * t)],
                        vec![c64(0.0, -t * t), c64(t * t * t, 0.0)],
                    ])
                },
                0.0,
                1.0,
                2,
            )
            .unwrap();
        assert!(ok);
        assert!((m[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!((m[(0, 1)].im - 1.0 / 3.0).abs() < 1e-12);
        assert!((m[(1, 0)].im + 1.0 / 3.0).abs() < 1e-12);
        assert!((m[(1, 1)].re - 0.25).abs() < 1e-12);
    }

    #[test]
    fn cumulative_matches_antiderivative() {
        let q = Quadrature::default();
        let points: Vec<f64> = (0..=20).map(|k| k as f64 * 0.25).collect();
        let (vals, ok) = q.cumulative_scalar(|t| Ok(t.cos()), &points).unwrap();
        assert!(ok);
        for (p, v) in points.iter().zip(&vals) {
            assert!((v - p.sin()).abs() < 1e-10, "at t = {p}");
        }
    }

    #[test]
    fn integrand_error_propagates() {
        let q = Quadrature::default();
        let err = q
            .integrate_scalar(
                |t| {
                    if t > 0.5 {
                        Err(Error::Domain {
                            t,
                            what: "test integrand".into(),
                        })
                    } else {
                        Ok(t)
                    }
                },
                0.0,
                1.0,
            )
            .unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
    }

    #[test]
    fn depth_limit_reports_non_convergence() {
        let q = Quadrature {
            max_depth: 1,
            ..Quadrature::default()
        };
        let (_, ok) = q
            .integrate_scalar(|t| Ok((1e6 * t).sin()), 0.0, 1.0)
            .unwrap();
        assert!(!ok);
    }

    #[test]
    fn linear_trace_is_certified() {
        let cfg = TrendConfig::default();
        let grid = cfg.grid(0.0);
        assert_eq!(grid.len(), 64);
        assert!((grid[0] - 3.125).abs() < 1e-12);
        assert!((grid[63] - 200.0).abs() < 1e-12);

        let values: Vec<f64> = grid.iter().map(|t| 0.5 * t).collect();
        let theta = cfg.resolve_theta(0.0);
        assert!((theta - 50.0).abs() < 1e-12);
        let report = certify_trend(&values, theta, cfg.window);
        assert_eq!(report.trend, Trend::DivergesToPlusInfinity, "{}", report.detail);
    }

    #[test]
    fn gates_reject_flat_decreasing_and_slow_traces() {
        let cfg = TrendConfig::default();
        let grid = cfg.grid(0.0);

        let flat: Vec<f64> = grid.iter().map(|_| 1.0).collect();
        let r = certify_trend(&flat, 50.0, cfg.window);
        assert_eq!(r.trend, Trend::NotCertified);
        assert!(r.detail.contains("threshold"));

        let mut sagging: Vec<f64> = grid.iter().map(|t| 2.0 * t).collect();
        let n = sagging.len();
        sagging[n - 2] = sagging[n - 1] + 1.0;
        let r = certify_trend(&sagging, 50.0, cfg.window);
        assert_eq!(r.trend, Trend::NotCertified);
        assert!(r.detail.contains("strictly increasing"));

        // sqrt growth clears the threshold but cannot double from the midpoint
        let slow: Vec<f64> = grid.iter().map(|t| 30.0 * t.sqrt()).collect();
        let r = certify_trend(&slow, 50.0, cfg.window);
        assert_eq!(r.trend, Trend::NotCertified);
        assert!(r.detail.contains("doubled"));
    }

    #[test]
    fn non_finite_trace_is_undetermined() {
        let values = vec![1.0, 2.0, f64::NAN, 4.0];
        let r = certify_trend(&values, 1.0, 2);
        assert_eq!(r.trend, Trend::Undetermined);
    }
}
