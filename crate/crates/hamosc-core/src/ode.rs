//! Adaptive Dormand–Prince 5(4) integration over flat real state vectors.
//!
//! The solver drives a right-hand side `f(t, y, dy)` with embedded error
//! control and hands every accepted step to an observer, which can inspect a
//! fourth-order dense interpolant, reject the step (forcing a retry at half
//! the size), or stop the run early. Step rejection by the observer is how
//! structural invariants (Hermitian-ness, conjoinedness) are enforced during
//! long integrations.

use crate::error::{Error, Result};

/// Tolerances and step limits for one integration run.
#[derive(Debug, Clone)]
pub struct OdeOptions {
    /// Relative error tolerance per component.
    pub rtol: f64,
    /// Absolute error tolerance per component.
    pub atol: f64,
    /// Largest step size attempted.
    pub max_step: f64,
    /// Step underflow threshold, relative to `max(|t|, 1)`.
    pub min_step_rel: f64,
    /// Upper bound on accepted + rejected steps.
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-11,
            max_step: 0.25,
            min_step_rel: 1e-13,
            max_steps: 4_000_000,
        }
    }
}

/// Observer's decision after inspecting an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepControl {
    /// Keep integrating.
    Continue,
    /// Finish the run at the end of this step.
    Stop,
    /// Discard the step and retry from its start at half the size.
    Reject,
}

/// One accepted step with enough data for fourth-order interpolation.
#[derive(Debug, Clone)]
pub struct DenseStep {
    pub t0: f64,
    pub t1: f64,
    pub y0: Vec<f64>,
    pub y1: Vec<f64>,
    pub f0: Vec<f64>,
    pub f1: Vec<f64>,
    /// Quartic correction built from the interior stages; without it the
    /// interpolant falls back to cubic Hermite, whose error in steep regions
    /// is orders of magnitude above the step error.
    pub q: Vec<f64>,
}

impl DenseStep {
    /// Interpolated state at `t` within `[t0, t1]`.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let h = self.t1 - self.t0;
        let s = if h == 0.0 { 0.0 } else { (t - self.t0) / h };
        let s1 = 1.0 - s;
        (0..self.y0.len())
            .map(|i| {
                let delta = self.y1[i] - self.y0[i];
                let b = h * self.f0[i] - delta;
                let c = delta - h * self.f1[i] - b;
                self.y0[i] + s * (delta + s1 * (b + s * (c + s1 * self.q[i])))
            })
            .collect()
    }
}

/// Accepted steps of one integration run, kept for dense evaluation and
/// root localization after the fact.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub steps: Vec<DenseStep>,
}

impl Trajectory {
    pub fn push(&mut self, step: &DenseStep) {
        self.steps.push(step.clone());
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn t_start(&self) -> f64 {
        self.steps.first().map_or(f64::NAN, |s| s.t0)
    }

    pub fn t_end(&self) -> f64 {
        self.steps.last().map_or(f64::NAN, |s| s.t1)
    }

    /// Interpolated state at `t`, or `None` outside the recorded range.
    pub fn eval(&self, t: f64) -> Option<Vec<f64>> {
        if self.steps.is_empty() || t < self.t_start() || t > self.t_end() {
            return None;
        }
        let idx = self
            .steps
            .partition_point(|s| s.t1 < t)
            .min(self.steps.len() - 1);
        Some(self.steps[idx].eval(t))
    }

    /// Interpolated single component at `t`.
    pub fn component(&self, t: f64, i: usize) -> Option<f64> {
        self.eval(t).map(|y| y[i])
    }

    /// Zeros of one state component, located by sign changes of the dense
    /// interpolant over quarter-step subintervals, then bisection.
    pub fn zeros_of_component(&self, i: usize) -> Vec<f64> {
        let mut zeros: Vec<f64> = Vec::new();
        for step in &self.steps {
            let width = step.t1 - step.t0;
            if width <= 0.0 {
                continue;
            }
            for q in 0..4 {
                let a = step.t0 + width * q as f64 / 4.0;
                let b = step.t0 + width * (q + 1) as f64 / 4.0;
                let fa = step.eval(a)[i];
                let fb = step.eval(b)[i];
                if fa == 0.0 {
                    push_zero(&mut zeros, a);
                    continue;
                }
                if fa * fb < 0.0 {
                    let (mut lo, mut hi, mut flo) = (a, b, fa);
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        let fm = step.eval(mid)[i];
                        if flo * fm <= 0.0 {
                            hi = mid;
                        } else {
                            lo = mid;
                            flo = fm;
                        }
                    }
                    push_zero(&mut zeros, 0.5 * (lo + hi));
                } else if fb == 0.0 && q == 3 {
                    push_zero(&mut zeros, b);
                }
            }
        }
        zeros
    }
}

fn push_zero(zeros: &mut Vec<f64>, z: f64) {
    if zeros.last().map_or(true, |&last| (z - last).abs() > 1e-9 * (1.0 + z.abs())) {
        zeros.push(z);
    }
}

// Dormand–Prince coefficients. The last stage doubles as the first stage of
// the next step (first-same-as-last).
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Difference between the fifth- and fourth-order weights, for error control.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Weights of the quartic term of the pair's dense output.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Integrates `dy/dt = f(t, y)` from `t0` to `t_end`, calling `on_step` after
/// every accepted step. Returns the final `(t, y)`, which is earlier than
/// `t_end` when the observer stopped the run.
pub fn integrate_adaptive<F, G>(
    mut f: F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    opts: &OdeOptions,
    mut on_step: G,
) -> Result<(f64, Vec<f64>)>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
    G: FnMut(&DenseStep) -> Result<StepControl>,
{
    let dim = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<f64>> = (0..7).map(|_| vec![0.0; dim]).collect();
    let mut stage = vec![0.0; dim];
    let mut y_next = vec![0.0; dim];

    let (first, rest) = k.split_at_mut(1);
    f(t, &y, &mut first[0])?;
    let _ = rest;

    let mut h = initial_step(t0, t_end, &y, &k[0], opts);
    let mut steps = 0usize;

    while t < t_end {
        if steps >= opts.max_steps {
            return Err(Error::NoConvergence {
                what: "ode integration step budget".into(),
                iterations: opts.max_steps,
                residual: t_end - t,
            });
        }
        steps += 1;
        let min_step = opts.min_step_rel * t.abs().max(1.0);
        if h < min_step {
            return Err(Error::StepUnderflow { t, step: h });
        }
        if t + h > t_end {
            h = t_end - t;
        }

        // Stages 2..=7; stage 1 is carried over (first-same-as-last).
        let mut eval_failed = false;
        for s in 1..7 {
            for i in 0..dim {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s][j] * kj[i];
                }
                stage[i] = y[i] + h * acc;
            }
            if f(t + C[s] * h, &stage, &mut k[s]).is_err() {
                eval_failed = true;
                break;
            }
        }
        if eval_failed {
            // A failed coefficient evaluation inside the step is treated like
            // an oversized step: retry smaller until underflow reports it.
            h *= 0.5;
            continue;
        }
        // Fifth-order solution is stage 7's base point.
        for i in 0..dim {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate().take(6) {
                acc += A[6][j] * kj[i];
            }
            y_next[i] = y[i] + h * acc;
        }

        let mut err_sq = 0.0;
        for i in 0..dim {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            let scale = opts.atol + opts.rtol * y[i].abs().max(y_next[i].abs());
            let r = h * e / scale;
            err_sq += r * r;
        }
        let err = (err_sq / dim as f64).sqrt();

        if !(err <= 1.0) {
            // Rejected on error estimate (also catches NaN).
            let shrink = if err.is_finite() {
                (0.9 * err.powf(-0.2)).max(0.2)
            } else {
                0.2
            };
            h *= shrink;
            continue;
        }

        let q = (0..dim)
            .map(|i| h * D.iter().zip(k.iter()).map(|(d, kj)| d * kj[i]).sum::<f64>())
            .collect();
        let step = DenseStep {
            t0: t,
            t1: t + h,
            y0: y.clone(),
            y1: y_next.clone(),
            f0: k[0].clone(),
            f1: k[6].clone(),
            q,
        };
        match on_step(&step)? {
            StepControl::Reject => {
                h *= 0.5;
                continue;
            }
            StepControl::Stop => {
                return Ok((step.t1, y_next));
            }
            StepControl::Continue => {}
        }

        t = step.t1;
        std::mem::swap(&mut y, &mut y_next);
        k.swap(0, 6);

        let grow = if err > 0.0 {
            (0.9 * err.powf(-0.2)).min(5.0)
        } else {
            5.0
        };
        h = (h * grow).min(opts.max_step);
    }
    Ok((t, y))
}

/// Convenience wrapper when no per-step inspection is needed.
pub fn integrate_to<F>(f: F, t0: f64, y0: &[f64], t_end: f64, opts: &OdeOptions) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let (_, y) = integrate_adaptive(f, t0, y0, t_end, opts, |_| Ok(StepControl::Continue))?;
    Ok(y)
}

fn initial_step(t0: f64, t_end: f64, y: &[f64], f0: &[f64], opts: &OdeOptions) -> f64 {
    let span = t_end - t0;
    let d0 = rms(y);
    let d1 = rms(f0);
    let guess = if d1 > 1e-10 {
        0.01 * (d0.max(opts.atol)) / d1
    } else {
        1e-3 * span.abs().max(1.0)
    };
    guess.min(opts.max_step).min(span.abs()).max(1e-10)
}

fn rms(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
}
